#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "noisyq/instance.hpp"
#include "noisyq/noise.hpp"

namespace noisyq {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based generator: the t-th uniform of stream (seed, stream) is a pure
// function of (seed, stream, t). Trials are reproducible and order-independent.
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t h = mix64(mix64(mix64(seed) ^ stream) ^ counter);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Query target, recorded when logging is enabled. For bit queries j == 0.
struct QueryRecord {
    int i;
    int j;
    bool operator==(const QueryRecord&) const = default;
};

template <typename T>
struct AlgorithmResult {
    T output;
    std::uint64_t queries = 0;
};

// The only gateway to noisy observations. Each observation costs exactly one
// counter increment; two sessions with the same (instance, noise, seed, stream)
// replay identical observation streams for identical query sequences.
// Single-threaded by contract; hand off between threads, never share.
class OracleSession {
  public:
    OracleSession(Instance instance, NoiseModel noise, std::uint64_t seed, std::uint64_t stream = 0)
        : instance_(std::move(instance)), noise_(noise), seed_(seed), stream_(stream) {}

    int size() const { return instance_size(instance_); }
    const NoiseModel& noise() const { return noise_; }
    std::uint64_t queries_used() const { return queries_; }
    const Instance& instance() const { return instance_; }

    void enable_log() { logging_ = true; }
    const std::vector<QueryRecord>& log() const { return log_; }

    // Noisy read of bit k, k in [1, K].
    int query_bit(int k) {
        const auto* inst = std::get_if<BitInstance>(&instance_);
        if (!inst) throw std::logic_error("query_bit: session does not wrap a BitInstance");
        const int truth = inst->bit(k);
        if (logging_) log_.push_back({k, 0});
        return observe(truth);
    }

    // Noisy comparison; returns 1 for "X_i > X_j". Requires i != j.
    int query_comparison(int i, int j) {
        const auto* inst = std::get_if<RankInstance>(&instance_);
        if (!inst) throw std::logic_error("query_comparison: session does not wrap a RankInstance");
        if (i == j) throw std::invalid_argument("query_comparison: i == j");
        const int truth = inst->rank(i) > inst->rank(j) ? 1 : 0;
        if (logging_) log_.push_back({i, j});
        return observe(truth);
    }

    // Noisy comparison of the hidden target against element i; returns 1 for "X > X_i".
    int query_target_comparison(int i) {
        const auto* inst = std::get_if<SearchInstance>(&instance_);
        if (!inst) throw std::logic_error("query_target_comparison: session does not wrap a SearchInstance");
        if (i < 1 || i > inst->size()) throw std::out_of_range("query_target_comparison: index out of range");
        const int truth = i <= inst->target_slot() ? 1 : 0;
        if (logging_) log_.push_back({i, -1});
        return observe(truth);
    }

  private:
    int observe(int truth) {
        const double u = detail::counter_uniform(seed_, stream_, queries_);
        ++queries_;
        return u < noise_.p() ? 1 - truth : truth;
    }

    Instance instance_;
    NoiseModel noise_;
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t queries_ = 0;
    bool logging_ = false;
    std::vector<QueryRecord> log_;
};

}  // namespace noisyq
