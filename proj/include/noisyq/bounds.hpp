#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace noisyq {

// All bound formulas use base-2 logarithms (entropy in bits). The asymptotic
// expressions are evaluated with unit constants; BoundValue carries a note.

inline double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p must be in [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// D_KL(Bern(p) || Bern(1-p)) = (1-2p) log2((1-p)/p), in bits.
inline double kl_flip(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("kl_flip: divergence is infinite at p in {0,1}");
    }
    return (1.0 - 2.0 * p) * std::log2((1.0 - p) / p);
}

enum class Problem { Or, Max, Search, Sort };
enum class Setting { FixedAdaptive, FixedNonadaptive, VariableAdaptive };

inline std::string to_string(Problem pr) {
    switch (pr) {
        case Problem::Or: return "or";
        case Problem::Max: return "max";
        case Problem::Search: return "search";
        case Problem::Sort: return "sort";
    }
    throw std::logic_error("bad Problem");
}

inline std::string to_string(Setting s) {
    switch (s) {
        case Setting::FixedAdaptive: return "fixed_adaptive";
        case Setting::FixedNonadaptive: return "fixed_nonadaptive";
        case Setting::VariableAdaptive: return "variable_adaptive";
    }
    throw std::logic_error("bad Setting");
}

struct BoundSpec {
    Problem problem;
    Setting setting;
    int k;
    double p;
    double delta;

    BoundSpec(Problem pr, Setting s, int k_, double p_, double delta_)
        : problem(pr), setting(s), k(k_), p(p_), delta(delta_) {
        if (k < 1) throw std::invalid_argument("BoundSpec: K >= 1 required");
        if (!(p_ > 0.0 && p_ < 0.5)) throw std::invalid_argument("BoundSpec: 0 < p < 1/2 required");
        if (!(delta_ > 0.0 && delta_ < 0.49)) throw std::invalid_argument("BoundSpec: 0 < delta < 0.49 required");
    }
};

struct BoundValue {
    double lower;
    double upper;
    std::string constants_note = "Theta/O/Omega expressions evaluated with unit constants";
};

// Evaluates the matching row of the bound summary. Variable-length rows are a
// single matching expression, returned as both fields.
inline BoundValue bound_table(const BoundSpec& s) {
    const double K = s.k;
    const double cap = 1.0 - binary_entropy(s.p);          // 1 - H(p)
    const double kl = kl_flip(s.p);                        // D_KL(p || 1-p)
    const double l1d = std::log2(1.0 / s.delta);           // log(1/delta)
    const double lKd = std::log2(K / s.delta);             // log(K/delta)
    const double lK = std::log2(K);                        // log(K)

    switch (s.setting) {
        case Setting::FixedAdaptive:
            switch (s.problem) {
                case Problem::Or:
                case Problem::Max:
                    return {K / cap + K * l1d / kl, K * l1d / cap};
                case Problem::Search:
                    return {lK / cap + l1d / kl, lKd / cap};
                case Problem::Sort:
                    return {K * lK / cap + K * lKd / kl, K * lKd / cap};
            }
            break;
        case Setting::FixedNonadaptive:
            switch (s.problem) {
                case Problem::Or:
                    return {std::max({K, K * lK * s.p / cap, K * lK / std::log2((1.0 - s.p) / s.p)}),
                            K * lKd / cap};
                case Problem::Max:
                    return {K * K / cap + K * K * l1d / kl, K * K * lKd / cap};
                case Problem::Search:
                    return {K / cap + K * l1d / kl, K * l1d / cap};
                case Problem::Sort:
                    return {K * K + K * K * lK / kl, K * K * lKd / cap};
            }
            break;
        case Setting::VariableAdaptive: {
            double v = 0.0;
            switch (s.problem) {
                case Problem::Or:
                case Problem::Max:
                    v = K / cap + K * l1d / kl;
                    break;
                case Problem::Search:
                    v = lK / cap + l1d / kl;
                    break;
                case Problem::Sort:
                    v = K * lK / cap + K * lKd / kl;
                    break;
            }
            return {v, v};
        }
    }
    throw std::invalid_argument("bound_table: unknown problem/setting combination");
}

// Exact error probability of an n-sample majority vote over BSC(p): ties (even
// n) count as errors, so this is P(Bin(n, p) >= n/2). Summed from the smallest
// tail term upward; stable for n up to 1e5.
inline double majority_error_exact(std::int64_t n, double p) {
    if (n < 1) throw std::invalid_argument("majority_error_exact: n >= 1 required");
    if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("majority_error_exact: 0 <= p < 1/2 required");
    if (p == 0.0) return 0.0;
    const std::int64_t k0 = (n + 1) / 2;  // ceil(n/2): strict majority for odd n, tie included for even n
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    double sum = 0.0;
    for (std::int64_t k = n; k >= k0; --k) {
        const double lt = lgn - std::lgamma(static_cast<double>(k) + 1.0) -
                          std::lgamma(static_cast<double>(n - k) + 1.0) +
                          static_cast<double>(k) * lp + static_cast<double>(n - k) * lq;
        sum += std::exp(lt);
    }
    return sum;
}

// Smallest integer step count m with m * log((1-p)/p) >= ln_confidence_ratio.
// A small slack keeps exactly-integer ratios (e.g. p = delta = 1/4) from being
// bumped up by floating-point noise.
inline int barrier_steps(double p, double ln_confidence_ratio) {
    const double step = std::log((1.0 - p) / p);
    const int m = static_cast<int>(std::ceil(ln_confidence_ratio / step - 1e-9));
    return m < 1 ? 1 : m;
}

inline int barrier_steps_for_delta(double p, double delta) {
    return barrier_steps(p, std::log1p(-delta) - std::log(delta));
}

struct LoopStats {
    double error;             // probability of absorbing at the wrong barrier
    double expected_queries;  // expected absorption time
};

// Gambler's-ruin closed form for a +-1 random walk started at 0 with barriers
// at +-m, stepping toward the correct barrier with probability 1-p.
inline LoopStats loop_stats_for_barrier(double p, int m) {
    if (m < 1) throw std::invalid_argument("loop_stats_for_barrier: m >= 1 required");
    if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("loop_stats_for_barrier: 0 < p < 1/2 required");
    const double rm = std::exp(static_cast<double>(m) * std::log(p / (1.0 - p)));
    return {rm / (1.0 + rm),
            static_cast<double>(m) / (1.0 - 2.0 * p) * (1.0 - rm) / (1.0 + rm)};
}

// Exact stats of the posterior stopping loop: query until the posterior leaves
// (delta, 1-delta). Equivalent to the walk above with
// m = ceil(log((1-delta)/delta) / log((1-p)/p)).
inline LoopStats posterior_loop_stats(double p, double delta) {
    if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("posterior_loop_stats: 0 < delta < 1/2 required");
    if (p == 0.0) return {0.0, 1.0};  // noiseless: one observation is conclusive
    if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("posterior_loop_stats: 0 <= p < 1/2 required");
    return loop_stats_for_barrier(p, barrier_steps_for_delta(p, delta));
}

// Per-element repetition count in round i of the fixed-length tournament.
inline std::int64_t tournament_round_reps(int round, double p, double delta) {
    const double cap = 1.0 - binary_entropy(p);
    return static_cast<std::int64_t>(
        std::ceil(4.0 * (2.0 * round - 1.0) * std::log2(1.0 / delta) / cap));
}

inline std::int64_t tournament_final_reps(double p, double delta) {
    const double cap = 1.0 - binary_entropy(p);
    return static_cast<std::int64_t>(std::ceil(6.0 * std::log2(1.0 / delta) / cap));
}

// Exact deterministic query total of the fixed-length tournament:
// ceil(6 log(1/d)/(1-H)) + sum_i ceil(4(2i-1) log(1/d)/(1-H)) * ceil(K/2^(i-1)).
inline std::int64_t tournament_query_count(int k, double p, double delta) {
    if (k < 1) throw std::invalid_argument("tournament_query_count: K >= 1 required");
    std::int64_t total = tournament_final_reps(p, delta);
    std::int64_t size = k;
    for (int i = 1; size > 1; ++i) {
        total += tournament_round_reps(i, p, delta) * size;
        size = (size + 1) / 2;
    }
    return total;
}

}  // namespace noisyq
