#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "noisyq/bounds.hpp"

namespace noisyq {

// Bayes update of the belief a that the queried hypothesis holds, after one
// observation through BSC(p). obs = 1 supports the hypothesis.
inline double posterior_update(double a, int obs, double p) {
    if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("posterior_update: 0 <= p < 1/2 required");
    if ((a == 0.0 || a == 1.0) && p > 0.0) {
        throw std::invalid_argument("posterior_update: posterior already absorbed");
    }
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("posterior_update: a must be in [0,1]");
    if (obs != 0 && obs != 1) throw std::invalid_argument("posterior_update: obs must be 0/1");
    if (obs == 1) return (1.0 - p) * a / ((1.0 - p) * a + p * (1.0 - a));
    return p * a / (p * a + (1.0 - p) * (1.0 - a));
}

struct LoopDecision {
    bool decided_one;         // posterior left through the upper threshold
    std::uint64_t queries;
};

// Posterior stopping loop started at a = 1/2: repeat one noisy observation of a
// binary hypothesis until a leaves (delta_tilde, 1 - delta_tilde). Run as the
// equivalent integer walk on the net observation count s, absorbing at |s| = m
// with m = barrier_steps(p, ln((1 - delta_tilde)/delta_tilde)); this keeps the
// stopping rule exact regardless of how small the threshold is.
// At p = 0 one observation is conclusive.
template <typename QueryFn>
LoopDecision run_posterior_loop(QueryFn&& query, double p, double ln_confidence_ratio) {
    if (p == 0.0) {
        return {query() == 1, 1};
    }
    const int m = barrier_steps(p, ln_confidence_ratio);
    int s = 0;
    std::uint64_t q = 0;
    while (s > -m && s < m) {
        s += query() == 1 ? 1 : -1;
        ++q;
    }
    return {s >= m, q};
}

// ln((1 - d^e)/d^e) for a threshold given as delta^exponent, computed from
// logs so thresholds far below double range still give the right barrier.
inline double ln_confidence_ratio_pow(double delta, double exponent) {
    const double ln_dt = exponent * std::log(delta);
    const double dt = std::exp(ln_dt);
    return (dt > 0.0 ? std::log1p(-dt) : 0.0) - ln_dt;
}

inline double ln_confidence_ratio(double delta) {
    return std::log1p(-delta) - std::log(delta);
}

}  // namespace noisyq
