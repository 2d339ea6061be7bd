#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "noisyq/bounds.hpp"
#include "noisyq/posterior.hpp"
#include "noisyq/session.hpp"

namespace noisyq {

inline void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 0.49)) {
        throw std::invalid_argument("delta must be in (0, 0.49)");
    }
}

namespace detail {

inline std::vector<int> full_index_list(int k) {
    std::vector<int> v(static_cast<std::size_t>(k));
    std::iota(v.begin(), v.end(), 1);
    return v;
}

}  // namespace detail

// Fixed-length tournament for OR. Halving rounds; round i queries each
// survivor tournament_round_reps(i) times and keeps the element of each pair
// with more observed 1's (tie: keep the lower index). An unpaired trailing
// element is still queried and advances. The query total matches
// tournament_query_count exactly; error <= 2 delta.
inline AlgorithmResult<int> or_tournament_fixed(OracleSession& session, double delta) {
    check_delta(delta);
    const double p = session.noise().p();
    const std::uint64_t start = session.queries_used();
    std::vector<int> alive = detail::full_index_list(session.size());
    for (int round = 1; alive.size() > 1; ++round) {
        const std::int64_t reps = tournament_round_reps(round, p, delta);
        std::vector<std::int64_t> ones(alive.size(), 0);
        for (std::size_t e = 0; e < alive.size(); ++e) {
            for (std::int64_t r = 0; r < reps; ++r) ones[e] += session.query_bit(alive[e]);
        }
        std::vector<int> next;
        for (std::size_t j = 0; 2 * j < alive.size(); ++j) {
            const std::size_t a = 2 * j, b = 2 * j + 1;
            if (b < alive.size()) {
                next.push_back(ones[a] >= ones[b] ? alive[a] : alive[b]);
            } else {
                next.push_back(alive[a]);
            }
        }
        alive = std::move(next);
    }
    const std::int64_t reps = tournament_final_reps(p, delta);
    std::int64_t ones = 0;
    for (std::int64_t r = 0; r < reps; ++r) ones += session.query_bit(alive[0]);
    return {2 * ones > reps ? 1 : 0, session.queries_used() - start};
}

// Variable-length tournament for OR. Round i decides the odd element of each
// pair with a posterior loop at threshold delta^(2(2i-1)): judged 0 removes it,
// judged 1 removes its (unqueried) partner. A final loop at threshold delta on
// the survivor gives the output. Error <= 2 delta.
inline AlgorithmResult<int> or_tournament_variable(OracleSession& session, double delta) {
    check_delta(delta);
    const double p = session.noise().p();
    const std::uint64_t start = session.queries_used();
    std::vector<int> alive = detail::full_index_list(session.size());
    for (int round = 1; alive.size() > 1; ++round) {
        const double lncr = ln_confidence_ratio_pow(delta, 2.0 * (2 * round - 1));
        std::vector<int> next;
        for (std::size_t j = 0; 2 * j < alive.size(); ++j) {
            const std::size_t a = 2 * j, b = 2 * j + 1;
            const LoopDecision dec =
                run_posterior_loop([&] { return session.query_bit(alive[a]); }, p, lncr);
            if (dec.decided_one) {
                next.push_back(alive[a]);  // partner (if any) removed unqueried
            } else if (b < alive.size()) {
                next.push_back(alive[b]);
            }
        }
        alive = std::move(next);
    }
    const LoopDecision dec = run_posterior_loop([&] { return session.query_bit(alive[0]); }, p,
                                                ln_confidence_ratio(delta));
    return {dec.decided_one ? 1 : 0, session.queries_used() - start};
}

struct CompareOutcome {
    int winner;
    std::uint64_t queries;
};

// Variable-length comparison: posterior loop on "i beats j", stopping when the
// belief leaves (delta, 1-delta). Wrong winner with probability <= delta;
// expected queries given exactly by posterior_loop_stats(p, delta).
inline CompareOutcome compare_variable(OracleSession& session, int i, int j, double delta) {
    check_delta(delta);
    if (i == j) throw std::invalid_argument("compare_variable: i == j");
    const double p = session.noise().p();
    const LoopDecision dec = run_posterior_loop([&] { return session.query_comparison(i, j); }, p,
                                                ln_confidence_ratio(delta));
    return {dec.decided_one ? i : j, dec.queries};
}

// Fixed-length MAX tournament: the OR bracket with repeated pairwise
// comparisons and per-pair majority (tie: keep the lower index). The survivor
// is the answer; there is no final stage.
inline AlgorithmResult<int> max_tournament_fixed(OracleSession& session, double delta) {
    check_delta(delta);
    const double p = session.noise().p();
    const std::uint64_t start = session.queries_used();
    std::vector<int> alive = detail::full_index_list(session.size());
    for (int round = 1; alive.size() > 1; ++round) {
        const std::int64_t reps = tournament_round_reps(round, p, delta);
        std::vector<int> next;
        for (std::size_t j = 0; 2 * j < alive.size(); ++j) {
            const std::size_t a = 2 * j, b = 2 * j + 1;
            if (b >= alive.size()) {
                next.push_back(alive[a]);
                continue;
            }
            std::int64_t ones = 0;
            for (std::int64_t r = 0; r < reps; ++r) {
                ones += session.query_comparison(alive[a], alive[b]);
            }
            next.push_back(2 * ones >= reps ? alive[a] : alive[b]);
        }
        alive = std::move(next);
    }
    return {alive[0], session.queries_used() - start};
}

// Variable-length MAX tournament: bracket of posterior-loop comparisons with
// per-round confidence delta^(2(2i-1)).
inline AlgorithmResult<int> max_tournament_variable(OracleSession& session, double delta) {
    check_delta(delta);
    const double p = session.noise().p();
    const std::uint64_t start = session.queries_used();
    std::vector<int> alive = detail::full_index_list(session.size());
    for (int round = 1; alive.size() > 1; ++round) {
        const double lncr = ln_confidence_ratio_pow(delta, 2.0 * (2 * round - 1));
        std::vector<int> next;
        for (std::size_t j = 0; 2 * j < alive.size(); ++j) {
            const std::size_t a = 2 * j, b = 2 * j + 1;
            if (b >= alive.size()) {
                next.push_back(alive[a]);
                continue;
            }
            const LoopDecision dec = run_posterior_loop(
                [&] { return session.query_comparison(alive[a], alive[b]); }, p, lncr);
            next.push_back(dec.decided_one ? alive[a] : alive[b]);
        }
        alive = std::move(next);
    }
    return {alive[0], session.queries_used() - start};
}

namespace detail {

struct SlotSearchOutcome {
    int slot;
    std::uint64_t queries;
};

// Bayesian search over the n+1 gaps of an n-element sorted sequence.
// query(i) makes one noisy observation of "target above element i", i in [1,n].
// Each step queries the boundary closest to the posterior median, then
// reweights slots by (1-p)/p consistency. Weights live in log domain and are
// renormalized every step. Variable mode stops once the top slot reaches
// posterior mass 1-delta; fixed mode runs exactly *steps* queries and returns
// the MAP slot. At p = 0 this collapses to classic binary search.
template <typename QueryFn>
SlotSearchOutcome posterior_median_slot_search(int n, double p, double delta,
                                              std::optional<int> steps, QueryFn&& query) {
    if (steps && *steps < 1) throw std::invalid_argument("slot search: fixed step count must be >= 1");
    std::uint64_t q = 0;
    if (p == 0.0) {
        int lo = 0, hi = n;
        while (lo < hi) {
            const int mid = (lo + hi + 1) / 2;  // element index in [1, n]
            ++q;
            if (query(mid) == 1) lo = mid; else hi = mid - 1;
        }
        return {lo, q};
    }
    const double l1 = std::log1p(-p), l0 = std::log(p);
    std::vector<double> lw(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> prob(lw.size());
    for (;;) {
        double mx = *std::max_element(lw.begin(), lw.end());
        double sum = 0.0;
        for (std::size_t s = 0; s < lw.size(); ++s) {
            prob[s] = std::exp(lw[s] - mx);
            sum += prob[s];
        }
        int best_slot = 0;
        double best_mass = -1.0;
        for (std::size_t s = 0; s < prob.size(); ++s) {
            prob[s] /= sum;
            if (prob[s] > best_mass) {
                best_mass = prob[s];
                best_slot = static_cast<int>(s);
            }
        }
        if (steps ? q >= static_cast<std::uint64_t>(*steps) : best_mass >= 1.0 - delta) {
            return {best_slot, q};
        }
        // boundary i splits slots {0..i-1} from {i..n}; take the median split
        int qi = 1;
        double cum = prob[0], best_gap = std::abs(cum - 0.5);
        double c = cum;
        for (int i = 2; i <= n; ++i) {
            c += prob[static_cast<std::size_t>(i) - 1];
            const double gap = std::abs(c - 0.5);
            if (gap < best_gap) {
                best_gap = gap;
                qi = i;
            }
        }
        const int obs = query(qi);
        ++q;
        for (std::size_t s = 0; s < lw.size(); ++s) {
            const bool above = static_cast<int>(s) >= qi;  // slot consistent with obs = 1
            lw[s] += (obs == 1) == above ? l1 : l0;
        }
        // keep log weights bounded
        mx = *std::max_element(lw.begin(), lw.end());
        for (double& w : lw) w -= mx;
    }
}

}  // namespace detail

// Adaptive SEARCH: posterior over the K+1 slots, queried at the posterior
// median. fixed_steps empty = variable length (stop at confidence 1-delta).
inline AlgorithmResult<int> search_adaptive(OracleSession& session, double delta,
                                            std::optional<int> fixed_steps = std::nullopt) {
    check_delta(delta);
    const double p = session.noise().p();
    const std::uint64_t start = session.queries_used();
    const auto out = detail::posterior_median_slot_search(
        session.size(), p, delta, fixed_steps,
        [&](int i) { return session.query_target_comparison(i); });
    return {out.slot, session.queries_used() - start};
}

// Insertion sort via noisy posterior-median searching, per-insertion
// confidence delta / K. Output lists item indices in ascending value order.
inline AlgorithmResult<std::vector<int>> sort_adaptive(OracleSession& session, double delta) {
    check_delta(delta);
    const int k = session.size();
    const double p = session.noise().p();
    const double per_item = delta / k;
    const std::uint64_t start = session.queries_used();
    std::vector<int> sorted;
    sorted.reserve(static_cast<std::size_t>(k));
    for (int item = 1; item <= k; ++item) {
        if (sorted.empty()) {
            sorted.push_back(item);
            continue;
        }
        const auto out = detail::posterior_median_slot_search(
            static_cast<int>(sorted.size()), p, per_item, std::nullopt,
            [&](int i) { return session.query_comparison(item, sorted[static_cast<std::size_t>(i) - 1]); });
        sorted.insert(sorted.begin() + out.slot, item);
    }
    return {std::move(sorted), session.queries_used() - start};
}

}  // namespace noisyq
