#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "noisyq/adaptive.hpp"  // check_delta
#include "noisyq/bounds.hpp"
#include "noisyq/session.hpp"

namespace noisyq {

// Repetition counts are pure functions of (K, p, delta): the entire query
// schedule is fixed before the first observation. The log(K/delta) and
// log(K^2/delta) rates close the union bound at delta; the leading constants
// dominate the Chernoff exponent of the majority-vote analysis. At p = 0 a
// single pass is conclusive.

inline std::int64_t or_nonadaptive_reps(int k, double p, double delta) {
    if (p == 0.0) return 1;
    return static_cast<std::int64_t>(
        std::ceil(2.0 * std::log2(k / delta) / (1.0 - binary_entropy(p))));
}

inline std::int64_t search_nonadaptive_reps(double p, double delta) {
    if (p == 0.0) return 1;
    return static_cast<std::int64_t>(
        std::ceil(4.0 * std::log2(1.0 / delta) / (1.0 - binary_entropy(p))));
}

inline std::int64_t pairwise_nonadaptive_reps(int k, double p, double delta) {
    if (p == 0.0) return 1;
    return static_cast<std::int64_t>(std::ceil(
        2.0 * std::log2(static_cast<double>(k) * k / delta) / (1.0 - binary_entropy(p))));
}

// Each bit queried r times, per-bit majority (even-r ties read as 1), then OR.
inline AlgorithmResult<int> or_nonadaptive(OracleSession& session, double delta) {
    check_delta(delta);
    const int k = session.size();
    const std::int64_t reps = or_nonadaptive_reps(k, session.noise().p(), delta);
    const std::uint64_t start = session.queries_used();
    int out = 0;
    for (int i = 1; i <= k; ++i) {
        std::int64_t ones = 0;
        for (std::int64_t r = 0; r < reps; ++r) ones += session.query_bit(i);
        if (2 * ones >= reps) out = 1;
    }
    return {out, session.queries_used() - start};
}

// Score of slot l from per-element 1-counts: sum_{i<=l} N_i + sum_{i>l} (T - N_i).
// Exposed separately so a logged count vector reproduces the output bit-exactly.
inline int search_score_argmax(const std::vector<std::int64_t>& ones, std::int64_t reps) {
    const int k = static_cast<int>(ones.size());
    std::int64_t score = 0;
    for (int i = 0; i < k; ++i) score += reps - ones[static_cast<std::size_t>(i)];
    std::int64_t best = score;
    int best_slot = 0;
    for (int l = 1; l <= k; ++l) {
        score += 2 * ones[static_cast<std::size_t>(l) - 1] - reps;
        if (score > best) {  // ties resolve to the smallest slot
            best = score;
            best_slot = l;
        }
    }
    return best_slot;
}

// Compares the target against every element an equal number of times, then
// returns the argmax-score slot. Error < 2 delta / (1 - delta).
inline AlgorithmResult<int> search_nonadaptive(OracleSession& session, double delta) {
    check_delta(delta);
    const int k = session.size();
    const std::int64_t reps = search_nonadaptive_reps(session.noise().p(), delta);
    const std::uint64_t start = session.queries_used();
    std::vector<std::int64_t> ones(static_cast<std::size_t>(k), 0);
    for (int i = 1; i <= k; ++i) {
        for (std::int64_t r = 0; r < reps; ++r) {
            ones[static_cast<std::size_t>(i) - 1] += session.query_target_comparison(i);
        }
    }
    return {search_score_argmax(ones, reps), session.queries_used() - start};
}

namespace detail {

// beats[i][j] = majority of r comparisons says item i+1 > item j+1.
// Per-pair ties go to the lower index.
inline std::vector<std::vector<bool>> pairwise_majority_matrix(OracleSession& session,
                                                               std::int64_t reps) {
    const int k = session.size();
    std::vector<std::vector<bool>> beats(static_cast<std::size_t>(k),
                                         std::vector<bool>(static_cast<std::size_t>(k), false));
    for (int i = 1; i <= k; ++i) {
        for (int j = i + 1; j <= k; ++j) {
            std::int64_t ones = 0;
            for (std::int64_t r = 0; r < reps; ++r) ones += session.query_comparison(i, j);
            const bool i_wins = 2 * ones >= reps;
            beats[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j) - 1] = i_wins;
            beats[static_cast<std::size_t>(j) - 1][static_cast<std::size_t>(i) - 1] = !i_wins;
        }
    }
    return beats;
}

inline std::vector<int> copeland_scores(const std::vector<std::vector<bool>>& beats) {
    const int k = static_cast<int>(beats.size());
    std::vector<int> score(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            if (i != j && beats[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
                ++score[static_cast<std::size_t>(i)];
            }
        }
    }
    return score;
}

}  // namespace detail

// Round-robin MAX: every unordered pair compared r times, winner by Copeland
// score (most pairwise majority wins; tie -> smallest index).
inline AlgorithmResult<int> max_nonadaptive(OracleSession& session, double delta) {
    check_delta(delta);
    const std::int64_t reps = pairwise_nonadaptive_reps(session.size(), session.noise().p(), delta);
    const std::uint64_t start = session.queries_used();
    const auto beats = detail::pairwise_majority_matrix(session, reps);
    const auto score = detail::copeland_scores(beats);
    const int winner =
        1 + static_cast<int>(std::max_element(score.begin(), score.end()) - score.begin());
    return {winner, session.queries_used() - start};
}

// Round-robin SORT: order by Copeland score; equal-score runs are settled by
// the pairwise majority edge. Any intransitive sample already sits inside the
// union-bound failure budget.
inline AlgorithmResult<std::vector<int>> sort_nonadaptive(OracleSession& session, double delta) {
    check_delta(delta);
    const int k = session.size();
    const std::int64_t reps = pairwise_nonadaptive_reps(k, session.noise().p(), delta);
    const std::uint64_t start = session.queries_used();
    const auto beats = detail::pairwise_majority_matrix(session, reps);
    const auto score = detail::copeland_scores(beats);
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 1);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const int sa = score[static_cast<std::size_t>(a) - 1];
        const int sb = score[static_cast<std::size_t>(b) - 1];
        return sa != sb ? sa < sb : a < b;  // ascending value order
    });
    // bubble within equal-score runs using the majority edge
    for (std::size_t lo = 0; lo < order.size();) {
        std::size_t hi = lo + 1;
        while (hi < order.size() && score[static_cast<std::size_t>(order[hi]) - 1] ==
                                        score[static_cast<std::size_t>(order[lo]) - 1]) {
            ++hi;
        }
        for (std::size_t a = lo; a + 1 < hi; ++a) {
            for (std::size_t b = lo; b + 1 < hi - (a - lo); ++b) {
                if (beats[static_cast<std::size_t>(order[b]) - 1][static_cast<std::size_t>(order[b + 1]) - 1]) {
                    std::swap(order[b], order[b + 1]);
                }
            }
        }
        lo = hi;
    }
    return {std::move(order), session.queries_used() - start};
}

}  // namespace noisyq
