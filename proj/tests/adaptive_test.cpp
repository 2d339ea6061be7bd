#include <cmath>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "noisyq/adaptive.hpp"
#include "noisyq/bounds.hpp"
#include "noisyq/harness.hpp"
#include "noisyq/posterior.hpp"

namespace noisyq {
namespace {

TEST(DeltaValidation, RejectsOutOfRange) {
    OracleSession s(BitInstance({1}), NoiseModel(0.1), 1);
    EXPECT_THROW(or_tournament_fixed(s, 0.0), std::invalid_argument);
    EXPECT_THROW(or_tournament_fixed(s, 0.49), std::invalid_argument);
    EXPECT_THROW(or_tournament_variable(s, -0.1), std::invalid_argument);
    EXPECT_THROW(search_adaptive(s, 0.5), std::invalid_argument);
}

TEST(PosteriorUpdate, BayesRule) {
    EXPECT_DOUBLE_EQ(posterior_update(0.5, 1, 0.1), 0.9);
    EXPECT_DOUBLE_EQ(posterior_update(0.5, 0, 0.1), 0.1);
    EXPECT_DOUBLE_EQ(posterior_update(0.9, 1, 0.25), 0.9 * 0.75 / (0.9 * 0.75 + 0.1 * 0.25));
    EXPECT_THROW(posterior_update(1.5, 1, 0.1), std::invalid_argument);
    EXPECT_THROW(posterior_update(0.5, 2, 0.1), std::invalid_argument);
}

TEST(PosteriorLoop, UnanimousStreamStopsAtBarrier) {
    // all-ones observations drive the walk straight to +m
    for (double p : {0.1, 0.3}) {
        for (double delta : {0.1, 0.001}) {
            const int m = barrier_steps_for_delta(p, delta);
            const LoopDecision dec =
                run_posterior_loop([] { return 1; }, p, ln_confidence_ratio(delta));
            EXPECT_TRUE(dec.decided_one);
            EXPECT_EQ(dec.queries, static_cast<std::uint64_t>(m));
            const LoopDecision neg =
                run_posterior_loop([] { return 0; }, p, ln_confidence_ratio(delta));
            EXPECT_FALSE(neg.decided_one);
            EXPECT_EQ(neg.queries, static_cast<std::uint64_t>(m));
        }
    }
}

TEST(PosteriorLoop, NoiselessSingleQuery) {
    const LoopDecision dec = run_posterior_loop([] { return 1; }, 0.0, ln_confidence_ratio(0.01));
    EXPECT_TRUE(dec.decided_one);
    EXPECT_EQ(dec.queries, 1u);
}

TEST(OrTournament, NoiselessBothVariantsExact) {
    for (int k = 1; k <= 10; ++k) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
            std::vector<int> bits(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) bits[static_cast<std::size_t>(i)] = (mask >> i) & 1;
            const BitInstance inst(bits);
            OracleSession s1(inst, NoiseModel(0.0), 1, mask);
            OracleSession s2(inst, NoiseModel(0.0), 1, mask);
            EXPECT_EQ(or_tournament_fixed(s1, 0.1).output, inst.or_value());
            EXPECT_EQ(or_tournament_variable(s2, 0.1).output, inst.or_value());
        }
    }
}

TEST(OrTournamentVariable, NoiselessQueryCost) {
    // p = 0: every posterior loop is one query. Round i touches ceil(|alive|/2)
    // odd elements, plus the final confirmation query.
    OracleSession s(BitInstance({0, 0, 0, 0, 0, 0, 0}), NoiseModel(0.0), 1);
    const auto out = or_tournament_variable(s, 0.1);
    EXPECT_EQ(out.output, 0);
    EXPECT_EQ(out.queries, 4u + 2u + 1u);  // 7 -> 3 -> 1 (decided-0 keeps partners), then final
}

TEST(OrTournamentVariable, ErrorRateWithinBudget) {
    // all-zeros is the hardest instance for false positives
    const double delta = 0.05;
    const std::uint64_t trials = 5000;
    std::uint64_t errors = 0;
    const BitInstance inst(std::vector<int>(16, 0));
    for (std::uint64_t t = 0; t < trials; ++t) {
        OracleSession s(inst, NoiseModel(0.2), 77, t);
        errors += or_tournament_variable(s, delta).output != 0;
    }
    EXPECT_LE(wilson95_lower(errors, trials), 2 * delta);
}

TEST(CompareVariable, RejectsEqualIndices) {
    OracleSession s(RankInstance({1, 2}), NoiseModel(0.1), 1);
    EXPECT_THROW(compare_variable(s, 1, 1, 0.1), std::invalid_argument);
}

TEST(CompareVariable, QueryCostMatchesLoopStats) {
    // mean queries within 3% of the exact expected absorption time at 2e4 trials
    const double p = 0.3, delta = 0.01;
    const LoopStats exact = posterior_loop_stats(p, delta);
    const std::uint64_t trials = 20000;
    std::uint64_t errors = 0, qsum = 0;
    const RankInstance inst = RankInstance::identity(2);
    for (std::uint64_t t = 0; t < trials; ++t) {
        OracleSession s(inst, NoiseModel(p), 31, t);
        const CompareOutcome out = compare_variable(s, 2, 1, delta);
        errors += out.winner != 2;
        qsum += out.queries;
    }
    const double mean = static_cast<double>(qsum) / static_cast<double>(trials);
    EXPECT_NEAR(mean, exact.expected_queries, 0.03 * exact.expected_queries);
    EXPECT_LE(wilson95_lower(errors, trials), delta);
}

TEST(MaxTournament, NoiselessExactAllPermutations) {
    for (int k = 1; k <= 6; ++k) {
        std::vector<int> ranks(static_cast<std::size_t>(k));
        std::iota(ranks.begin(), ranks.end(), 1);
        do {
            const RankInstance inst(ranks);
            OracleSession s1(inst, NoiseModel(0.0), 1, 0);
            OracleSession s2(inst, NoiseModel(0.0), 1, 0);
            EXPECT_EQ(max_tournament_fixed(s1, 0.1).output, inst.argmax());
            const auto v = max_tournament_variable(s2, 0.1);
            EXPECT_EQ(v.output, inst.argmax());
            EXPECT_EQ(v.queries, static_cast<std::uint64_t>(k - 1));  // one query per match
        } while (std::next_permutation(ranks.begin(), ranks.end()));
    }
}

TEST(MaxTournamentVariable, ErrorRateWithinBudget) {
    const double delta = 0.05;
    const std::uint64_t trials = 4000;
    std::uint64_t errors = 0;
    const RankInstance inst({5, 2, 8, 1, 7, 3, 6, 4});
    for (std::uint64_t t = 0; t < trials; ++t) {
        OracleSession s(inst, NoiseModel(0.2), 55, t);
        errors += max_tournament_variable(s, delta).output != inst.argmax();
    }
    EXPECT_LE(wilson95_lower(errors, trials), 2 * delta);
}

TEST(SearchAdaptive, NoiselessIsBinarySearch) {
    for (int k = 1; k <= 33; ++k) {
        for (int slot = 0; slot <= k; ++slot) {
            OracleSession s(SearchInstance(k, slot), NoiseModel(0.0), 1, 0);
            const auto out = search_adaptive(s, 0.1);
            EXPECT_EQ(out.output, slot);
            EXPECT_LE(out.queries, static_cast<std::uint64_t>(
                                       std::ceil(std::log2(static_cast<double>(k) + 1))));
        }
    }
}

TEST(SearchAdaptive, FixedBudgetIsRespected) {
    for (int steps : {1, 5, 20}) {
        OracleSession s(SearchInstance(10, 4), NoiseModel(0.2), 3, 0);
        const auto out = search_adaptive(s, 0.1, steps);
        EXPECT_EQ(out.queries, static_cast<std::uint64_t>(steps));
        EXPECT_EQ(out.queries, s.queries_used());
    }
    OracleSession s(SearchInstance(10, 4), NoiseModel(0.2), 3, 0);
    EXPECT_THROW(search_adaptive(s, 0.1, 0), std::invalid_argument);
}

TEST(SearchAdaptive, VariableErrorWithinBudget) {
    const int k = 16;
    const double p = 0.15, delta = 0.05;
    const std::uint64_t trials = 2000;
    for (int slot : {0, 7, 16}) {
        std::uint64_t errors = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            OracleSession s(SearchInstance(k, slot), NoiseModel(p), 91, t);
            errors += search_adaptive(s, delta).output != slot;
        }
        EXPECT_LE(wilson95_lower(errors, trials), delta) << "slot " << slot;
    }
}

TEST(SortAdaptive, NoiselessInsertionCost) {
    // p = 0: inserting into n sorted items costs ceil(log2(n + 1)) queries
    for (int k = 1; k <= 12; ++k) {
        std::vector<int> ranks(static_cast<std::size_t>(k));
        std::iota(ranks.rbegin(), ranks.rend(), 1);  // reversed order
        const RankInstance inst(ranks);
        OracleSession s(inst, NoiseModel(0.0), 1, 0);
        const auto out = sort_adaptive(s, 0.1);
        EXPECT_EQ(out.output, inst.ascending_order());
        // each insertion into n items needs between floor and ceil of log2(n+1)
        std::uint64_t lo = 0, hi = 0;
        for (int n = 1; n < k; ++n) {
            lo += static_cast<std::uint64_t>(std::floor(std::log2(n + 1.0)));
            hi += static_cast<std::uint64_t>(std::ceil(std::log2(n + 1.0)));
        }
        EXPECT_GE(out.queries, lo);
        EXPECT_LE(out.queries, hi);
    }
}

TEST(SortAdaptive, NoisyErrorWithinBudget) {
    const double delta = 0.1;
    const std::uint64_t trials = 2000;
    std::uint64_t errors = 0;
    const RankInstance inst({4, 1, 6, 3, 5, 2, 8, 7});
    for (std::uint64_t t = 0; t < trials; ++t) {
        OracleSession s(inst, NoiseModel(0.1), 13, t);
        errors += sort_adaptive(s, delta).output != inst.ascending_order();
    }
    EXPECT_LE(wilson95_lower(errors, trials), delta);
}

}  // namespace
}  // namespace noisyq
