#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "noisyq/instance.hpp"
#include "noisyq/noise.hpp"
#include "noisyq/session.hpp"

namespace noisyq {
namespace {

TEST(NoiseModel, RejectsInvalidCrossover) {
    EXPECT_THROW(NoiseModel(0.5), std::invalid_argument);
    EXPECT_THROW(NoiseModel(0.7), std::invalid_argument);
    EXPECT_THROW(NoiseModel(-0.01), std::invalid_argument);
    EXPECT_THROW(NoiseModel(std::nan("")), std::invalid_argument);
    EXPECT_NO_THROW(NoiseModel(0.0));
    EXPECT_NO_THROW(NoiseModel(0.499));
}

TEST(Instances, Validation) {
    EXPECT_THROW(BitInstance({}), std::invalid_argument);
    EXPECT_THROW(BitInstance({0, 2}), std::invalid_argument);
    EXPECT_THROW(RankInstance({1, 1}), std::invalid_argument);
    EXPECT_THROW(RankInstance({0, 1}), std::invalid_argument);
    EXPECT_THROW(SearchInstance(3, -1), std::invalid_argument);
    EXPECT_THROW(SearchInstance(3, 4), std::invalid_argument);
    EXPECT_NO_THROW(SearchInstance(3, 0));
    EXPECT_NO_THROW(SearchInstance(3, 3));
    EXPECT_EQ(RankInstance({2, 3, 1}).argmax(), 2);
    EXPECT_EQ(RankInstance({2, 3, 1}).ascending_order(), (std::vector<int>{3, 1, 2}));
}

TEST(Session, NoiselessChannelIsIdentity) {
    OracleSession s(BitInstance({0, 1}), NoiseModel(0.0), 7);
    for (int r = 0; r < 50; ++r) {
        EXPECT_EQ(s.query_bit(2), 1);
        EXPECT_EQ(s.query_bit(1), 0);
    }
    EXPECT_EQ(s.queries_used(), 100u);
}

TEST(Session, TypeAndRangeErrors) {
    OracleSession bits(BitInstance({0, 1}), NoiseModel(0.1), 1);
    EXPECT_THROW(bits.query_comparison(1, 2), std::logic_error);
    EXPECT_THROW(bits.query_target_comparison(1), std::logic_error);
    EXPECT_THROW(bits.query_bit(0), std::out_of_range);
    EXPECT_THROW(bits.query_bit(3), std::out_of_range);

    OracleSession ranks(RankInstance({1, 2}), NoiseModel(0.1), 1);
    EXPECT_THROW(ranks.query_comparison(1, 1), std::invalid_argument);
    EXPECT_THROW(ranks.query_comparison(0, 1), std::out_of_range);

    OracleSession search(SearchInstance(4, 2), NoiseModel(0.1), 1);
    EXPECT_THROW(search.query_target_comparison(0), std::out_of_range);
    EXPECT_THROW(search.query_target_comparison(5), std::out_of_range);
}

TEST(Session, DeterministicReplay) {
    std::vector<int> a, b;
    for (int run = 0; run < 2; ++run) {
        OracleSession s(BitInstance({1, 0, 1}), NoiseModel(0.3), 12345, 9);
        auto& out = run == 0 ? a : b;
        for (int i = 0; i < 200; ++i) out.push_back(s.query_bit(1 + i % 3));
    }
    EXPECT_EQ(a, b);
}

TEST(Session, DistinctStreamsDiffer) {
    OracleSession s1(BitInstance({1}), NoiseModel(0.3), 5, 0);
    OracleSession s2(BitInstance({1}), NoiseModel(0.3), 5, 1);
    std::vector<int> a, b;
    for (int i = 0; i < 64; ++i) {
        a.push_back(s1.query_bit(1));
        b.push_back(s2.query_bit(1));
    }
    EXPECT_NE(a, b);
}

// Empirical flip frequency within 3 binomial sigma of p, N = 1e5.
TEST(Session, MarginalFlipFrequency) {
    const int n = 100000;
    {
        const double p = 0.1;
        OracleSession s(BitInstance({1}), NoiseModel(p), 42);
        int ones = 0;
        for (int i = 0; i < n; ++i) ones += s.query_bit(1);
        const double slack = 3.0 * std::sqrt(p * (1 - p) / n);
        EXPECT_NEAR(static_cast<double>(ones) / n, 1 - p, slack);
    }
    {
        const double p = 0.2;  // rank(2) > rank(1), so query(2, 1) is 1 w.p. 1-p
        OracleSession s(RankInstance({1, 2}), NoiseModel(p), 43);
        int ones = 0;
        for (int i = 0; i < n; ++i) ones += s.query_comparison(2, 1);
        const double slack = 3.0 * std::sqrt(p * (1 - p) / n);
        EXPECT_NEAR(static_cast<double>(ones) / n, 1 - p, slack);
    }
    {
        const double p = 0.1;  // i <= target_slot, so observations are 1 w.p. 1-p
        OracleSession s(SearchInstance(4, 3), NoiseModel(p), 44);
        int ones = 0;
        for (int i = 0; i < n; ++i) ones += s.query_target_comparison(2);
        const double slack = 3.0 * std::sqrt(p * (1 - p) / n);
        EXPECT_NEAR(static_cast<double>(ones) / n, 1 - p, slack);
    }
}

TEST(Session, TargetComparisonEndpoints) {
    OracleSession top(SearchInstance(5, 5), NoiseModel(0.0), 1);
    OracleSession bottom(SearchInstance(5, 0), NoiseModel(0.0), 1);
    for (int i = 1; i <= 5; ++i) {
        EXPECT_EQ(top.query_target_comparison(i), 1);
        EXPECT_EQ(bottom.query_target_comparison(i), 0);
    }
}

TEST(Session, ComparisonAntisymmetryNoiseless) {
    OracleSession s(RankInstance({3, 1, 2}), NoiseModel(0.0), 1);
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            if (i == j) continue;
            EXPECT_EQ(s.query_comparison(i, j), 1 - s.query_comparison(j, i));
        }
    }
}

TEST(Session, QueryCounter) {
    OracleSession s(BitInstance({1, 0}), NoiseModel(0.25), 3);
    EXPECT_EQ(s.queries_used(), 0u);
    s.query_bit(1);
    s.query_bit(2);
    s.query_bit(1);
    EXPECT_EQ(s.queries_used(), 3u);
}

TEST(InstanceJson, RoundTrip) {
    const InstanceDoc docs[] = {
        {BitInstance({1, 0, 1}), 0.1, 7},
        {RankInstance({2, 3, 1}), 0.25, 8},
        {SearchInstance(5, 3), 0.3, 9},
    };
    for (const auto& doc : docs) {
        const auto j = to_json(doc);
        const auto back = instance_from_json(j);
        EXPECT_EQ(to_json(back), j);
        EXPECT_EQ(back.p, doc.p);
        EXPECT_EQ(back.seed, doc.seed);
    }
    EXPECT_EQ(to_json(docs[0])["kind"], "bits");
    EXPECT_EQ(to_json(docs[1])["kind"], "ranks");
    EXPECT_EQ(to_json(docs[2])["kind"], "search");
}

TEST(InstanceJson, RejectsUnknownKind) {
    nlohmann::json j{{"kind", "grid"}, {"data", {1, 2}}, {"p", 0.1}, {"seed", 0}};
    EXPECT_THROW(instance_from_json(j), std::invalid_argument);
}

}  // namespace
}  // namespace noisyq
