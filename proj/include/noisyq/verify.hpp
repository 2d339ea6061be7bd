#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "noisyq/adaptive.hpp"
#include "noisyq/bounds.hpp"
#include "noisyq/harness.hpp"
#include "noisyq/nonadaptive.hpp"
#include "noisyq/posterior.hpp"

namespace noisyq {

// Independent cross-check for loop_stats_for_barrier: absorption probability
// and expected absorption time of the +-1 walk obtained by solving the
// tridiagonal linear system over the interior states directly.
inline LoopStats markov_loop_stats(double p, int m) {
    const int n = 2 * m - 1;  // interior states -m+1 .. m-1
    const long double lp = p, lq = 1.0L - lp;
    // A x = b with diag 1, sub -lp, super -lq (Thomas algorithm)
    const auto solve = [&](std::vector<long double> b) {
        std::vector<long double> c(static_cast<std::size_t>(n), 0.0L);
        long double beta = 1.0L;
        c[0] = -lq / beta;
        b[0] /= beta;
        for (int i = 1; i < n; ++i) {
            beta = 1.0L + lp * c[static_cast<std::size_t>(i) - 1];
            c[static_cast<std::size_t>(i)] = -lq / beta;
            b[static_cast<std::size_t>(i)] =
                (b[static_cast<std::size_t>(i)] + lp * b[static_cast<std::size_t>(i) - 1]) / beta;
        }
        for (int i = n - 2; i >= 0; --i) {
            b[static_cast<std::size_t>(i)] -=
                c[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i) + 1];
        }
        return b;
    };
    // error: absorbing value 1 at -m, 0 at +m; the -m neighbour contributes p*1
    std::vector<long double> be(static_cast<std::size_t>(n), 0.0L);
    be[0] = lp;
    const auto err = solve(std::move(be));
    std::vector<long double> bt(static_cast<std::size_t>(n), 1.0L);
    const auto tim = solve(std::move(bt));
    return {static_cast<double>(err[static_cast<std::size_t>(m) - 1]),
            static_cast<double>(tim[static_cast<std::size_t>(m) - 1])};
}

struct CriterionResult {
    std::string id;
    std::string claim;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct VerifyOptions {
    std::string suite = "all";  // all | exact_oracles | guarantees | invariants
    double threshold_scale = 1.0;
    std::uint64_t base_seed = 1;
};

namespace detail {

inline CriterionResult make_result(std::string id, std::string claim, double measured,
                                   double threshold, double scale) {
    CriterionResult r{std::move(id), std::move(claim), measured, threshold, false};
    r.pass = measured <= threshold * scale;
    return r;
}

// --- guarantees ---------------------------------------------------------

inline CriterionResult criterion_or_tournament_error(const VerifyOptions& opt) {
    ExperimentConfig c;
    c.algorithm = Algorithm::OrTournamentFixed;
    c.family = Family::WorstCaseOr;
    c.k = 64;
    c.p = 0.1;
    c.delta = 0.1;
    c.trials = 20000;
    c.base_seed = opt.base_seed;
    const TrialStats s = run_trials(c);
    double worst = 0.0;
    for (const auto& inst : s.per_instance) worst = std::max(worst, inst.wilson95_upper);
    return make_result("1-or-tournament-error",
                       "fixed OR tournament K=64 p=0.1 delta=0.1: Wilson-95 upper error bound "
                       "<= 2*delta on all-zeros and every single-one instance",
                       worst, 0.2, opt.threshold_scale);
}

inline CriterionResult criterion_comparison_oracle(const VerifyOptions& opt) {
    double worst_ratio = 0.0;
    for (double p : {0.1, 0.3, 0.45}) {
        for (double delta : {0.1, 0.01}) {
            const std::uint64_t trials = 100000;
            const LoopStats exact = posterior_loop_stats(p, delta);
            const double bound = std::log2(1.0 / delta) / kl_flip(p) + 1.0 / (1.0 - 2.0 * p);
            std::uint64_t errors = 0, qsum = 0;
            const RankInstance inst = RankInstance::identity(2);
            for (std::uint64_t t = 0; t < trials; ++t) {
                OracleSession session(inst, NoiseModel(p), opt.base_seed + 17, t);
                const auto out = compare_variable(session, 2, 1, delta);
                errors += out.winner != 2;
                qsum += out.queries;
            }
            const double mean = static_cast<double>(qsum) / static_cast<double>(trials);
            // claim error <= delta: refuted only if the whole Wilson interval sits above delta
            worst_ratio = std::max(worst_ratio, wilson95_lower(errors, trials) / delta);
            worst_ratio = std::max(worst_ratio,
                                   std::abs(mean - exact.expected_queries) /
                                       (0.05 * exact.expected_queries));
            worst_ratio = std::max(worst_ratio, mean / bound);
        }
    }
    return make_result("3-comparison-oracle",
                       "variable-length comparison: error claim holds at Wilson-95, mean queries "
                       "within 5% of the exact loop stats and below "
                       "log2(1/delta)/kl_flip(p) + 1/(1-2p) (worst normalized ratio)",
                       worst_ratio, 1.0, opt.threshold_scale);
}

inline CriterionResult criterion_search_nonadaptive(const VerifyOptions& opt) {
    ExperimentConfig c;
    c.algorithm = Algorithm::SearchNonadaptive;
    c.family = Family::EachSearchSlot;
    c.k = 32;
    c.p = 0.1;
    c.delta = 0.05;
    c.trials = 20000;
    c.base_seed = opt.base_seed + 5;
    const TrialStats s = run_trials(c);
    double worst = 0.0;
    for (const auto& inst : s.per_instance) worst = std::max(worst, inst.wilson95_upper);
    return make_result("5-search-nonadaptive-error",
                       "non-adaptive SEARCH K=32 p=0.1 delta=0.05: worst-slot Wilson-95 error "
                       "<= 2*delta/(1-delta)",
                       worst, 2.0 * 0.05 / (1.0 - 0.05), opt.threshold_scale);
}

inline CriterionResult criterion_variable_or_scaling(const VerifyOptions& opt) {
    std::vector<double> ratios;
    for (int k : {4, 16, 64}) {
        for (double p : {0.1, 0.3}) {
            for (double delta : {0.1, 0.01}) {
                const std::uint64_t trials = 2000;
                const BitInstance inst(std::vector<int>(static_cast<std::size_t>(k), 0));
                std::uint64_t qsum = 0;
                for (std::uint64_t t = 0; t < trials; ++t) {
                    OracleSession session(inst, NoiseModel(p), opt.base_seed + 23, t);
                    qsum += or_tournament_variable(session, delta).queries;
                }
                const double mean = static_cast<double>(qsum) / static_cast<double>(trials);
                const double expr =
                    k / (1.0 - binary_entropy(p)) + k * std::log2(1.0 / delta) / kl_flip(p);
                ratios.push_back(mean / expr);
            }
        }
    }
    double lg = 0.0;
    for (double r : ratios) lg += std::log(r);
    const double fit_c = std::exp(lg / static_cast<double>(ratios.size()));
    double worst = 0.0;
    for (double r : ratios) worst = std::max({worst, r / fit_c, fit_c / r});
    char claim[160];
    std::snprintf(claim, sizeof claim,
                  "variable OR mean queries scale as K/(1-H)+K*log(1/delta)/kl across the grid; "
                  "fitted C=%.3f, worst deviation factor", fit_c);
    return make_result("6-variable-or-scaling", claim, worst, 2.0, opt.threshold_scale);
}

inline CriterionResult criterion_sort_adaptive(const VerifyOptions& opt) {
    ExperimentConfig c;
    c.algorithm = Algorithm::SortAdaptive;
    c.family = Family::RandomPermutation;
    c.k = 16;
    c.p = 0.1;
    c.delta = 0.1;
    c.trials = 10000;
    c.base_seed = opt.base_seed + 7;
    const TrialStats s = run_trials(c);
    return make_result("9a-sort-adaptive-error",
                       "insertion sort via noisy search, K=16 p=0.1 delta=0.1: Wilson-95 "
                       "permutation error <= delta",
                       s.wilson95_upper, 0.1, opt.threshold_scale);
}

inline CriterionResult criterion_sort_nonadaptive(const VerifyOptions& opt) {
    ExperimentConfig c;
    c.algorithm = Algorithm::SortNonadaptive;
    c.family = Family::RandomPermutation;
    c.k = 8;
    c.p = 0.1;
    c.delta = 0.1;
    c.trials = 10000;
    c.base_seed = opt.base_seed + 9;
    const TrialStats s = run_trials(c);
    return make_result("9b-sort-nonadaptive-error",
                       "round-robin Copeland sort, K=8 p=0.1 delta=0.1: Wilson-95 permutation "
                       "error <= delta",
                       s.wilson95_upper, 0.1, opt.threshold_scale);
}

// --- exact oracles ------------------------------------------------------

inline CriterionResult criterion_tournament_query_count(const VerifyOptions& opt) {
    std::int64_t mismatches = 0;
    for (int k = 1; k <= 128; ++k) {
        for (double p : {0.05, 0.1, 0.25, 0.4}) {
            for (double delta : {0.2, 0.1, 0.01}) {
                const BitInstance inst(std::vector<int>(static_cast<std::size_t>(k), 0));
                OracleSession session(inst, NoiseModel(p), opt.base_seed, static_cast<std::uint64_t>(k));
                const auto out = or_tournament_fixed(session, delta);
                if (out.queries != static_cast<std::uint64_t>(tournament_query_count(k, p, delta))) {
                    ++mismatches;
                }
            }
        }
    }
    return make_result("2-tournament-query-count",
                       "instrumented fixed OR tournament query counter equals the closed-form "
                       "total for K=1..128 over the (p, delta) grid (mismatch count)",
                       static_cast<double>(mismatches), 0.5, opt.threshold_scale);
}

inline CriterionResult criterion_loop_closed_form(const VerifyOptions& opt) {
    double worst = 0.0;
    for (double p : {0.05, 0.1, 0.3, 0.45}) {
        for (int m = 1; m <= 64; ++m) {
            const LoopStats cf = loop_stats_for_barrier(p, m);
            const LoopStats mk = markov_loop_stats(p, m);
            worst = std::max(worst, std::abs(cf.error - mk.error) / std::max(1.0, std::abs(mk.error)));
            worst = std::max(worst, std::abs(cf.expected_queries - mk.expected_queries) /
                                        std::max(1.0, std::abs(mk.expected_queries)));
        }
    }
    return make_result("4a-loop-closed-form",
                       "gambler's-ruin closed form equals Markov-chain enumeration for all "
                       "barriers m <= 64 (worst relative difference)",
                       worst, 1e-10, opt.threshold_scale);
}

inline CriterionResult criterion_majority_vs_mc(const VerifyOptions& opt) {
    double worst = 0.0;
    std::mt19937_64 rng(opt.base_seed + 99);
    const std::uint64_t samples = 1000000;
    for (std::int64_t n : {1, 3, 7, 15, 101}) {
        for (double p : {0.05, 0.1, 0.3}) {
            const double exact = majority_error_exact(n, p);
            std::binomial_distribution<std::int64_t> bin(n, p);
            std::uint64_t errors = 0;
            for (std::uint64_t s = 0; s < samples; ++s) {
                errors += 2 * bin(rng) >= n;
            }
            const double emp = static_cast<double>(errors) / static_cast<double>(samples);
            const double sigma = std::sqrt(std::max(exact * (1 - exact), 1e-12) /
                                           static_cast<double>(samples));
            worst = std::max(worst, std::abs(emp - exact) / (3.0 * sigma));
        }
    }
    return make_result("4b-majority-vs-mc",
                       "exact majority-vote error matches 1e6-sample Monte Carlo within 3 sigma "
                       "on the (n, p) grid (worst deviation / 3 sigma)",
                       worst, 1.0, opt.threshold_scale);
}

// --- invariants ---------------------------------------------------------

inline CriterionResult criterion_noiseless_exhaustive(const VerifyOptions& opt) {
    std::int64_t wrong = 0;
    const NoiseModel noiseless(0.0);
    const double delta = 0.1;
    // every bit instance, K <= 8
    for (int k = 1; k <= 8; ++k) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
            std::vector<int> bits(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) bits[static_cast<std::size_t>(i)] = (mask >> i) & 1;
            const BitInstance inst(bits);
            const int truth = inst.or_value();
            OracleSession s1(inst, noiseless, opt.base_seed, mask);
            OracleSession s2(inst, noiseless, opt.base_seed, mask);
            OracleSession s3(inst, noiseless, opt.base_seed, mask);
            wrong += or_tournament_fixed(s1, delta).output != truth;
            wrong += or_tournament_variable(s2, delta).output != truth;
            wrong += or_nonadaptive(s3, delta).output != truth;
        }
    }
    // every permutation, K <= 5
    for (int k = 1; k <= 5; ++k) {
        std::vector<int> ranks(static_cast<std::size_t>(k));
        std::iota(ranks.begin(), ranks.end(), 1);
        do {
            const RankInstance inst(ranks);
            OracleSession s1(inst, noiseless, opt.base_seed, 0);
            OracleSession s2(inst, noiseless, opt.base_seed, 0);
            OracleSession s3(inst, noiseless, opt.base_seed, 0);
            OracleSession s4(inst, noiseless, opt.base_seed, 0);
            wrong += max_tournament_fixed(s1, delta).output != inst.argmax();
            wrong += max_tournament_variable(s2, delta).output != inst.argmax();
            wrong += sort_adaptive(s3, delta).output != inst.ascending_order();
            wrong += sort_nonadaptive(s4, delta).output != inst.ascending_order();
        } while (std::next_permutation(ranks.begin(), ranks.end()));
    }
    // every slot, K <= 16
    for (int k = 1; k <= 16; ++k) {
        for (int slot = 0; slot <= k; ++slot) {
            const SearchInstance inst(k, slot);
            OracleSession s1(inst, noiseless, opt.base_seed, 0);
            OracleSession s2(inst, noiseless, opt.base_seed, 0);
            OracleSession s3(inst, noiseless, opt.base_seed, 0);
            wrong += search_adaptive(s1, delta).output != slot;
            wrong += search_adaptive(s2, delta, 8).output != slot;
            wrong += search_nonadaptive(s3, delta).output != slot;
        }
    }
    return make_result("7-noiseless-exhaustive",
                       "at p=0 every algorithm computes its function exactly on all bit "
                       "instances (K<=8), permutations (K<=5), slots (K<=16); wrong-output count",
                       static_cast<double>(wrong), 0.5, opt.threshold_scale);
}

inline CriterionResult criterion_posterior_roundtrip(const VerifyOptions& opt) {
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 10000; ++t) {
        const double a = 0.001 + 0.998 * detail::counter_uniform(opt.base_seed, 0xA, t);
        const double p = 0.001 + 0.498 * detail::counter_uniform(opt.base_seed, 0xB, t);
        worst = std::max(worst, std::abs(posterior_update(posterior_update(a, 1, p), 0, p) - a));
    }
    return make_result("8a-posterior-roundtrip",
                       "posterior update followed by its opposite restores the belief (worst "
                       "absolute drift over 1e4 random (a, p))",
                       worst, 1e-12, opt.threshold_scale);
}

inline CriterionResult criterion_kl_vs_capacity(const VerifyOptions& opt) {
    double worst = -1.0;  // worst (1-H) - kl, should stay <= 0
    for (int i = 1; i < 1000; ++i) {
        const double p = 0.5 * static_cast<double>(i) / 1000.0;
        worst = std::max(worst, (1.0 - binary_entropy(p)) - kl_flip(p));
    }
    return make_result("8b-kl-dominates-capacity",
                       "kl_flip(p) >= 1 - H(p) on a dense grid in (0, 1/2); worst violation",
                       worst, 1e-15, opt.threshold_scale);
}

inline CriterionResult criterion_capacity_bracket(const VerifyOptions& opt) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double p = static_cast<double>(i) / 999.0;
        const double g = (0.5 - p) * (0.5 - p) / (1.0 - binary_entropy(p));
        worst = std::max({worst, 0.25 - g, g - 0.5});
    }
    return make_result("8c-capacity-bracket",
                       "(1/2-p)^2/(1-H(p)) stays within [1/4, 1/2] on a 1000-point grid; "
                       "worst excursion outside the bracket",
                       worst, 1e-12, opt.threshold_scale);
}

inline CriterionResult criterion_nonadaptive_audit(const VerifyOptions& opt) {
    std::int64_t mismatched = 0;
    const int k = 6;
    const double p = 0.2, delta = 0.1;
    const auto schedule_of = [&](auto&& alg, const Instance& inst, std::uint64_t stream) {
        OracleSession s(inst, NoiseModel(p), opt.base_seed + stream, stream);
        s.enable_log();
        alg(s, delta);
        return s.log();
    };
    {
        const Instance a = BitInstance({0, 0, 0, 0, 0, 0});
        const Instance b = BitInstance({1, 0, 1, 1, 0, 1});
        const auto f = [](OracleSession& s, double d) { or_nonadaptive(s, d); };
        mismatched += schedule_of(f, a, 1) != schedule_of(f, b, 2);
    }
    {
        const Instance a = SearchInstance(k, 0);
        const Instance b = SearchInstance(k, 4);
        const auto f = [](OracleSession& s, double d) { search_nonadaptive(s, d); };
        mismatched += schedule_of(f, a, 3) != schedule_of(f, b, 4);
    }
    {
        const Instance a = RankInstance::identity(k);
        const Instance b = RankInstance({3, 1, 6, 2, 5, 4});
        const auto f = [](OracleSession& s, double d) { max_nonadaptive(s, d); };
        mismatched += schedule_of(f, a, 5) != schedule_of(f, b, 6);
        const auto g = [](OracleSession& s, double d) { sort_nonadaptive(s, d); };
        mismatched += schedule_of(g, a, 7) != schedule_of(g, b, 8);
    }
    return make_result("8d-nonadaptive-audit",
                       "non-adaptive query schedules are identical across instances and seeds "
                       "(mismatched algorithm count)",
                       static_cast<double>(mismatched), 0.5, opt.threshold_scale);
}

inline CriterionResult criterion_csv_determinism(const VerifyOptions& opt) {
    ExperimentConfig c;
    c.algorithm = Algorithm::OrTournamentVariable;
    c.family = Family::WorstCaseOr;
    c.k = 8;
    c.p = 0.2;
    c.delta = 0.1;
    c.trials = 500;
    c.base_seed = opt.base_seed;
    const std::string once = csv_header() + csv_row(c, run_trials(c));
    const std::string twice = csv_header() + csv_row(c, run_trials(c));
    return make_result("8e-csv-determinism",
                       "identical config yields byte-identical CSV across repeated runs",
                       once == twice ? 0.0 : 1.0, 0.5, opt.threshold_scale);
}

}  // namespace detail

inline std::vector<CriterionResult> verify(const VerifyOptions& opt) {
    const bool all = opt.suite == "all";
    if (!all && opt.suite != "exact_oracles" && opt.suite != "guarantees" &&
        opt.suite != "invariants") {
        throw std::invalid_argument("unknown suite: " + opt.suite);
    }
    std::vector<CriterionResult> out;
    if (all || opt.suite == "guarantees") {
        out.push_back(detail::criterion_or_tournament_error(opt));
        out.push_back(detail::criterion_comparison_oracle(opt));
        out.push_back(detail::criterion_search_nonadaptive(opt));
        out.push_back(detail::criterion_variable_or_scaling(opt));
        out.push_back(detail::criterion_sort_adaptive(opt));
        out.push_back(detail::criterion_sort_nonadaptive(opt));
    }
    if (all || opt.suite == "exact_oracles") {
        out.push_back(detail::criterion_tournament_query_count(opt));
        out.push_back(detail::criterion_loop_closed_form(opt));
        out.push_back(detail::criterion_majority_vs_mc(opt));
    }
    if (all || opt.suite == "invariants") {
        out.push_back(detail::criterion_noiseless_exhaustive(opt));
        out.push_back(detail::criterion_posterior_roundtrip(opt));
        out.push_back(detail::criterion_kl_vs_capacity(opt));
        out.push_back(detail::criterion_capacity_bracket(opt));
        out.push_back(detail::criterion_nonadaptive_audit(opt));
        out.push_back(detail::criterion_csv_determinism(opt));
    }
    std::sort(out.begin(), out.end(),
              [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
    return out;
}

inline nlohmann::json verify_report_json(const std::vector<CriterionResult>& results) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) {
        arr.push_back({{"criterion_id", r.id},
                       {"claim", r.claim},
                       {"measured", r.measured},
                       {"threshold", r.threshold},
                       {"pass", r.pass}});
    }
    return arr;
}

inline bool all_pass(const std::vector<CriterionResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CriterionResult& r) { return r.pass; });
}

}  // namespace noisyq
