#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "noisyq/adaptive.hpp"
#include "noisyq/bounds.hpp"
#include "noisyq/instance.hpp"
#include "noisyq/nonadaptive.hpp"
#include "noisyq/session.hpp"

namespace noisyq {

enum class Algorithm {
    OrTournamentFixed,
    OrTournamentVariable,
    OrNonadaptive,
    MaxTournamentFixed,
    MaxTournamentVariable,
    MaxNonadaptive,
    SearchAdaptiveFixed,
    SearchAdaptiveVariable,
    SearchNonadaptive,
    SortAdaptive,
    SortNonadaptive,
};

enum class Family { WorstCaseOr, UniformRandomBits, RandomPermutation, EachSearchSlot };

inline std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::OrTournamentFixed: return "or_tournament_fixed";
        case Algorithm::OrTournamentVariable: return "or_tournament_variable";
        case Algorithm::OrNonadaptive: return "or_nonadaptive";
        case Algorithm::MaxTournamentFixed: return "max_tournament_fixed";
        case Algorithm::MaxTournamentVariable: return "max_tournament_variable";
        case Algorithm::MaxNonadaptive: return "max_nonadaptive";
        case Algorithm::SearchAdaptiveFixed: return "search_adaptive_fixed";
        case Algorithm::SearchAdaptiveVariable: return "search_adaptive_variable";
        case Algorithm::SearchNonadaptive: return "search_nonadaptive";
        case Algorithm::SortAdaptive: return "sort_adaptive";
        case Algorithm::SortNonadaptive: return "sort_nonadaptive";
    }
    throw std::logic_error("bad Algorithm");
}

inline Algorithm algorithm_from_string(const std::string& s) {
    for (Algorithm a : {Algorithm::OrTournamentFixed, Algorithm::OrTournamentVariable,
                        Algorithm::OrNonadaptive, Algorithm::MaxTournamentFixed,
                        Algorithm::MaxTournamentVariable, Algorithm::MaxNonadaptive,
                        Algorithm::SearchAdaptiveFixed, Algorithm::SearchAdaptiveVariable,
                        Algorithm::SearchNonadaptive, Algorithm::SortAdaptive,
                        Algorithm::SortNonadaptive}) {
        if (to_string(a) == s) return a;
    }
    throw std::invalid_argument("unknown algorithm: " + s);
}

inline std::string to_string(Family f) {
    switch (f) {
        case Family::WorstCaseOr: return "worst_case_or";
        case Family::UniformRandomBits: return "uniform_random_bits";
        case Family::RandomPermutation: return "random_permutation";
        case Family::EachSearchSlot: return "each_search_slot";
    }
    throw std::logic_error("bad Family");
}

inline Family family_from_string(const std::string& s) {
    for (Family f : {Family::WorstCaseOr, Family::UniformRandomBits, Family::RandomPermutation,
                     Family::EachSearchSlot}) {
        if (to_string(f) == s) return f;
    }
    throw std::invalid_argument("unknown family: " + s);
}

// Problem/setting row matching an algorithm, for joining bound columns.
inline std::pair<Problem, Setting> algorithm_bound_row(Algorithm a) {
    switch (a) {
        case Algorithm::OrTournamentFixed: return {Problem::Or, Setting::FixedAdaptive};
        case Algorithm::OrTournamentVariable: return {Problem::Or, Setting::VariableAdaptive};
        case Algorithm::OrNonadaptive: return {Problem::Or, Setting::FixedNonadaptive};
        case Algorithm::MaxTournamentFixed: return {Problem::Max, Setting::FixedAdaptive};
        case Algorithm::MaxTournamentVariable: return {Problem::Max, Setting::VariableAdaptive};
        case Algorithm::MaxNonadaptive: return {Problem::Max, Setting::FixedNonadaptive};
        case Algorithm::SearchAdaptiveFixed: return {Problem::Search, Setting::FixedAdaptive};
        case Algorithm::SearchAdaptiveVariable: return {Problem::Search, Setting::VariableAdaptive};
        case Algorithm::SearchNonadaptive: return {Problem::Search, Setting::FixedNonadaptive};
        case Algorithm::SortAdaptive: return {Problem::Sort, Setting::VariableAdaptive};
        case Algorithm::SortNonadaptive: return {Problem::Sort, Setting::FixedNonadaptive};
    }
    throw std::logic_error("bad Algorithm");
}

struct ExperimentConfig {
    Algorithm algorithm;
    Family family;
    int k = 1;
    double p = 0.0;
    double delta = 0.1;
    std::uint64_t trials = 10000;  // per instance
    std::uint64_t base_seed = 0;
    std::optional<int> fixed_steps;  // search_adaptive_fixed only
};

struct InstanceStats {
    std::string instance;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double error_rate = 0.0;
    double wilson95_upper = 0.0;
};

struct TrialStats {
    std::uint64_t trials = 0;  // per instance
    std::uint64_t errors = 0;  // of the worst instance (the headline)
    double error_rate = 0.0;
    double wilson95_upper = 0.0;
    double queries_mean = 0.0;
    double queries_min = 0.0;
    double queries_max = 0.0;
    double queries_stddev = 0.0;
    std::string worst_instance;
    std::vector<InstanceStats> per_instance;
};

// Wilson score interval upper end at 95% confidence.
inline double wilson95_upper(std::uint64_t errors, std::uint64_t n) {
    if (n == 0) return 1.0;
    const double z = 1.959963984540054;
    const double ph = static_cast<double>(errors) / static_cast<double>(n);
    const double nn = static_cast<double>(n);
    const double z2 = z * z;
    return (ph + z2 / (2 * nn) + z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn))) /
           (1 + z2 / nn);
}

inline double wilson95_lower(std::uint64_t errors, std::uint64_t n) {
    if (n == 0) return 0.0;
    const double z = 1.959963984540054;
    const double ph = static_cast<double>(errors) / static_cast<double>(n);
    const double nn = static_cast<double>(n);
    const double z2 = z * z;
    const double v = (ph + z2 / (2 * nn) - z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn))) /
                     (1 + z2 / nn);
    return v < 0.0 ? 0.0 : v;
}

namespace detail {

// Domain tags keep instance-generation randomness disjoint from oracle noise.
inline constexpr std::uint64_t kBitsTag = 0x626974735f746167ULL;
inline constexpr std::uint64_t kPermTag = 0x7065726d5f746167ULL;

inline Instance make_instance(const ExperimentConfig& c, std::size_t instance_idx,
                              std::uint64_t trial) {
    switch (c.family) {
        case Family::WorstCaseOr: {
            std::vector<int> bits(static_cast<std::size_t>(c.k), 0);
            if (instance_idx > 0) bits[instance_idx - 1] = 1;  // 0 = all-zeros, j = e_j
            return BitInstance(std::move(bits));
        }
        case Family::UniformRandomBits: {
            std::vector<int> bits(static_cast<std::size_t>(c.k));
            for (std::size_t i = 0; i < bits.size(); ++i) {
                bits[i] = counter_uniform(c.base_seed ^ kBitsTag, trial, i) < 0.5 ? 0 : 1;
            }
            return BitInstance(std::move(bits));
        }
        case Family::RandomPermutation: {
            std::vector<int> ranks(static_cast<std::size_t>(c.k));
            std::iota(ranks.begin(), ranks.end(), 1);
            for (std::size_t i = ranks.size(); i > 1; --i) {
                const auto j = static_cast<std::size_t>(
                    counter_uniform(c.base_seed ^ kPermTag, trial, i) * static_cast<double>(i));
                std::swap(ranks[i - 1], ranks[j < i ? j : i - 1]);
            }
            return RankInstance(std::move(ranks));
        }
        case Family::EachSearchSlot:
            return SearchInstance(c.k, static_cast<int>(instance_idx));
    }
    throw std::logic_error("bad Family");
}

inline std::size_t family_instance_count(const ExperimentConfig& c) {
    switch (c.family) {
        case Family::WorstCaseOr:
        case Family::EachSearchSlot:
            return static_cast<std::size_t>(c.k) + 1;
        case Family::UniformRandomBits:
        case Family::RandomPermutation:
            return 1;
    }
    throw std::logic_error("bad Family");
}

inline std::string instance_label(const ExperimentConfig& c, std::size_t instance_idx) {
    switch (c.family) {
        case Family::WorstCaseOr:
            return instance_idx == 0 ? "all_zeros" : "single_one_" + std::to_string(instance_idx);
        case Family::EachSearchSlot:
            return "slot_" + std::to_string(instance_idx);
        case Family::UniformRandomBits:
            return "uniform_random_bits";
        case Family::RandomPermutation:
            return "random_permutation";
    }
    throw std::logic_error("bad Family");
}

inline void check_family(const ExperimentConfig& c) {
    const Problem pr = algorithm_bound_row(c.algorithm).first;
    const bool ok =
        (pr == Problem::Or &&
         (c.family == Family::WorstCaseOr || c.family == Family::UniformRandomBits)) ||
        ((pr == Problem::Max || pr == Problem::Sort) && c.family == Family::RandomPermutation) ||
        (pr == Problem::Search && c.family == Family::EachSearchSlot);
    if (!ok) {
        throw std::invalid_argument("family " + to_string(c.family) +
                                    " does not match algorithm " + to_string(c.algorithm));
    }
}

struct RunOutcome {
    bool error;
    std::uint64_t queries;
};

inline RunOutcome run_single(const ExperimentConfig& c, std::size_t instance_idx,
                             std::uint64_t trial, std::uint64_t stream) {
    Instance inst = make_instance(c, instance_idx, trial);
    OracleSession session(inst, NoiseModel(c.p), c.base_seed, stream);
    switch (c.algorithm) {
        case Algorithm::OrTournamentFixed: {
            const auto r = or_tournament_fixed(session, c.delta);
            return {r.output != std::get<BitInstance>(inst).or_value(), r.queries};
        }
        case Algorithm::OrTournamentVariable: {
            const auto r = or_tournament_variable(session, c.delta);
            return {r.output != std::get<BitInstance>(inst).or_value(), r.queries};
        }
        case Algorithm::OrNonadaptive: {
            const auto r = or_nonadaptive(session, c.delta);
            return {r.output != std::get<BitInstance>(inst).or_value(), r.queries};
        }
        case Algorithm::MaxTournamentFixed: {
            const auto r = max_tournament_fixed(session, c.delta);
            return {r.output != std::get<RankInstance>(inst).argmax(), r.queries};
        }
        case Algorithm::MaxTournamentVariable: {
            const auto r = max_tournament_variable(session, c.delta);
            return {r.output != std::get<RankInstance>(inst).argmax(), r.queries};
        }
        case Algorithm::MaxNonadaptive: {
            const auto r = max_nonadaptive(session, c.delta);
            return {r.output != std::get<RankInstance>(inst).argmax(), r.queries};
        }
        case Algorithm::SearchAdaptiveFixed: {
            if (!c.fixed_steps) throw std::invalid_argument("search_adaptive_fixed needs fixed_steps");
            const auto r = search_adaptive(session, c.delta, c.fixed_steps);
            return {r.output != std::get<SearchInstance>(inst).target_slot(), r.queries};
        }
        case Algorithm::SearchAdaptiveVariable: {
            const auto r = search_adaptive(session, c.delta);
            return {r.output != std::get<SearchInstance>(inst).target_slot(), r.queries};
        }
        case Algorithm::SearchNonadaptive: {
            const auto r = search_nonadaptive(session, c.delta);
            return {r.output != std::get<SearchInstance>(inst).target_slot(), r.queries};
        }
        case Algorithm::SortAdaptive: {
            const auto r = sort_adaptive(session, c.delta);
            return {r.output != std::get<RankInstance>(inst).ascending_order(), r.queries};
        }
        case Algorithm::SortNonadaptive: {
            const auto r = sort_nonadaptive(session, c.delta);
            return {r.output != std::get<RankInstance>(inst).ascending_order(), r.queries};
        }
    }
    throw std::logic_error("bad Algorithm");
}

}  // namespace detail

// Runs trials for every instance of the family. Trial t of instance m uses the
// derived stream m * trials + t, so results are independent of execution order
// and of the number of worker threads.
inline TrialStats run_trials(const ExperimentConfig& config) {
    if (config.trials < 1) throw std::invalid_argument("trials >= 1 required");
    if (config.k < 1) throw std::invalid_argument("K >= 1 required");
    check_delta(config.delta);
    detail::check_family(config);
    NoiseModel noise_check(config.p);  // validates p

    const std::size_t instances = detail::family_instance_count(config);
    const std::uint64_t total = instances * config.trials;
    std::vector<std::uint8_t> err(total);
    std::vector<std::uint64_t> queries(total);

    const auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t r = lo; r < hi; ++r) {
            const std::size_t inst = static_cast<std::size_t>(r / config.trials);
            const std::uint64_t trial = r % config.trials;
            const auto out = detail::run_single(config, inst, trial, r);
            err[r] = out.error ? 1 : 0;
            queries[r] = out.queries;
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t nthreads = std::min<std::uint64_t>(hw, total);
    if (nthreads <= 1) {
        worker(0, total);
    } else {
        std::vector<std::thread> pool;
        for (std::uint64_t t = 0; t < nthreads; ++t) {
            const std::uint64_t lo = total * t / nthreads;
            const std::uint64_t hi = total * (t + 1) / nthreads;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    TrialStats stats;
    stats.trials = config.trials;
    unsigned __int128 qsum = 0, qsq = 0;
    std::uint64_t qmin = queries[0], qmax = queries[0];
    for (std::uint64_t r = 0; r < total; ++r) {
        qsum += queries[r];
        qsq += static_cast<unsigned __int128>(queries[r]) * queries[r];
        qmin = std::min(qmin, queries[r]);
        qmax = std::max(qmax, queries[r]);
    }
    const double n = static_cast<double>(total);
    stats.queries_mean = static_cast<double>(qsum) / n;
    stats.queries_min = static_cast<double>(qmin);
    stats.queries_max = static_cast<double>(qmax);
    const double var = static_cast<double>(qsq) / n - stats.queries_mean * stats.queries_mean;
    stats.queries_stddev = var > 0.0 ? std::sqrt(var) : 0.0;

    for (std::size_t m = 0; m < instances; ++m) {
        InstanceStats is;
        is.instance = detail::instance_label(config, m);
        is.trials = config.trials;
        for (std::uint64_t t = 0; t < config.trials; ++t) {
            is.errors += err[m * config.trials + t];
        }
        is.error_rate = static_cast<double>(is.errors) / static_cast<double>(is.trials);
        is.wilson95_upper = wilson95_upper(is.errors, is.trials);
        stats.per_instance.push_back(std::move(is));
    }
    const auto worst = std::max_element(
        stats.per_instance.begin(), stats.per_instance.end(),
        [](const InstanceStats& a, const InstanceStats& b) { return a.errors < b.errors; });
    stats.errors = worst->errors;
    stats.error_rate = worst->error_rate;
    stats.wilson95_upper = worst->wilson95_upper;
    stats.worst_instance = worst->instance;
    return stats;
}

inline std::string csv_header() {
    return "algorithm,family,K,p,delta,trials,errors,error_rate,wilson95,"
           "qmean,qmin,qmax,qstd,lower_bound,upper_bound\n";
}

namespace detail {

inline std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace detail

inline std::string csv_row(const ExperimentConfig& c, const TrialStats& s) {
    double lower = std::nan(""), upper = std::nan("");
    if (c.p > 0.0) {
        const auto [pr, st] = algorithm_bound_row(c.algorithm);
        const BoundValue bv = bound_table(BoundSpec(pr, st, c.k, c.p, c.delta));
        lower = bv.lower;
        upper = bv.upper;
    }
    using detail::fmt9;
    std::string row;
    row += to_string(c.algorithm) + "," + to_string(c.family) + "," + std::to_string(c.k) + "," +
           fmt9(c.p) + "," + fmt9(c.delta) + "," + std::to_string(s.trials) + "," +
           std::to_string(s.errors) + "," + fmt9(s.error_rate) + "," + fmt9(s.wilson95_upper) +
           "," + fmt9(s.queries_mean) + "," + fmt9(s.queries_min) + "," + fmt9(s.queries_max) +
           "," + fmt9(s.queries_stddev) + "," + fmt9(lower) + "," + fmt9(upper) + "\n";
    return row;
}

// One row per config, joined with the matching bound-table values.
inline std::string sweep(const std::vector<ExperimentConfig>& grid) {
    if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
    std::string out = csv_header();
    for (const auto& c : grid) {
        out += csv_row(c, run_trials(c));
    }
    return out;
}

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    c.family = family_from_string(j.at("family").get<std::string>());
    c.k = j.at("k").get<int>();
    c.p = j.at("p").get<double>();
    c.delta = j.at("delta").get<double>();
    c.trials = j.value("trials", std::uint64_t{10000});
    c.base_seed = j.value("seed", std::uint64_t{0});
    if (j.contains("steps")) c.fixed_steps = j.at("steps").get<int>();
    return c;
}

}  // namespace noisyq
