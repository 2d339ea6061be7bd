// Command-line front end: bound-table evaluation, Monte Carlo simulation,
// config-driven sweeps, and the verification suite.
//
// Exit codes: 0 success, 1 verification failure, 2 usage / parameter error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "noisyq/bounds.hpp"
#include "noisyq/harness.hpp"
#include "noisyq/verify.hpp"

namespace {

noisyq::Problem problem_from_string(const std::string& s) {
    if (s == "or") return noisyq::Problem::Or;
    if (s == "max") return noisyq::Problem::Max;
    if (s == "search") return noisyq::Problem::Search;
    if (s == "sort") return noisyq::Problem::Sort;
    throw std::invalid_argument("unknown problem: " + s);
}

noisyq::Setting setting_from_string(const std::string& s) {
    if (s == "fixed_adaptive") return noisyq::Setting::FixedAdaptive;
    if (s == "fixed_nonadaptive") return noisyq::Setting::FixedNonadaptive;
    if (s == "variable_adaptive") return noisyq::Setting::VariableAdaptive;
    throw std::invalid_argument("unknown setting: " + s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"noisyq: noisy OR/MAX/SEARCH/SORT simulator and bound calculator"};
    app.require_subcommand(1);

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "print a bound-table row as CSV");
    std::string problem, setting;
    int k = 0;
    double p = 0.0, delta = 0.0;
    bounds_cmd->add_option("--problem", problem, "or | max | search | sort")->required();
    bounds_cmd->add_option("--setting", setting,
                           "fixed_adaptive | fixed_nonadaptive | variable_adaptive")->required();
    bounds_cmd->add_option("--k", k, "number of elements K")->required();
    bounds_cmd->add_option("--p", p, "BSC crossover probability")->required();
    bounds_cmd->add_option("--delta", delta, "target error probability")->required();

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "run Monte Carlo trials for one config");
    std::string alg, family;
    std::uint64_t trials = 10000, seed = 0;
    int steps = 0;
    sim_cmd->add_option("--alg", alg, "algorithm id (e.g. or_tournament_fixed)")->required();
    sim_cmd->add_option("--family", family,
                        "worst_case_or | uniform_random_bits | random_permutation | each_search_slot")
        ->required();
    sim_cmd->add_option("--k", k, "number of elements K")->required();
    sim_cmd->add_option("--p", p, "BSC crossover probability")->required();
    sim_cmd->add_option("--delta", delta, "target error probability")->required();
    sim_cmd->add_option("--trials", trials, "trials per instance (default 10000)");
    sim_cmd->add_option("--seed", seed, "base seed (default 0)");
    sim_cmd->add_option("--steps", steps, "query budget for search_adaptive_fixed");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a JSON grid of configs");
    std::string config_path;
    sweep_cmd->add_option("--config", config_path, "JSON array of experiment configs")->required();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the verification suite");
    std::string suite = "all";
    verify_cmd->add_option("--suite", suite, "all | exact_oracles | guarantees | invariants");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*bounds_cmd) {
            const noisyq::BoundSpec spec(problem_from_string(problem), setting_from_string(setting),
                                         k, p, delta);
            const noisyq::BoundValue bv = noisyq::bound_table(spec);
            std::printf("problem,setting,K,p,delta,lower,upper\n");
            std::printf("%s,%s,%d,%.9g,%.9g,%.9g,%.9g\n", problem.c_str(), setting.c_str(), k, p,
                        delta, bv.lower, bv.upper);
        } else if (*sim_cmd) {
            noisyq::ExperimentConfig c;
            c.algorithm = noisyq::algorithm_from_string(alg);
            c.family = noisyq::family_from_string(family);
            c.k = k;
            c.p = p;
            c.delta = delta;
            c.trials = trials;
            c.base_seed = seed;
            if (steps > 0) c.fixed_steps = steps;
            const noisyq::TrialStats s = noisyq::run_trials(c);
            std::cout << noisyq::csv_header() << noisyq::csv_row(c, s);
        } else if (*sweep_cmd) {
            std::ifstream in(config_path);
            if (!in) throw std::invalid_argument("cannot open config file: " + config_path);
            nlohmann::json j;
            in >> j;
            std::vector<noisyq::ExperimentConfig> grid;
            for (const auto& item : j) grid.push_back(noisyq::experiment_config_from_json(item));
            std::cout << noisyq::sweep(grid);
        } else if (*verify_cmd) {
            noisyq::VerifyOptions opt;
            opt.suite = suite;
            const auto results = noisyq::verify(opt);
            std::cout << noisyq::verify_report_json(results).dump(2) << "\n";
            for (const auto& r : results) {
                std::fprintf(stderr, "[%s] %s  measured=%.6g threshold=%.6g\n",
                             r.pass ? "PASS" : "FAIL", r.id.c_str(), r.measured, r.threshold);
            }
            return noisyq::all_pass(results) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
