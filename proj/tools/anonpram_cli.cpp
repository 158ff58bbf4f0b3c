// Command-line front end: run one algorithm, sweep configurations, run the
// acceptance suite, or list the algorithm registry.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <anonpram/acceptance.hpp>
#include <anonpram/harness.hpp>

namespace {

using namespace anonpram;

std::optional<WriteSelector> parse_selector(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (s == "first") return WriteSelector::FirstByProcessorIndex;
    if (s == "last") return WriteSelector::LastByProcessorIndex;
    if (s == "random") return WriteSelector::SeededRandom;
    if (s == "adversarial") return WriteSelector::MaximizeDistinctSurvivors;
    throw ConfigError("unknown selector '" + s + "' (use first|last|random|adversarial)");
}

std::optional<GrowthFunction> parse_growth(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (s == "successor") return GrowthFunction::Successor;
    if (s == "doubling") return GrowthFunction::Doubling;
    throw ConfigError("unknown growth '" + s + "' (use successor|doubling)");
}

std::uint32_t default_jobs() {
    if (const char* env = std::getenv("ANONPRAM_JOBS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::uint32_t>(v);
    }
    return 1;
}

struct RunFlags {
    std::string algo;
    std::vector<std::uint32_t> ns;
    std::uint32_t trials = 1;
    std::uint64_t seed = 0;
    double beta = std::numeric_limits<double>::quiet_NaN();
    std::string growth;
    std::string selector;
    std::string out_path;
    std::string json_path;
    double cap_mult = 64.0;
    std::uint32_t jobs = default_jobs();
    bool relaxed = false;
};

int execute(const RunFlags& f) {
    harness::ExperimentConfig cfg;
    cfg.algorithm = f.algo;
    cfg.ns = f.ns;
    cfg.trials = f.trials;
    cfg.master_seed = f.seed;
    if (!std::isnan(f.beta)) cfg.beta = f.beta;
    cfg.growth = parse_growth(f.growth);
    cfg.selector = parse_selector(f.selector);
    cfg.cap_multiplier = f.cap_mult;
    cfg.strict_mode = !f.relaxed;
    cfg.jobs = f.jobs;

    harness::ExperimentResult result = harness::run_trials(cfg);

    if (f.out_path.empty()) {
        harness::write_csv(std::cout, result);
    } else {
        std::ofstream csv(f.out_path, std::ios::binary);
        if (!csv) {
            std::cerr << "error: cannot open " << f.out_path << " for writing\n";
            return 1;
        }
        harness::write_csv(csv, result);
    }
    std::string json_path = f.json_path;
    if (json_path.empty() && !f.out_path.empty()) {
        json_path = f.out_path;
        auto dot = json_path.find_last_of('.');
        if (dot != std::string::npos && dot != 0) json_path.resize(dot);
        json_path += ".json";
    }
    if (!json_path.empty()) {
        std::ofstream js(json_path, std::ios::binary);
        if (!js) {
            std::cerr << "error: cannot open " << json_path << " for writing\n";
            return 1;
        }
        harness::write_json(js, result);
    }
    return 0;
}

void add_common_flags(CLI::App* cmd, RunFlags& f, bool multi_n) {
    cmd->add_option("--algo", f.algo, "Algorithm id (see `anonpram list`)")->required();
    if (multi_n)
        cmd->add_option("--ns", f.ns, "Processor counts, comma separated")
            ->required()
            ->delimiter(',');
    else
        cmd->add_option("--n", f.ns, "Number of processors")->required()->expected(1);
    cmd->add_option("--trials", f.trials, "Trials per processor count")->required();
    cmd->add_option("--seed", f.seed,
                    "Master seed (required; every report is reproducible from it)")
        ->required();
    cmd->add_option("--beta", f.beta, "Override the algorithm's default beta");
    cmd->add_option("--growth", f.growth,
                    "Growth schedule for unbounded MC algorithms: successor|doubling");
    cmd->add_option("--selector", f.selector,
                    "Arbitrary-write selector: first|last|random|adversarial");
    cmd->add_option("--out", f.out_path, "CSV output path (default: standard output)");
    cmd->add_option("--json", f.json_path,
                    "Aggregate JSON path (default: derived from --out when given)");
    cmd->add_option("--cap-mult", f.cap_mult,
                    "Round cap as a multiple of the expected-rounds formula; 0 disables");
    cmd->add_option("--jobs", f.jobs, "Concurrent trials (or set ANONPRAM_JOBS)");
    cmd->add_flag("--relaxed", f.relaxed,
                  "Allow same-cell read+write in one round (strict mode off)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and experiment harness for randomized naming algorithms "
                 "on the anonymous synchronous PRAM"};
    app.require_subcommand(1);

    RunFlags run_flags, sweep_flags;
    std::uint32_t suite_jobs = default_jobs();

    CLI::App* run_cmd = app.add_subcommand("run", "Run one algorithm at a single n");
    add_common_flags(run_cmd, run_flags, false);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run one algorithm across several n");
    add_common_flags(sweep_cmd, sweep_flags, true);

    CLI::App* suite_cmd =
        app.add_subcommand("suite", "Run the acceptance suite (one pass/fail line per criterion)");
    suite_cmd->add_option("--jobs", suite_jobs, "Concurrent trials (or set ANONPRAM_JOBS)");

    CLI::App* list_cmd = app.add_subcommand("list", "List the algorithm registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (list_cmd->parsed()) {
            for (const auto& a : algo::registry()) {
                std::printf("%-11s  %-24s  %s\n", std::string(a.id).c_str(),
                            std::string(a.name).c_str(), std::string(a.summary).c_str());
            }
            return 0;
        }
        if (suite_cmd->parsed()) {
            acceptance::SuiteOptions opt;
            opt.jobs = suite_jobs;
            auto results = acceptance::run_suite(std::cout, opt);
            return acceptance::all_passed(results) ? 0 : 1;
        }
        if (run_cmd->parsed()) return execute(run_flags);
        if (sweep_cmd->parsed()) return execute(sweep_flags);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
