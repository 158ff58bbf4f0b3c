#include "anonpram/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "anonpram/harness.hpp"

namespace anonpram::acceptance {

namespace {

using harness::ExperimentConfig;
using harness::ExperimentResult;
using harness::TrialOutcome;

struct Suite {
    std::ostream& os;
    SuiteOptions opt;
    std::vector<CriterionResult> results;

    void report(int number, const std::string& title, bool passed, const std::string& detail) {
        char line[640];
        std::snprintf(line, sizeof line, "[%s] %2d. %s — %s", passed ? "PASS" : "FAIL", number,
                      title.c_str(), detail.c_str());
        os << line << '\n' << std::flush;
        results.push_back({number, title, passed, detail});
    }

    ExperimentResult sweep(const std::string& algo, std::vector<std::uint32_t> ns,
                           std::uint32_t trials, std::optional<double> beta = {},
                           std::optional<GrowthFunction> growth = {},
                           std::optional<WriteSelector> selector = {},
                           double cap_multiplier = 64.0) {
        ExperimentConfig cfg;
        cfg.algorithm = algo;
        cfg.ns = std::move(ns);
        cfg.trials = trials;
        cfg.master_seed = opt.master_seed;
        cfg.beta = beta;
        cfg.growth = growth;
        cfg.selector = selector;
        cfg.cap_multiplier = cap_multiplier;
        cfg.jobs = opt.jobs;
        return harness::run_trials(cfg);
    }
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---- 1. Las Vegas correctness under every write selector -----------------

void criterion_lv_correctness(Suite& s) {
    const std::vector<std::uint32_t> ns = {1, 2, 3, 4, 8, 16, 64, 256};
    const std::uint32_t trials = 200;
    const std::vector<WriteSelector> selectors = {
        WriteSelector::FirstByProcessorIndex, WriteSelector::LastByProcessorIndex,
        WriteSelector::SeededRandom, WriteSelector::MaximizeDistinctSurvivors};

    bool ok = true;
    std::string detail = "every terminating trial a permutation";
    std::uint64_t total_trials = 0;
    auto check = [&](const ExperimentResult& res, const std::string& label) {
        for (std::size_t i = 0; i < res.aggregates.size(); ++i) {
            const auto& agg = res.aggregates[i];
            total_trials += agg.trials;
            if (agg.duplicate_trials != 0 || agg.violation_trials != 0 ||
                agg.malformed_trials != 0 || agg.cap_exceeded_trials * 100 > agg.trials) {
                ok = false;
                detail = fmt("%s n=%u: dup=%llu cap=%llu viol=%llu of %llu", label.c_str(),
                             agg.n, (unsigned long long)agg.duplicate_trials,
                             (unsigned long long)agg.cap_exceeded_trials,
                             (unsigned long long)agg.violation_trials,
                             (unsigned long long)agg.trials);
            }
        }
    };

    for (const char* id : {"arb-bnd-lv", "arb-unb-lv"})
        for (WriteSelector sel : selectors)
            check(s.sweep(id, ns, trials, {}, {}, sel), fmt("%s/%s", id, to_string(sel)));
    for (const char* id : {"com-bnd-lv", "com-unb-lv"}) check(s.sweep(id, ns, trials), id);

    if (ok) detail = fmt("%llu trials, zero duplicates, caps within 1%%", (unsigned long long)total_trials);
    s.report(1, "LV correctness across n and write selectors", ok, detail);
}

// ---- 2/3. Verify-Collision: exhaustive and statistical --------------------

Program vc_probe_program() {
    Program p;
    p.memory_window = 2;
    p.body = [](ProcContext& ctx) -> ProcTask {
        bool detected = co_await algo::verify_collision(ctx, 0, 1);
        ctx.set_output(detected ? 1 : 0);
    };
    return p;
}

void criterion_vc_exhaustive(Suite& s) {
    bool ok = true;
    std::string detail = "detection counts exact for m=1..10";
    Program prog = vc_probe_program();
    for (std::uint32_t m = 1; m <= 10 && ok; ++m) {
        std::uint64_t detected = 0;
        for (std::uint32_t coins = 0; coins < (1u << m); ++coins) {
            BitSourceFactory scripted = [coins](std::uint32_t proc) -> BitSourcePtr {
                return std::make_unique<FixedBitSource>(
                    std::deque<std::uint64_t>{(coins >> proc) & 1u});
            };
            RunResult r = run_program(m, prog, WritePolicy::common(), SeedSpec{0, 0}, {}, scripted);
            detected += static_cast<std::uint64_t>(r.outputs[0][0]);
        }
        std::uint64_t expected = m == 1 ? 0 : (1ULL << m) - 2;
        if (detected != expected) {
            ok = false;
            detail = fmt("m=%u: detected %llu of %llu coin vectors, expected %llu", m,
                         (unsigned long long)detected, (unsigned long long)(1ULL << m),
                         (unsigned long long)expected);
        }
    }
    s.report(2, "Verify-Collision exhaustive coin enumeration", ok, detail);
}

void criterion_vc_statistics(Suite& s) {
    Program prog = vc_probe_program();
    std::uint64_t detected = 0;
    const std::uint64_t trials = 10000;
    for (std::uint64_t t = 0; t < trials; ++t) {
        RunResult r =
            run_program(2, prog, WritePolicy::common(), SeedSpec{s.opt.master_seed, t}, {});
        detected += static_cast<std::uint64_t>(r.outputs[0][0]);
    }
    double freq = static_cast<double>(detected) / static_cast<double>(trials);
    bool ok = freq >= 0.48 && freq <= 0.52;
    s.report(3, "Verify-Collision detection frequency, two participants", ok,
             fmt("observed %.4f over %llu trials (want 0.50 +/- 0.02)", freq,
                 (unsigned long long)trials));
}

// ---- 4. Arbitrary-Bounded-LV retry probability ----------------------------

void criterion_retry_bound(Suite& s) {
    ExperimentResult res = s.sweep("arb-bnd-lv", {64}, 2000, 4.0);
    std::uint64_t retried = 0;
    for (const auto& r : res.reports[0])
        if (r.metrics.outer_iterations > 1) ++retried;
    double frac = static_cast<double>(retried) / 2000.0;
    bool ok = frac <= 0.01;
    s.report(4, "Arbitrary-Bounded-LV one-attempt probability", ok,
             fmt("%llu of 2000 trials needed a retry (%.4f, bound 0.01)",
                 (unsigned long long)retried, frac));
}

// ---- 5. Monte Carlo guaranteed termination --------------------------------

void criterion_mc_termination(Suite& s) {
    std::vector<std::uint32_t> ns;
    for (std::uint32_t n = 1; n <= 1024; n *= 2) ns.push_back(n);
    ExperimentResult res = s.sweep("arb-bnd-mc", ns, 200, 6.0, {}, {}, /*cap=*/0.0);
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < ns.size() && ok; ++i) {
        double lg_n = std::max(1.0, std::log2(static_cast<double>(ns[i])));
        double bound = std::log2(6.0 * lg_n) + 2.0;
        for (const auto& r : res.reports[i]) {
            if (r.outcome == TrialOutcome::CapExceeded ||
                static_cast<double>(r.metrics.outer_iterations) > bound) {
                ok = false;
                detail = fmt("n=%u trial %u: %llu iterations, bound %.2f", ns[i], r.trial,
                             (unsigned long long)r.metrics.outer_iterations, bound);
                break;
            }
        }
    }
    if (ok) detail = "uncapped, all runs halt within lg(beta lg n)+2 range doublings";
    s.report(5, "Arbitrary-Bounded-MC sure termination", ok, detail);
}

// ---- 6. Monte Carlo error rates -------------------------------------------

void criterion_mc_error_rates(Suite& s) {
    bool ok = true;
    std::string detail;
    double worst = 0;
    for (const char* id : {"arb-bnd-mc", "arb-unb-mc", "com-bnd-mc", "com-unb-mc"}) {
        ExperimentResult res = s.sweep(id, {64}, 2000);
        const auto& agg = res.aggregates[0];
        worst = std::max(worst, agg.error_rate.upper);
        if (agg.error_rate.upper > 0.01) {
            ok = false;
            detail = fmt("%s: %llu duplicates in 2000, Wilson-99 upper %.4f > 0.01", id,
                         (unsigned long long)agg.duplicate_trials, agg.error_rate.upper);
        }
    }
    if (ok) detail = fmt("worst Wilson-99 upper bound %.4f (limit 0.01)", worst);
    s.report(6, "Monte Carlo duplicate-name rates at n=64", ok, detail);
}

// ---- 7/8. Size estimation bounds -------------------------------------------

void criterion_estimate_size(Suite& s) {
    const std::vector<std::uint32_t> ns = {20, 24, 32, 48, 64, 96, 128, 192, 256};
    const std::uint32_t trials = 500;
    Program prog = algo::make_estimate_size_probe();
    bool ok = true;
    std::string detail;
    for (std::uint32_t n : ns) {
        std::uint64_t at_least_n = 0;
        for (std::uint32_t t = 0; t < trials; ++t) {
            RunResult r = run_program(n, prog, WritePolicy::common(),
                                      SeedSpec{s.opt.master_seed + 7, t}, {});
            std::int64_t size = r.outputs[0][0];
            if (size >= 6 * static_cast<std::int64_t>(n)) {
                ok = false;
                detail = fmt("n=%u trial %u: size=%lld breaks the certain size<6n bound", n, t,
                             (long long)size);
            }
            if (size >= static_cast<std::int64_t>(n)) ++at_least_n;
        }
        if (n >= 32 && at_least_n * 100 < trials * 99) {
            ok = false;
            detail = fmt("n=%u: size>=n in only %llu of %u trials", n,
                         (unsigned long long)at_least_n, trials);
        }
        if (!ok) break;
    }
    if (ok) detail = "size<6n with certainty; size>=n in >=99% for n>=32";
    s.report(7, "Estimate-Size bounds", ok, detail);
}

void criterion_gauge_size(Suite& s) {
    const std::vector<std::uint32_t> ns = {1, 2, 4, 8, 16, 32, 64, 128, 256};
    const std::uint32_t trials = 500;
    Program prog = algo::make_gauge_size_probe(3.0, GrowthFunction::Successor);
    bool ok = true;
    std::uint64_t over_2n = 0, total = 0;
    double worst_ratio = 0;
    std::uint32_t worst_n = 0;
    bool underestimates = false;
    std::string under_detail;
    for (std::uint32_t n : ns) {
        std::uint64_t at_least_n = 0;
        for (std::uint32_t t = 0; t < trials; ++t) {
            RunResult r = run_program(n, prog, WritePolicy::common(),
                                      SeedSpec{s.opt.master_seed + 8, t}, {});
            std::int64_t size = r.outputs[0][0];
            ++total;
            if (size > 2 * static_cast<std::int64_t>(n)) {
                ok = false;
                ++over_2n;
                double ratio = static_cast<double>(size) / static_cast<double>(n);
                if (ratio > worst_ratio) {
                    worst_ratio = ratio;
                    worst_n = n;
                }
            }
            if (size >= static_cast<std::int64_t>(n)) ++at_least_n;
        }
        if (n >= 32 && at_least_n * 100 < trials * 99) {
            ok = false;
            underestimates = true;
            under_detail = fmt("; size>=n in only %llu of %u trials at n=%u",
                               (unsigned long long)at_least_n, trials, n);
        }
    }
    std::string detail;
    if (ok) {
        detail = "size<=2n with certainty; size>=n in >=99% for n>=32";
    } else {
        detail = fmt("size>2n in %llu of %llu trials (worst size=%.2fn at n=%u)",
                     (unsigned long long)over_2n, (unsigned long long)total, worst_ratio,
                     worst_n);
        detail += underestimates ? under_detail : std::string("; size>=n rates all hold");
    }
    s.report(8, "Gauge-Size-MC bounds (Successor, beta=3)", ok, detail);
}

// ---- 9/10. Round scaling ----------------------------------------------------

void criterion_log_scaling(Suite& s) {
    std::vector<std::uint32_t> ns;
    for (std::uint32_t n = 16; n <= 4096; n *= 2) ns.push_back(n);
    ExperimentResult res = s.sweep("com-unb-lv", ns, 100, 2.0);
    std::vector<std::pair<double, double>> pts;
    double mean_256 = 0, mean_4096 = 0;
    for (const auto& agg : res.aggregates) {
        pts.emplace_back(static_cast<double>(agg.n), agg.mean_rounds);
        if (agg.n == 256) mean_256 = agg.mean_rounds;
        if (agg.n == 4096) mean_4096 = agg.mean_rounds;
    }
    stats::ScalingFit fit = stats::fit_scaling(pts, stats::ScalingModel::Log);
    double ratio = mean_4096 / mean_256;
    bool ok = fit.r_squared >= 0.9 && ratio <= 2.0;
    s.report(9, "Common-Unbounded-LV logarithmic-time scaling", ok,
             fmt("rounds ~ %.1f + %.2f lg n, R^2=%.4f; rounds(4096)/rounds(256)=%.3f",
                 fit.intercept, fit.slope, fit.r_squared, ratio));
}

void criterion_linear_scaling(Suite& s) {
    std::vector<std::uint32_t> ns;
    for (std::uint32_t n = 16; n <= 1024; n *= 2) ns.push_back(n);
    ExperimentResult res = s.sweep("arb-bnd-lv", ns, 100);
    bool ok = true;
    std::string detail;
    double lo = 10, hi = 0;
    for (std::size_t i = 0; i + 1 < res.aggregates.size(); ++i) {
        if (res.aggregates[i].n < 64) continue;
        double ratio = res.aggregates[i + 1].mean_rounds / res.aggregates[i].mean_rounds;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        if (ratio < 1.6 || ratio > 2.4) {
            ok = false;
            detail = fmt("rounds(%u)/rounds(%u) = %.3f outside [1.6, 2.4]",
                         res.aggregates[i + 1].n, res.aggregates[i].n, ratio);
        }
    }
    if (ok) detail = fmt("doubling ratios within [%.3f, %.3f]", lo, hi);
    s.report(10, "Arbitrary-Bounded-LV linear-time scaling", ok, detail);
}

// ---- 11. Random-bit scaling -------------------------------------------------

void criterion_bit_scaling(Suite& s) {
    // Per-algorithm constants, pinned at roughly twice the bit densities the
    // implementation exhibits across this n range.
    const std::map<std::string, double> kBitConstant = {
        {"arb-bnd-lv", 8},  {"arb-unb-lv", 12}, {"com-bnd-lv", 28}, {"com-unb-lv", 12},
        {"arb-bnd-mc", 24}, {"arb-unb-mc", 96}, {"com-bnd-mc", 36}, {"com-unb-mc", 36},
    };
    std::vector<std::uint32_t> ns = {64, 128, 256, 512, 1024};
    bool ok = true;
    std::ostringstream bad;
    for (const auto& info : algo::registry()) {
        ExperimentResult res = s.sweep(std::string(info.id), ns, 20);
        double C = kBitConstant.at(std::string(info.id));
        for (std::size_t i = 0; i < res.aggregates.size(); ++i) {
            const auto& agg = res.aggregates[i];
            double budget = C * agg.n * std::log2(static_cast<double>(agg.n));
            if (agg.mean_bits > budget) {
                ok = false;
                bad << fmt(" %s@n=%u: %.0f bits > %.0f;", std::string(info.id).c_str(), agg.n,
                           agg.mean_bits, budget);
            }
            if (i > 0) {
                double ratio = agg.mean_bits / res.aggregates[i - 1].mean_bits;
                if (ratio > 2.6) {
                    ok = false;
                    bad << fmt(" %s bits(%u)/bits(%u)=%.3f > 2.6;", std::string(info.id).c_str(),
                               agg.n, res.aggregates[i - 1].n, ratio);
                }
            }
        }
    }
    s.report(11, "Random-bit totals scale as n lg n", ok,
             ok ? "all algorithms within C n lg n and doubling ratio 2.6" : bad.str());
}

// ---- 12. Memory accounting --------------------------------------------------

void criterion_memory_accounting(Suite& s) {
    bool ok = true;
    std::string detail;

    // Unbounded Las Vegas: cells per attempt follow n/ln n plus the tree.
    for (std::uint32_t n : {64u, 256u, 1024u}) {
        ExperimentResult res = s.sweep("arb-unb-lv", {n}, 50);
        auto m = static_cast<double>(
            n <= 1 ? 1 : static_cast<std::uint64_t>(
                             std::ceil(n / std::log(static_cast<double>(n)))));
        double per_attempt = 2.0 * (m + 2.0 * static_cast<double>(TreeLayout::pad_leaves(
                                                 static_cast<std::uint64_t>(m))));
        for (const auto& r : res.reports[0]) {
            double bound = per_attempt * static_cast<double>(std::max<std::uint64_t>(
                                             1, r.metrics.outer_iterations));
            if (static_cast<double>(r.metrics.cells_touched) > bound) {
                ok = false;
                detail = fmt("arb-unb-lv n=%u trial %u: %llu cells > %.0f", n, r.trial,
                             (unsigned long long)r.metrics.cells_touched, bound);
            }
        }
    }
    // Common unbounded MC with Successor growth: linear cell usage.
    for (std::uint32_t n : {64u, 256u, 1024u}) {
        ExperimentResult res = s.sweep("com-unb-mc", {n}, 50, {}, GrowthFunction::Successor);
        for (const auto& r : res.reports[0]) {
            if (r.metrics.cells_touched > 32ULL * n) {
                ok = false;
                detail = fmt("com-unb-mc n=%u trial %u: %llu cells > %llu", n, r.trial,
                             (unsigned long long)r.metrics.cells_touched,
                             (unsigned long long)(32ULL * n));
            }
        }
    }
    // Bounded-memory algorithms: constant windows, independent of n.
    const std::map<std::string, std::uint64_t> kWindow = {
        {"arb-bnd-lv", 2}, {"arb-bnd-mc", 3}, {"com-bnd-lv", 5}, {"com-bnd-mc", 6}};
    for (const auto& [id, window] : kWindow) {
        ExperimentResult res = s.sweep(id, {16, 64, 256}, 50);
        for (std::size_t i = 0; i < res.aggregates.size(); ++i) {
            if (res.aggregates[i].max_cells > window) {
                ok = false;
                detail = fmt("%s n=%u: touched %llu cells, window %llu", id.c_str(),
                             res.aggregates[i].n,
                             (unsigned long long)res.aggregates[i].max_cells,
                             (unsigned long long)window);
            }
        }
    }
    if (ok) detail = "n/ln n shape, linear shape, and constant windows all hold per trial";
    s.report(12, "Memory accounting", ok, detail);
}

// ---- 13. Determinism ---------------------------------------------------------

void criterion_determinism(Suite& s) {
    bool ok = true;
    std::string detail;
    auto render = [](const ExperimentResult& res) {
        std::ostringstream csv, json;
        harness::write_csv(csv, res);
        harness::write_json(json, res);
        return csv.str() + "\x1e" + json.str();
    };
    struct Case {
        const char* id;
        std::uint32_t n;
        std::optional<WriteSelector> selector;
    };
    for (const Case& c : {Case{"arb-bnd-lv", 16, WriteSelector::SeededRandom},
                          Case{"com-unb-mc", 32, std::nullopt},
                          Case{"com-bnd-lv", 24, std::nullopt}}) {
        std::string a = render(s.sweep(c.id, {c.n}, 25, {}, {}, c.selector));
        std::string b = render(s.sweep(c.id, {c.n}, 25, {}, {}, c.selector));
        ExperimentConfig single;
        single.algorithm = c.id;
        single.ns = {c.n};
        single.trials = 25;
        single.master_seed = s.opt.master_seed;
        single.selector = c.selector;
        single.jobs = 1;
        std::string sequential = render(harness::run_trials(single));
        if (a != b || a != sequential) {
            ok = false;
            detail = fmt("%s n=%u: repeated runs differ", c.id, c.n);
        }
    }
    if (ok) detail = "CSV and JSON byte-identical across repeats and job counts";
    s.report(13, "Determinism of report files", ok, detail);
}

// ---- 14. Collectives against sequential oracles -------------------------------

void criterion_collectives_oracle(Suite& s) {
    bool ok = true;
    std::string detail;
    std::uint64_t state = s.opt.master_seed ^ 0xc013c71f5ULL;
    for (std::uint32_t vec = 0; vec < 1000 && ok; ++vec) {
        std::uint64_t m = 1 + splitmix_mix(state += kSeedGamma) % 64;
        auto n = static_cast<std::uint32_t>(1 + splitmix_mix(state += kSeedGamma) % 64);
        Program p;
        p.body = [m](ProcContext& ctx) -> ProcTask {
            std::uint64_t bin = ctx.draw(m);
            TreeLayout tree =
                TreeLayout::over(m, ctx.allocate_shared(TreeLayout::region_size(m)));
            PrefixCount pc = co_await tree_prefix_count(ctx, tree, bin, 1);
            ctx.set_output({pc.total, pc.prefix_below + 1, static_cast<std::int64_t>(bin)});
        };
        RunResult r =
            run_program(n, p, WritePolicy::common(), SeedSpec{s.opt.master_seed + 14, vec}, {});
        std::set<std::int64_t> occupied;
        for (const auto& out : r.outputs) occupied.insert(out[2]);
        for (const auto& out : r.outputs) {
            auto rank = static_cast<std::int64_t>(
                std::distance(occupied.begin(), occupied.find(out[2])) + 1);
            if (out[0] != static_cast<std::int64_t>(occupied.size()) || out[1] != rank) {
                ok = false;
                detail = fmt("vector %u (m=%llu, n=%u): count/rank mismatch vs scan oracle", vec,
                             (unsigned long long)m, n);
                break;
            }
        }
    }
    if (ok) detail = "count_occupied and ranks match scan oracles on 1000 random vectors";
    s.report(14, "Collectives agree with sequential oracles", ok, detail);
}

}  // namespace

std::vector<CriterionResult> run_suite(std::ostream& os, const SuiteOptions& options) {
    Suite s{os, options, {}};
    criterion_lv_correctness(s);
    criterion_vc_exhaustive(s);
    criterion_vc_statistics(s);
    criterion_retry_bound(s);
    criterion_mc_termination(s);
    criterion_mc_error_rates(s);
    criterion_estimate_size(s);
    criterion_gauge_size(s);
    criterion_log_scaling(s);
    criterion_linear_scaling(s);
    criterion_bit_scaling(s);
    criterion_memory_accounting(s);
    criterion_determinism(s);
    criterion_collectives_oracle(s);
    return s.results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return !results.empty();
}

}  // namespace anonpram::acceptance
