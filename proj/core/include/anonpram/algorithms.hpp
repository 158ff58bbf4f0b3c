#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "anonpram/collectives.hpp"
#include "anonpram/engine.hpp"
#include "anonpram/types.hpp"

namespace anonpram::algo {

/// Tuning knobs shared by all eight naming algorithms.
struct AlgoConfig {
    /// Analysis parameter beta; empty selects the per-algorithm default.
    std::optional<double> beta;
    /// Growth schedule r(k); unbounded-memory Monte Carlo variants only.
    std::optional<GrowthFunction> growth;
    /// Processor count, known to Las Vegas algorithms only. Monte Carlo
    /// program bodies never see it.
    std::optional<std::uint32_t> n_known;
};

struct AlgorithmInfo {
    std::string_view id;
    std::string_view name;
    std::string_view summary;
    WritePolicy::Variant model;
    bool bounded_memory;
    bool las_vegas;
    double default_beta;
    bool uses_growth;
    GrowthFunction default_growth;
};

/// The eight algorithms, addressable by stable string ids:
/// arb-bnd-lv, arb-unb-lv, com-bnd-lv, com-unb-lv,
/// arb-bnd-mc, arb-unb-mc, com-bnd-mc, com-unb-mc.
const std::vector<AlgorithmInfo>& registry();
const AlgorithmInfo* find_algorithm(std::string_view id);

/// Builds the runnable lock-step program for `info`. Validates the
/// configuration (beta domain, n for Las Vegas, value-width guards) and
/// throws ConfigError on bad combinations. Every processor's first output
/// is its acquired name.
Program make_program(const AlgorithmInfo& info, const AlgoConfig& cfg);

/// Scale for Las Vegas round caps: a generous closed-form bound on the
/// expected rounds of one run. Tests cap at a multiple of this.
std::uint64_t expected_rounds(const AlgorithmInfo& info, std::uint32_t n, const AlgoConfig& cfg);

/// Effective beta after defaulting.
double effective_beta(const AlgorithmInfo& info, const AlgoConfig& cfg);
GrowthFunction effective_growth(const AlgorithmInfo& info, const AlgoConfig& cfg);

// --- subroutines exposed for direct testing ---

/// The coin-flip collision check over one Heads/Tails cell pair. Executed by
/// every processor that selected the verified bin, in lock-step; costs
/// kVerifyCollisionRounds rounds. One participant never detects a
/// collision; m >= 2 participants detect one with probability 1 - 2^(1-m).
SubTask<bool> verify_collision(ProcContext& ctx, CellAddr heads, CellAddr tails);

inline constexpr std::uint64_t kVerifyCollisionRounds = 5;

/// Size estimation stage of com-bnd-mc as a standalone program; outputs
/// {size, number_of_bins} per processor. Common policy, bounded window.
Program make_estimate_size_probe();

/// Size gauging stage of com-unb-mc as a standalone program; outputs
/// {size} per processor. Common policy, unbounded memory.
Program make_gauge_size_probe(double beta, GrowthFunction growth);

}  // namespace anonpram::algo
