#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anonpram/algorithms.hpp"
#include "anonpram/stats.hpp"

namespace anonpram::harness {

enum class TrialOutcome : std::uint8_t {
    CorrectPermutation,
    DuplicateNames,
    CapExceeded,
    ModelViolation,
    /// Terminated with neither duplicates nor a permutation. No algorithm
    /// here can produce it (names are contiguous from 1); kept so outcome
    /// classification is total on arbitrary inputs.
    MalformedAssignment,
};

const char* to_string(TrialOutcome o);

/// CorrectPermutation iff names is a permutation of [1..n]; DuplicateNames
/// iff any value repeats; cap and violation labels pass through untouched.
TrialOutcome classify_outcome(const std::vector<std::int64_t>& names, std::uint32_t n);

struct TrialReport {
    std::uint32_t trial = 0;
    std::uint64_t seed = 0;
    TrialOutcome outcome = TrialOutcome::CorrectPermutation;
    ExecutionMetrics metrics;
    /// Order-sensitive 64-bit digest of the assignment vector.
    std::uint64_t digest = 0;
    /// First output (the name) per processor, kept for invariant checks.
    std::vector<std::int64_t> names;
};

struct AggregateStats {
    std::uint32_t n = 0;
    std::uint64_t trials = 0;
    double mean_rounds = 0;
    std::uint64_t max_rounds = 0;
    double mean_bits = 0;
    std::uint64_t max_bits = 0;
    std::uint64_t max_cells = 0;
    double mean_outer_iterations = 0;
    stats::WilsonInterval error_rate;  ///< duplicate-name rate
    std::uint64_t duplicate_trials = 0;
    std::uint64_t cap_exceeded_trials = 0;
    std::uint64_t violation_trials = 0;
    std::uint64_t malformed_trials = 0;
    /// Distribution of outer-loop iteration counts (retries).
    std::map<std::uint64_t, std::uint64_t> retry_histogram;
};

struct ExperimentConfig {
    std::string algorithm;
    std::vector<std::uint32_t> ns;
    std::uint32_t trials = 1;
    std::uint64_t master_seed = 0;
    std::optional<double> beta;
    std::optional<GrowthFunction> growth;
    /// Arbitrary-model algorithms only.
    std::optional<WriteSelector> selector;
    /// Round cap = multiplier x expected-rounds formula; 0 disables the cap.
    double cap_multiplier = 64.0;
    bool strict_mode = true;
    std::uint32_t jobs = 1;
};

struct ExperimentResult {
    const algo::AlgorithmInfo* info = nullptr;
    ExperimentConfig config;
    /// Reports per n, each sorted by trial index.
    std::vector<std::vector<TrialReport>> reports;
    std::vector<AggregateStats> aggregates;
};

/// Validates the config, runs trials x ns seeded trials (trial i uses seeds
/// derived from hash(master, i)), classifies outcomes and aggregates.
/// Deterministic for a given config, including under jobs > 1.
ExperimentResult run_trials(const ExperimentConfig& config);

/// CSV schema, one row per trial:
/// algorithm_id,n,trial,seed,outcome,rounds,bits_total,cells_touched,outer_iterations
void write_csv(std::ostream& os, const ExperimentResult& result);

/// Aggregate JSON: config echo plus AggregateStats per n.
void write_json(std::ostream& os, const ExperimentResult& result);

std::uint64_t digest_names(const std::vector<std::int64_t>& names);

/// Policy for an algorithm under a (validated) selector choice.
WritePolicy policy_for(const algo::AlgorithmInfo& info, std::optional<WriteSelector> selector);

}  // namespace anonpram::harness
