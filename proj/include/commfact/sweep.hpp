#pragma once

// Seeded experiment sweeps over (m, seed) pairs. Each record factors
// random_trace_zero(m, seed) with the same seed driving the assignment
// search, so a record is a pure function of (m, seed, trials, optimize).

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "commfact/factorizer.hpp"

namespace commfact {

struct SweepRecord {
    std::size_t m = 0;
    std::uint64_t seed = 0;
    double ratio = 0;
    double ratio_sq_minus_log_m = 0;
    double wall_time_ms = 0;
    bool valid = false;
};

struct SweepOptions {
    std::vector<std::size_t> sizes;
    std::vector<std::uint64_t> seeds;
    std::size_t trials = kDefaultTrials;
    bool optimize_assignment = false;
    /// Worker threads; 0 means hardware concurrency.
    std::size_t jobs = 0;
};

/// Records sorted by (m, seed) whatever the completion order.
std::vector<SweepRecord> run_sweep(const SweepOptions& options);

/// Columns m,seed,ratio,ratioSqMinusLogM[,wallTimeMs]. Timing is opt-in since
/// it is the only non-deterministic column.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records,
                     bool include_timing = false);

struct SweepSummary {
    std::size_t records = 0;
    std::size_t invalid = 0;
    double max_ratio_sq_minus_log_m = 0;
    /// ratio^2 ~ slope * log m + intercept; only with two or more sizes.
    bool has_fit = false;
    double slope = 0;
    double intercept = 0;
};

SweepSummary summarize_sweep(const std::vector<SweepRecord>& records);

} // namespace commfact
