#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tenreco/coupling.hpp"
#include "tenreco/recoverability.hpp"

namespace tenreco {

/// A grid of rank searches over generated couplings: `trials_per_cell`
/// couplings per (M, I, T) cell, strategies "random" | "balanced" |
/// "full". The full strategy ignores the T axis (the coupling is fixed by
/// M), so its grid collapses to (M, I).
struct ScanConfig {
    std::string experiment;
    std::vector<int> m_values;
    std::vector<int> i_values;
    std::vector<int> t_values; // may stay empty for the full strategy
    std::string strategy = "random";
    int trials_per_cell = 1;
    std::uint64_t base_seed = 0;
    double rel_tol = 1e-10;
    int retries = 3;
    std::string journal_path; // empty: in-memory only
    int threads = 1;

    int t_axis() const {
        return strategy == "full" ? 1 : static_cast<int>(t_values.size());
    }
    int total_trials() const {
        return static_cast<int>(m_values.size() * i_values.size()) * t_axis() *
               trials_per_cell;
    }
    void validate() const;
};

struct TrialRow {
    int trial = 0;
    std::uint64_t seed = 0;
    int M = 0, I = 0, T = 0;
    std::string strategy;
    std::string coupling_hash;
    int d_spread = 0;
    std::string defect_class;
    long long r_max = 0;
    long long necessary = 0;
    bool achieved = false;
    bool failed = false; // trial could not produce a coupling
    std::string error;
};

/// Runs every trial not already present as a completed row in the journal.
/// Per-trial seeds are stable_hash(base_seed, trial), so the result set is
/// independent of thread count and ordering; rows come back sorted by
/// trial index.
std::vector<TrialRow> run_scan(const ScanConfig& config);

std::string scan_csv(const ScanConfig& config, const std::vector<TrialRow>& rows);
void write_scan_csv(const std::string& path, const ScanConfig& config,
                    const std::vector<TrialRow>& rows);

nlohmann::json to_json(const TrialRow& row);
TrialRow trial_row_from_json(const nlohmann::json& j);

} // namespace tenreco
