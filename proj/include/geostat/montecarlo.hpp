#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json_fwd.hpp>

#include "geostat/model.hpp"
#include "geostat/polynomial.hpp"

namespace geostat {

enum class Algorithm { lens_chains, bfs, both };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct EnsembleConfig {
    Scenario scenario;
    std::uint64_t trials = 1'000'000;
    std::uint64_t root_seed = 0;
    Algorithm algorithm = Algorithm::lens_chains;
    /// worker count hint; 0 = hardware concurrency. The summary does not
    /// depend on it: all accumulation is exact integer arithmetic keyed by
    /// trial index.
    unsigned parallelism = 0;
};

/// Ensemble estimates with exact provenance: every statistic is computed
/// from exact integer power sums, so two runs of the same config are
/// byte-identical regardless of thread count.
struct EnsembleSummary {
    Scenario scenario;
    std::uint64_t trials = 0;
    std::uint64_t root_seed = 0;
    Algorithm algorithm = Algorithm::lens_chains;
    int k = 0;
    double big_lambda = 0.0;

    double mean = 0.0;
    double variance = 0.0;       ///< unbiased (n-1 divisor)
    double central_moment_3 = 0.0;
    double se_mean = 0.0;
    double se_variance = 0.0;    ///< batch means, 100 batches
    double se_central_moment_3 = 0.0;
    double zero_fraction = 0.0;

    /// relative frequencies, ascending sigma. Counts with sigma beyond
    /// 2^64-1 (possible only through the big-integer promotion path) are
    /// pooled under the key 2^64-1.
    std::vector<std::pair<std::uint64_t, double>> pmf;

    nlohmann::json to_json() const;

    EnsembleSummary(const Scenario& s) : scenario(s) {}
};

/// Runs `trials` independent realisations and summarizes sigma of the
/// configured scenario. Degenerate scenarios yield the sigma == 0 summary;
/// k = 1 yields sigma == 1. With Algorithm::both each trial counts with
/// both algorithms on the same road sample and throws AlgorithmMismatch
/// (with a reproduction dump) if they ever differ.
EnsembleSummary run_ensemble(const EnsembleConfig& config);

struct PmfBin {
    std::uint64_t sigma = 0;  ///< lower value; the overflow bin pools > max_sigma
    bool overflow = false;
    std::uint64_t count = 0;
    double freq = 0.0;
    double ci_lo = 0.0;  ///< 95% Wilson interval
    double ci_hi = 0.0;
};

struct PmfEstimate {
    std::vector<PmfBin> bins;
    std::uint64_t trials = 0;
    EnsembleSummary summary;
};

/// Histogram of sigma with per-bin Wilson 95% confidence intervals;
/// probability mass above max_sigma is pooled into one overflow bin.
PmfEstimate estimate_pmf(const EnsembleConfig& config, std::uint64_t max_sigma);

/// z-scores of the ensemble against the closed-form moments. Variance is
/// checked against every available source, each labelled with its
/// provenance ("paper" for the published polynomials, "mecke"/"recursion"
/// for the independent engines).
struct ComparisonEntry {
    std::string quantity;   // "mean" or "variance"
    std::string provenance; // "paper", "mecke", "recursion"
    double analytic = 0.0;
    double estimate = 0.0;
    double standard_error = 0.0;
    double z = 0.0;
    bool pass = false;  // |z| <= 4
};

struct ComparisonReport {
    std::vector<ComparisonEntry> entries;
    bool mean_pass = false;
    nlohmann::json to_json() const;
};

ComparisonReport compare_to_analytic(const EnsembleSummary& summary);

/// "trial,sigma" per-trial CSV (re-runs the per-trial counting for the
/// requested config; intended for modest trial counts).
void write_trials_csv(std::ostream& os, const EnsembleConfig& config);

// Sweep over a Lambda grid at fixed k: for each (Lambda, lambda) combo,
// L solves Lambda = lambda (k r0 - L); combos with L outside
// ((k-1) r0, k r0) are skipped, Lambda == 0 runs as the degenerate
// all-zero ensemble.
struct SweepSpec {
    int k = 3;
    std::vector<double> big_lambda_grid;
    std::vector<double> lambdas;
    double r0 = 1.0;
    std::uint64_t trials = 100'000;
    std::uint64_t root_seed = 0;
    unsigned parallelism = 0;
};

struct SweepRow {
    double big_lambda = 0.0;
    double lambda = 0.0;
    double r0 = 0.0;
    double L = 0.0;
    double mean_mc = 0.0;
    double var_mc = 0.0;
    double mean_an = 0.0;
    double var_an_paper = 0.0;  // NaN when no published polynomial exists
    double var_an_mecke = 0.0;
    double se_mean = 0.0;
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// CSV header:
/// big_lambda,lambda,r0,L,mean_mc,var_mc,mean_an,var_an_paper,var_an_mecke,se_mean
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace geostat
