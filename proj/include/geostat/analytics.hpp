#pragma once

#include <optional>

#include "geostat/mecke.hpp"
#include "geostat/model.hpp"
#include "geostat/polynomial.hpp"
#include "geostat/recursion.hpp"

namespace geostat {

/// E[sigma_k] = Lambda^{k-1} / (k-1)!  (k >= 1; k = 1 is the constant 1).
MomentPolynomial mean_sigma(int k);

/// Published closed-form variance, exactly as printed in the source
/// derivation. Only k = 3 and k = 4 exist in print; other k throw
/// UnsupportedK. The k = 4 polynomial disagrees with both independent
/// engines in its leading coefficient; see variance_comparison().
MomentPolynomial variance_sigma_paper(int k);

/// Published third central moment for k = 3, as printed. The independent
/// engines and Monte Carlo contradict it (it is negative for all
/// Lambda > 0); it is exposed for reference, labelled, never used as
/// ground truth.
MomentPolynomial third_central_moment_paper();

/// Best available exact variance: the Mecke engine for k <= 7, the
/// recursion engine beyond.
MomentPolynomial variance_sigma_oracle(int k);

/// Side-by-side variance sources for one k; any disagreement is surfaced,
/// nothing is corrected silently.
struct VarianceComparison {
    MomentPolynomial recursion;
    MomentPolynomial mecke;
    std::optional<MomentPolynomial> paper;  // k in {3, 4} only
    bool recursion_equals_mecke = false;
    bool oracle_matches_paper = false;      // meaningful when paper is set
};
VarianceComparison variance_comparison(int k);

/// Re-broadcast thinning query: find the fraction nu of vehicles that
/// should re-broadcast so the expected geodesic count drops to the target.
struct RebroadcastQuery {
    double target_paths = 0.0;  ///< varsigma > 0
    Scenario scenario;
};

struct RebroadcastResult {
    double nu = 0.0;        ///< min(1, raw value)
    double nu_raw = 0.0;    ///< (varsigma (k-1)!)^{1/(k-1)} / Lambda_k
    bool clamped = false;   ///< raw value exceeded 1
    double target_check = 0.0;  ///< (nu Lambda)^{k-1}/(k-1)!; equals the
                                ///< target whenever nu < 1
    int k = 0;
    double big_lambda = 0.0;
};

/// Throws DegenerateScenario (zero lens width) or DirectConnection (k = 1,
/// where thinning is meaningless).
RebroadcastResult rebroadcast_probability(const RebroadcastQuery& query);

}  // namespace geostat
