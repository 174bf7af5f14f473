#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "geostat/errors.hpp"

namespace geostat {

/// Road-network scenario: vehicles form a 1D Poisson point process of
/// density `lambda`, nodes connect iff their distance is <= r0 (closed
/// ball), and we study multihop paths between a source at 0 and a
/// destination at L.
///
/// All lengths are abstract units; nothing here converts units.
struct Scenario {
    double lambda;  ///< vehicle density per unit length, >= 0
    double r0;      ///< communication range, > 0
    double L;       ///< source-destination distance, > 0

    Scenario(double lambda, double r0, double L);

    /// Minimum hop count k = ceil(L / r0); 1 when L <= r0.
    int hop_count() const;

    /// True when L is an integer multiple of r0 (within a few ulp): the
    /// lens width is then exactly 0 and sigma_k = 0 almost surely for
    /// k >= 2. Degenerate scenarios are flagged, not rejected.
    bool degenerate() const;

    /// Common lens width W = k*r0 - L (0 for degenerate scenarios).
    double lens_width() const;

    /// Expected relay count per lens, Lambda_k = lambda * W.
    double big_lambda() const;
};

nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

/// The k-1 intervals ("lenses") that the relays of a k-hop path must
/// occupy, one relay per lens. Lens i (1-indexed) is
/// [L - (k-i)*r0, i*r0]; all lenses share the width W = k*r0 - L and are
/// pairwise disjoint, ordered left to right.
struct LensDecomposition {
    int k = 0;                    ///< hop count, >= 2
    std::vector<Interval> lenses; ///< k-1 lenses, left to right
    double width = 0.0;           ///< common width W
    double big_lambda = 0.0;      ///< lambda * W
    double r0 = 0.0;
    double L = 0.0;
};

int derive_hop_count(const Scenario& s);

/// Throws DirectConnection when k = 1 and DegenerateScenario when W = 0.
LensDecomposition lens_decomposition(const Scenario& s);

/// Dimensionless view of a scenario. Mapping each lens to [0,1] via
/// u_i = (d_i - lens_i.lo) / W turns each lens process into an independent
/// unit-interval Poisson process of intensity Lambda_k, and a (k-1)-tuple
/// of relays forms a k-hop path iff u_1 >= u_2 >= ... >= u_{k-1}. That
/// equivalence is exercised operationally by the cross-algorithm tests in
/// the geodesics module.
struct ChainScenario {
    int k = 0;
    double big_lambda = 0.0;
    bool normalized = true;

    static ChainScenario from(const Scenario& s);
    static ChainScenario from(const LensDecomposition& d);
};

/// Normalized lens coordinate u = (x - lens.lo) / W for lens_index in
/// [0, k-2].
double normalize_lens_coordinate(const LensDecomposition& d, int lens_index,
                                 double x);

}  // namespace geostat
