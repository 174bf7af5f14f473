#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "geostat/model.hpp"

namespace geostat {

/// Identifies one trial of one experiment. The random stream drawn for a
/// given (root_seed, trial_index) pair is a pure function of the pair; no
/// global state is involved, so trials can run on any thread in any order
/// and still reproduce bit-identically.
struct SampleSeed {
    std::uint64_t root_seed = 0;
    std::uint64_t trial_index = 0;
};

namespace rng_stream {
// Stream tags separating the independent draws made within one trial.
inline constexpr std::uint64_t kRoad = 0;
inline constexpr std::uint64_t kLensBase = 1;  // lens i uses kLensBase + i
}  // namespace rng_stream

/// splitmix64 generator keyed by (root_seed, trial_index, stream_tag).
class TrialRng {
  public:
    explicit TrialRng(SampleSeed seed, std::uint64_t stream_tag = 0);

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1).
    double next_unit();

    /// Poisson count with the given mean (exact inversion by uniform
    /// products for small means, exponential interarrival sums beyond the
    /// underflow range of exp(-mean)).
    std::uint64_t poisson(double mean);

  private:
    std::uint64_t state_;
};

/// One realisation of point positions on an interval, sorted ascending.
/// Ties are possible in principle (probability zero); consumers must not
/// assume distinctness.
struct PointSample {
    std::vector<double> positions;
    double lo = 0.0;
    double hi = 0.0;

    std::size_t count() const { return positions.size(); }
};

/// Homogeneous Poisson point process on [lo, hi]: the count is
/// Poisson(rate * (hi - lo)) and, given the count, positions are i.i.d.
/// uniform. Deterministic in (seed, stream_tag).
PointSample sample_ppp(double rate, double lo, double hi, SampleSeed seed,
                       std::uint64_t stream_tag = 0);

/// One independent PPP per lens, each at rate lambda (per-lens counts are
/// i.i.d. Poisson(Lambda_k)).
std::vector<PointSample> sample_lenses(const LensDecomposition& decomp,
                                       double lambda, SampleSeed seed);

/// Whole-road sample on [-margin, L + margin]. Source (0) and destination
/// (L) are not included; the geodesics module adds them as graph nodes.
/// Samples over different intervals share no points even for equal seeds.
PointSample sample_road(const Scenario& s, double margin, SampleSeed seed);

/// CSV dump, header "trial,position", positions with 17 significant digits.
void write_points_csv(std::ostream& os,
                      const std::vector<std::pair<std::uint64_t, const PointSample*>>& rows);

}  // namespace geostat
