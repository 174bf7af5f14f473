#include "geostat/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace geostat {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer (Steele/Lea/Flood; Vigna's fixed-increment variant).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

TrialRng::TrialRng(SampleSeed seed, std::uint64_t stream_tag) {
    std::uint64_t h = mix64(seed.root_seed + kGolden);
    h = mix64(h ^ (seed.trial_index + kGolden));
    h = mix64(h ^ (stream_tag + kGolden));
    state_ = h;
}

std::uint64_t TrialRng::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double TrialRng::next_unit() {
    // 53 random bits, offset by half an ulp: never exactly 0 or 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t TrialRng::poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    if (mean < 700.0) {
        // Inversion by uniform products: N = #{n : U1*...*Un > e^-mean}.
        const double limit = std::exp(-mean);
        std::uint64_t n = 0;
        double prod = next_unit();
        while (prod > limit) {
            ++n;
            prod *= next_unit();
        }
        return n;
    }
    // e^-mean underflows; count exponential interarrivals instead.
    std::uint64_t n = 0;
    double acc = -std::log(next_unit());
    while (acc <= mean) {
        ++n;
        acc += -std::log(next_unit());
    }
    return n;
}

PointSample sample_ppp(double rate, double lo, double hi, SampleSeed seed,
                       std::uint64_t stream_tag) {
    if (lo > hi) throw InvalidInterval("sample_ppp: lo > hi");
    if (!(rate >= 0.0) || !std::isfinite(rate))
        throw InvalidInterval("sample_ppp: rate must be finite and >= 0");

    PointSample out;
    out.lo = lo;
    out.hi = hi;
    const double len = hi - lo;
    if (rate <= 0.0 || len <= 0.0) return out;

    TrialRng rng(seed, stream_tag);
    const std::uint64_t n = rng.poisson(rate * len);
    out.positions.resize(n);
    for (std::uint64_t i = 0; i < n; ++i)
        out.positions[i] = lo + rng.next_unit() * len;
    std::sort(out.positions.begin(), out.positions.end());
    return out;
}

std::vector<PointSample> sample_lenses(const LensDecomposition& decomp,
                                       double lambda, SampleSeed seed) {
    std::vector<PointSample> out;
    out.reserve(decomp.lenses.size());
    for (std::size_t i = 0; i < decomp.lenses.size(); ++i) {
        const auto& lens = decomp.lenses[i];
        out.push_back(sample_ppp(lambda, lens.lo, lens.hi, seed,
                                 rng_stream::kLensBase + i));
    }
    return out;
}

PointSample sample_road(const Scenario& s, double margin, SampleSeed seed) {
    if (!(margin >= 0.0))
        throw InvalidInterval("sample_road: margin must be >= 0");
    return sample_ppp(s.lambda, -margin, s.L + margin, seed, rng_stream::kRoad);
}

void write_points_csv(std::ostream& os,
                      const std::vector<std::pair<std::uint64_t, const PointSample*>>& rows) {
    os << "trial,position\n";
    char buf[64];
    for (const auto& [trial, sample] : rows) {
        for (double x : sample->positions) {
            std::snprintf(buf, sizeof(buf), "%.17g", x);
            os << trial << ',' << buf << '\n';
        }
    }
}

}  // namespace geostat
