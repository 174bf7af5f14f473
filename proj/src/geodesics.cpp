#include "geostat/geodesics.hpp"

#include <stdexcept>

namespace geostat {

namespace {

GeodesicCount pack_bfs(int k_target, int hops, mpz_class sigma) {
    GeodesicCount out;
    out.k_target = k_target;
    if (hops >= 0) {
        if (hops < k_target)
            throw std::logic_error("BFS found a path shorter than ceil(L/r0)");
        out.shortest_hops = hops;
    }
    out.sigma = std::move(sigma);
    return out;
}

}  // namespace

GeodesicCount count_bfs(const PointSample& road, const Scenario& s) {
    const int k = s.hop_count();
    try {
        auto [hops, sigma] =
            detail::bfs_count<detail::CheckedU64>(road.positions, s.r0, s.L, k);
        return pack_bfs(k, hops, detail::to_mpz(sigma));
    } catch (const CountOverflow&) {
        auto [hops, sigma] =
            detail::bfs_count<mpz_class>(road.positions, s.r0, s.L, k);
        return pack_bfs(k, hops, std::move(sigma));
    }
}

GeodesicCount count_bfs_naive(const PointSample& road, const Scenario& s) {
    const int k = s.hop_count();
    try {
        auto [hops, sigma] = detail::bfs_count_naive<detail::CheckedU64>(
            road.positions, s.r0, s.L, k);
        return pack_bfs(k, hops, detail::to_mpz(sigma));
    } catch (const CountOverflow&) {
        auto [hops, sigma] =
            detail::bfs_count_naive<mpz_class>(road.positions, s.r0, s.L, k);
        return pack_bfs(k, hops, std::move(sigma));
    }
}

GeodesicCount count_lens_chains(const std::vector<PointSample>& lens_samples,
                                const LensDecomposition& decomp) {
    if (lens_samples.size() != decomp.lenses.size())
        throw InvalidScenario("count_lens_chains: need one sample per lens");
    std::vector<const std::vector<double>*> ptrs;
    ptrs.reserve(lens_samples.size());
    for (const auto& s : lens_samples) ptrs.push_back(&s.positions);

    GeodesicCount out;
    out.k_target = decomp.k;
    try {
        out.sigma =
            detail::to_mpz(detail::chain_count<detail::CheckedU64>(decomp.r0, ptrs));
    } catch (const CountOverflow&) {
        out.sigma = detail::chain_count<mpz_class>(decomp.r0, ptrs);
    }
    if (out.sigma > 0) out.shortest_hops = decomp.k;
    return out;
}

WindowDecomposition window_decomposition(const PointSample& lens1,
                                         const LensDecomposition& decomp) {
    if (decomp.k != 3)
        throw WrongHopCount("window_decomposition is defined for k = 3");
    WindowDecomposition wd;
    wd.d.assign(lens1.positions.rbegin(), lens1.positions.rend());
    // Band edges d_i + r0 clamp to the second lens, which is the same as
    // padding the descending d-sequence with the first lens's endpoints.
    const double top = decomp.lenses[0].hi;  // r0
    const double bot = decomp.lenses[0].lo;  // L - 2*r0
    wd.w.reserve(wd.d.size() + 1);
    double prev = top;
    for (double di : wd.d) {
        wd.w.push_back(prev - di);
        prev = di;
    }
    wd.w.push_back(prev - bot);
    return wd;
}

mpz_class sigma_from_windows(const WindowDecomposition& wd,
                             const PointSample& lens2,
                             const LensDecomposition& decomp) {
    const double r0 = decomp.r0;
    mpz_class total = 0;
    for (double y : lens2.positions) {
        // how many lens-1 relays this point connects to; d is descending,
        // so the connected ones form a prefix
        auto it = std::partition_point(wd.d.begin(), wd.d.end(),
                                       [&](double dj) { return y - dj <= r0; });
        total += static_cast<long>(it - wd.d.begin());
    }
    return total;
}

void write_geodesics_csv(std::ostream& os,
                         const std::vector<std::pair<std::uint64_t, const GeodesicCount*>>& rows) {
    os << "trial,k_target,shortest_hops,sigma\n";
    for (const auto& [trial, gc] : rows) {
        os << trial << ',' << gc->k_target << ','
           << (gc->shortest_hops ? *gc->shortest_hops : -1) << ','
           << gc->sigma.get_str() << '\n';
    }
}

}  // namespace geostat
