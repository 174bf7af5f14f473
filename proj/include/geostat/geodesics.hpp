#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "geostat/model.hpp"
#include "geostat/sampling.hpp"

namespace geostat {

/// Result of counting geodesic (= exactly k_target-hop) paths on one
/// realisation. sigma counts only minimal-length paths: when the
/// destination is reachable only via longer paths, sigma is 0.
struct GeodesicCount {
    int k_target = 0;
    /// Graph distance from source to destination; nullopt when no
    /// k_target-hop path exists and the algorithm did not determine
    /// longer-range connectivity (lens counting), or the destination is
    /// unreachable (BFS).
    std::optional<int> shortest_hops;
    mpz_class sigma;
};

namespace detail {

/// 64-bit counter with checked addition; throws CountOverflow instead of
/// wrapping. The public counting functions catch the overflow and recount
/// with mpz_class.
struct CheckedU64 {
    std::uint64_t v = 0;
    CheckedU64() = default;
    explicit CheckedU64(std::uint64_t x) : v(x) {}
    CheckedU64& operator+=(CheckedU64 o) {
        if (__builtin_add_overflow(v, o.v, &v))
            throw CountOverflow("64-bit path count overflow");
        return *this;
    }
    friend CheckedU64 operator+(CheckedU64 a, CheckedU64 b) { return a += b, a; }
    // only used on prefix sums, where a >= b holds
    friend CheckedU64 operator-(CheckedU64 a, CheckedU64 b) { a.v -= b.v; return a; }
    bool operator==(const CheckedU64&) const = default;
};

/// Number of (k-1)-tuples (one point per lens, consecutive gaps <= r0).
/// Lens vectors must be sorted ascending.
template <class Count>
Count chain_count(double r0,
                  const std::vector<const std::vector<double>*>& lenses) {
    if (lenses.empty()) return Count(0);
    for (const auto* l : lenses)
        if (l->empty()) return Count(0);

    static thread_local std::vector<Count> w, wn, suffix;
    w.assign(lenses[0]->size(), Count(1));
    for (std::size_t li = 1; li < lenses.size(); ++li) {
        const auto& prev = *lenses[li - 1];
        const auto& cur = *lenses[li];
        suffix.assign(prev.size() + 1, Count(0));
        for (std::size_t j = prev.size(); j-- > 0;)
            suffix[j] = suffix[j + 1] + w[j];
        wn.assign(cur.size(), Count(0));
        for (std::size_t p = 0; p < cur.size(); ++p) {
            const double xp = cur[p];
            // predecessors form a suffix of the previous lens
            auto it = std::partition_point(prev.begin(), prev.end(),
                                           [&](double q) { return xp - q > r0; });
            wn[p] = suffix[static_cast<std::size_t>(it - prev.begin())];
        }
        w.swap(wn);
    }
    Count total(0);
    for (const auto& x : w) total += x;
    return total;
}

/// Layered BFS shortest-path count on the 1D unit-disk graph over
/// {0, relays..., L}. Returns {hops to destination or -1, number of paths
/// of exactly k_target hops}. Neighbor ranges are found by binary search
/// and nodes are discovered once via an index-skip structure, so the whole
/// thing is O(n log n).
template <class Count>
std::pair<int, Count> bfs_count(const std::vector<double>& relays, double r0,
                                double L, int k_target) {
    static thread_local std::vector<double> xs;
    const std::size_t n = relays.size() + 2;
    xs.clear();
    xs.reserve(n);
    const double extras[2] = {0.0, L};
    std::merge(relays.begin(), relays.end(), extras, extras + 2,
               std::back_inserter(xs));
    const int src = static_cast<int>(
        std::lower_bound(xs.begin(), xs.end(), 0.0) - xs.begin());
    const int dst = static_cast<int>(
        std::lower_bound(xs.begin(), xs.end(), L) - xs.begin());

    static thread_local std::vector<int> dist, nxt, fifo;
    dist.assign(n, -1);
    nxt.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) nxt[i] = static_cast<int>(i);
    auto next_unvisited = [&](int i) {
        while (nxt[i] != i) i = nxt[i] = nxt[nxt[i]];
        return i;
    };

    fifo.clear();
    dist[src] = 0;
    nxt[src] = src + 1;
    fifo.push_back(src);
    int hops_to_dst = -1;
    for (std::size_t head = 0; head < fifo.size(); ++head) {
        const int v = fifo[head];
        if (v == dst) hops_to_dst = dist[v];
        if (hops_to_dst != -1 && dist[v] >= hops_to_dst) continue;
        const double xv = xs[v];
        const int lo = static_cast<int>(
            std::partition_point(xs.begin(), xs.end(),
                                 [&](double q) { return xv - q > r0; }) -
            xs.begin());
        const int hi = static_cast<int>(
            std::partition_point(xs.begin(), xs.end(),
                                 [&](double q) { return q - xv <= r0; }) -
            xs.begin()) - 1;
        for (int u = next_unvisited(lo); u <= hi; u = next_unvisited(u + 1)) {
            dist[u] = dist[v] + 1;
            fifo.push_back(u);
            nxt[u] = u + 1;
        }
    }

    if (dist[dst] == -1) return {-1, Count(0)};
    const int hops = dist[dst];
    if (hops != k_target) return {hops, Count(0)};

    // count paths layer by layer with windowed prefix sums
    static thread_local std::vector<std::vector<int>> layers;
    layers.assign(static_cast<std::size_t>(hops) + 1, {});
    for (std::size_t i = 0; i < n; ++i) {
        const int d = dist[i];
        if (d >= 0 && d <= hops) layers[static_cast<std::size_t>(d)].push_back(static_cast<int>(i));
    }
    static thread_local std::vector<Count> prev_cnt, cur_cnt, prefix;
    prev_cnt.assign(1, Count(1));
    for (int d = 1; d <= hops; ++d) {
        const auto& P = layers[static_cast<std::size_t>(d - 1)];
        const auto& C = layers[static_cast<std::size_t>(d)];
        prefix.assign(P.size() + 1, Count(0));
        for (std::size_t j = 0; j < P.size(); ++j)
            prefix[j + 1] = prefix[j] + prev_cnt[j];
        cur_cnt.assign(C.size(), Count(0));
        for (std::size_t ci = 0; ci < C.size(); ++ci) {
            const double xv = xs[C[ci]];
            auto first = std::partition_point(
                P.begin(), P.end(), [&](int u) { return xv - xs[u] > r0; });
            auto last = std::partition_point(
                P.begin(), P.end(), [&](int u) { return xs[u] - xv <= r0; });
            cur_cnt[ci] = prefix[static_cast<std::size_t>(last - P.begin())] -
                          prefix[static_cast<std::size_t>(first - P.begin())];
        }
        prev_cnt.swap(cur_cnt);
    }
    const auto& last_layer = layers[static_cast<std::size_t>(hops)];
    auto it = std::lower_bound(last_layer.begin(), last_layer.end(), dst);
    return {hops, prev_cnt[static_cast<std::size_t>(it - last_layer.begin())]};
}

/// Quadratic reference implementation of bfs_count, kept for testing.
template <class Count>
std::pair<int, Count> bfs_count_naive(const std::vector<double>& relays,
                                      double r0, double L, int k_target) {
    std::vector<double> xs(relays);
    xs.push_back(0.0);
    xs.push_back(L);
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    const int src = static_cast<int>(
        std::lower_bound(xs.begin(), xs.end(), 0.0) - xs.begin());
    const int dst = static_cast<int>(
        std::lower_bound(xs.begin(), xs.end(), L) - xs.begin());
    auto connected = [&](std::size_t a, std::size_t b) {
        const double d = xs[a] < xs[b] ? xs[b] - xs[a] : xs[a] - xs[b];
        return d <= r0;
    };

    std::vector<int> dist(n, -1);
    std::vector<int> fifo;
    dist[static_cast<std::size_t>(src)] = 0;
    fifo.push_back(src);
    for (std::size_t head = 0; head < fifo.size(); ++head) {
        const int v = fifo[head];
        for (std::size_t u = 0; u < n; ++u) {
            if (dist[u] == -1 && connected(static_cast<std::size_t>(v), u)) {
                dist[u] = dist[static_cast<std::size_t>(v)] + 1;
                fifo.push_back(static_cast<int>(u));
            }
        }
    }
    if (dist[static_cast<std::size_t>(dst)] == -1) return {-1, Count(0)};
    const int hops = dist[static_cast<std::size_t>(dst)];
    if (hops != k_target) return {hops, Count(0)};

    std::vector<Count> cnt(n, Count(0));
    cnt[static_cast<std::size_t>(src)] = Count(1);
    for (int d = 1; d <= hops; ++d) {
        for (std::size_t v = 0; v < n; ++v) {
            if (dist[v] != d) continue;
            for (std::size_t u = 0; u < n; ++u)
                if (dist[u] == d - 1 && connected(u, v)) cnt[v] += cnt[u];
        }
    }
    return {hops, cnt[static_cast<std::size_t>(dst)]};
}

inline mpz_class to_mpz(CheckedU64 c) {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(c.v), 0, 0, &c.v);
    return z;
}
inline mpz_class to_mpz(mpz_class z) { return z; }

}  // namespace detail

/// BFS-based geodesic count over a whole-road sample (source 0 and
/// destination L are appended internally).
GeodesicCount count_bfs(const PointSample& road, const Scenario& s);

/// Quadratic reference version of count_bfs.
GeodesicCount count_bfs_naive(const PointSample& road, const Scenario& s);

/// Lens-chain geodesic count: number of (k-1)-tuples, one relay per lens,
/// with consecutive gaps <= r0. Expects one sample per lens.
GeodesicCount count_lens_chains(const std::vector<PointSample>& lens_samples,
                                const LensDecomposition& decomp);

/// The k = 3 window structure of the second lens induced by the relays of
/// the first: band i of the second lens connects to exactly i relays of
/// the first, and the band widths sum to 3*r0 - L.
struct WindowDecomposition {
    std::vector<double> d;  ///< relay distances in lens 1, descending
    std::vector<double> w;  ///< band widths w_0..w_{N1}, top band first
};

/// Throws WrongHopCount unless decomp.k == 3.
WindowDecomposition window_decomposition(const PointSample& lens1,
                                         const LensDecomposition& decomp);

/// sigma_3 = sum_i i * n_i where n_i is the number of lens-2 points in
/// band i. Must agree exactly with count_lens_chains on the same
/// realisation.
mpz_class sigma_from_windows(const WindowDecomposition& wd,
                             const PointSample& lens2,
                             const LensDecomposition& decomp);

/// CSV dump, header "trial,k_target,shortest_hops,sigma"; unreachable /
/// undetermined shortest_hops prints as -1.
void write_geodesics_csv(std::ostream& os,
                         const std::vector<std::pair<std::uint64_t, const GeodesicCount*>>& rows);

}  // namespace geostat
