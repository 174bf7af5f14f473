#include "geostat/poset.hpp"

#include <cstdint>
#include <stdexcept>

#include "geostat/errors.hpp"

namespace geostat {

namespace {

// predecessor bitmasks from the edge list; throws on bad variable ids
std::vector<std::uint32_t> predecessor_masks(const Poset& p) {
    std::vector<std::uint32_t> pred(static_cast<std::size_t>(p.n), 0);
    for (const auto& [a, b] : p.edges) {
        if (a < 0 || a >= p.n || b < 0 || b >= p.n)
            throw std::out_of_range("poset edge references a variable out of range");
        if (a == b) continue;  // a <= a always holds
        pred[static_cast<std::size_t>(b)] |= 1u << a;
    }
    return pred;
}

bool has_cycle(int n, const std::vector<std::uint32_t>& pred) {
    // Kahn: repeatedly remove variables whose predecessors are all removed
    std::uint32_t removed = 0;
    const std::uint32_t all = (n == 32) ? 0xffffffffu : ((1u << n) - 1u);
    bool progress = true;
    while (progress && removed != all) {
        progress = false;
        for (int v = 0; v < n; ++v) {
            const std::uint32_t bit = 1u << v;
            if ((removed & bit) == 0 &&
                (pred[static_cast<std::size_t>(v)] & ~removed) == 0) {
                removed |= bit;
                progress = true;
            }
        }
    }
    return removed != all;
}

}  // namespace

mpz_class count_linear_extensions(const Poset& p) {
    if (p.n < 0) throw std::invalid_argument("poset with negative size");
    if (p.n > 20)
        throw SizeExceeded("linear-extension counting supports n <= 20");
    if (p.n == 0) return 1;

    const auto pred = predecessor_masks(p);
    if (has_cycle(p.n, pred)) throw CyclicOrder("constraint graph has a cycle");

    // f[S] = number of linear orders of the downset S; extend S by any
    // variable whose predecessors are already placed. Counts stay below
    // n! <= 20! < 2^64.
    const std::uint32_t full = (p.n == 32) ? 0xffffffffu : ((1u << p.n) - 1u);
    std::vector<std::uint64_t> f(static_cast<std::size_t>(full) + 1, 0);
    f[0] = 1;
    for (std::uint32_t S = 0; S < full; ++S) {
        const std::uint64_t fs = f[S];
        if (fs == 0) continue;
        std::uint32_t cand = ~S & full;
        while (cand) {
            const int v = __builtin_ctz(cand);
            const std::uint32_t bit = 1u << v;
            cand &= cand - 1;
            if ((pred[static_cast<std::size_t>(v)] & ~S) == 0) f[S | bit] += fs;
        }
    }

    mpz_class out;
    mpz_import(out.get_mpz_t(), 1, 1, sizeof(std::uint64_t), 0, 0, &f[full]);
    return out;
}

mpq_class order_region_volume(const Poset& p) {
    mpz_class e;
    try {
        e = count_linear_extensions(p);
    } catch (const CyclicOrder&) {
        return 0;
    }
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(p.n));
    mpq_class vol(e, fact);
    vol.canonicalize();
    return vol;
}

}  // namespace geostat
