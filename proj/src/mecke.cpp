#include "geostat/mecke.hpp"

#include <algorithm>

#include "geostat/errors.hpp"
#include "geostat/poset.hpp"

namespace geostat {

std::vector<std::vector<int>> set_partitions(int m) {
    // restricted-growth strings: a[0] = 0, a[j] <= 1 + max(a[0..j-1])
    std::vector<std::vector<int>> out;
    std::vector<int> a(static_cast<std::size_t>(m), 0);
    auto rec = [&](auto&& self, int j, int maxb) -> void {
        if (j == m) {
            out.push_back(a);
            return;
        }
        for (int b = 0; b <= maxb + 1; ++b) {
            a[static_cast<std::size_t>(j)] = b;
            self(self, j + 1, std::max(maxb, b));
        }
    };
    if (m > 0) rec(rec, 0, -1);
    return out;
}

MomentPolynomial mecke_moment(int k, int order) {
    const int m = order;
    if (k < 2 || k > 7 || m < 1 || m > 4 || m * (k - 1) > 20)
        throw TermBudgetExceeded(
            "mecke_moment supports 2 <= k <= 7, 1 <= order <= 4 with order*(k-1) <= 20");

    const auto parts = set_partitions(m);
    const int lenses = k - 1;
    const std::size_t p = parts.size();

    std::vector<int> block_count(p);
    for (std::size_t i = 0; i < p; ++i)
        block_count[i] = 1 + *std::max_element(parts[i].begin(), parts[i].end());

    MomentPolynomial total;
    std::vector<std::size_t> choice(static_cast<std::size_t>(lenses), 0);
    std::vector<int> offset(static_cast<std::size_t>(lenses), 0);
    for (;;) {
        // variable ids: blocks of lens i live at offset[i] .. offset[i]+|pi_i|-1
        int n = 0;
        for (int i = 0; i < lenses; ++i) {
            offset[static_cast<std::size_t>(i)] = n;
            n += block_count[choice[static_cast<std::size_t>(i)]];
        }
        Poset poset;
        poset.n = n;
        for (int i = 0; i + 1 < lenses; ++i) {
            const auto& pi_lo = parts[choice[static_cast<std::size_t>(i)]];
            const auto& pi_hi = parts[choice[static_cast<std::size_t>(i + 1)]];
            for (int j = 0; j < m; ++j) {
                // copy j's chain demands u_{i+1} <= u_i
                const int a = offset[static_cast<std::size_t>(i + 1)] +
                              pi_hi[static_cast<std::size_t>(j)];
                const int b = offset[static_cast<std::size_t>(i)] +
                              pi_lo[static_cast<std::size_t>(j)];
                poset.edges.emplace_back(a, b);
            }
        }
        const mpq_class vol = order_region_volume(poset);
        if (vol != 0)
            total += MomentPolynomial::monomial(static_cast<unsigned>(n), vol);

        // odometer over the partition choices
        int i = 0;
        for (; i < lenses; ++i) {
            if (++choice[static_cast<std::size_t>(i)] < p) break;
            choice[static_cast<std::size_t>(i)] = 0;
        }
        if (i == lenses) break;
    }
    return total;
}

MomentPolynomial mecke_central_moment(int k, int order) {
    const int m = order;
    if (m < 1) throw TermBudgetExceeded("central moment order must be >= 1");
    const MomentPolynomial mu = mecke_moment(k, 1);

    // E[(sigma - mu)^m] = sum_j C(m,j) E[sigma^j] (-mu)^{m-j}
    MomentPolynomial total;
    for (int j = 0; j <= m; ++j) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(m),
                     static_cast<unsigned long>(j));
        MomentPolynomial term =
            (j == 0) ? MomentPolynomial::constant(1) : mecke_moment(k, j);
        MomentPolynomial neg_mu = mu;
        neg_mu *= mpq_class(-1);
        term *= neg_mu.pow(static_cast<unsigned>(m - j));
        term *= mpq_class(binom);
        total += term;
    }
    return total;
}

}  // namespace geostat
