#pragma once

#include <utility>
#include <vector>

#include <gmpxx.h>

namespace geostat {

/// Partial order over n integration variables. An edge (a, b) constrains
/// variable a <= variable b. The order region {u in [0,1]^n : all
/// constraints hold} has volume e(P)/n! where e(P) is the number of linear
/// extensions; constraint sets with a cycle pin variables together and get
/// volume 0.
struct Poset {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
};

/// Number of linear extensions via dynamic programming over downsets.
/// Self-loops are vacuous and ignored. Throws SizeExceeded for n > 20 and
/// CyclicOrder when the constraint graph has a (non-trivial) cycle.
mpz_class count_linear_extensions(const Poset& p);

/// e(P)/n! as an exact rational; cyclic input yields 0.
mpq_class order_region_volume(const Poset& p);

}  // namespace geostat
