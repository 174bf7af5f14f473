#pragma once

#include <vector>

#include "geostat/polynomial.hpp"

namespace geostat {

/// All set partitions of {0..m-1} as block labels in restricted-growth
/// form: part[j] is the block index of element j, blocks numbered by first
/// appearance.
std::vector<std::vector<int>> set_partitions(int m);

/// Exact raw moment E[sigma_k^m] of the geodesic-path count.
///
/// Works in the chain representation: sigma_k counts decreasing chains
/// u_1 >= ... >= u_{k-1} across k-1 independent unit-interval Poisson
/// processes of intensity Lambda. The m-th power expands over per-lens set
/// partitions of the m chain copies (copies in one block share a point);
/// each term contributes Lambda^{#blocks} times the volume of the order
/// region cut out by the merged chain constraints, computed exactly as
/// (linear extensions)/n!.
///
/// Budget: 1 <= m <= 4, 2 <= k <= 7, and m*(k-1) <= 20 so every term fits
/// the linear-extension kernel; beyond that throws TermBudgetExceeded.
MomentPolynomial mecke_moment(int k, int order);

/// Central moment E[(sigma_k - E[sigma_k])^m] by binomial recombination of
/// raw moments, all in exact rational arithmetic.
MomentPolynomial mecke_central_moment(int k, int order);

}  // namespace geostat
