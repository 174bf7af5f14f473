#include "geostat/model.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace geostat {

namespace {

// Snap L/r0 to the nearest integer when it is within a few ulp; the
// quotient of two doubles that are mathematically an exact multiple can
// land on either side of the integer.
bool is_integer_multiple(double L, double r0, long long& m_out) {
    const double q = L / r0;
    const double m = std::round(q);
    if (m < 1.0) return false;
    const double tol = 32.0 * std::numeric_limits<double>::epsilon() * std::max(q, 1.0);
    if (std::abs(q - m) <= tol) {
        m_out = static_cast<long long>(m);
        return true;
    }
    return false;
}

}  // namespace

Scenario::Scenario(double lambda_, double r0_, double L_)
    : lambda(lambda_), r0(r0_), L(L_) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw InvalidScenario("lambda must be finite and >= 0");
    if (!(r0 > 0.0) || !std::isfinite(r0))
        throw InvalidScenario("r0 must be finite and > 0");
    if (!(L > 0.0) || !std::isfinite(L))
        throw InvalidScenario("L must be finite and > 0");
}

int Scenario::hop_count() const {
    if (L <= r0) return 1;
    long long m = 0;
    if (is_integer_multiple(L, r0, m)) return static_cast<int>(m);
    return static_cast<int>(std::ceil(L / r0));
}

bool Scenario::degenerate() const {
    long long m = 0;
    return is_integer_multiple(L, r0, m);
}

double Scenario::lens_width() const {
    if (degenerate()) return 0.0;
    const double w = static_cast<double>(hop_count()) * r0 - L;
    return w > 0.0 ? w : 0.0;
}

double Scenario::big_lambda() const { return lambda * lens_width(); }

nlohmann::json scenario_to_json(const Scenario& s) {
    return nlohmann::json{{"lambda", s.lambda}, {"r0", s.r0}, {"L", s.L}};
}

Scenario scenario_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("lambda") || !j.contains("r0") || !j.contains("L"))
        throw InvalidScenario("scenario JSON needs fields lambda, r0, L");
    return Scenario(j.at("lambda").get<double>(), j.at("r0").get<double>(),
                    j.at("L").get<double>());
}

int derive_hop_count(const Scenario& s) { return s.hop_count(); }

LensDecomposition lens_decomposition(const Scenario& s) {
    const int k = s.hop_count();
    if (k == 1) throw DirectConnection("L <= r0: no relays needed");
    if (s.degenerate())
        throw DegenerateScenario("L is an exact multiple of r0: lens width 0");

    LensDecomposition d;
    d.k = k;
    d.r0 = s.r0;
    d.L = s.L;
    d.width = static_cast<double>(k) * s.r0 - s.L;
    d.big_lambda = s.lambda * d.width;
    d.lenses.reserve(static_cast<std::size_t>(k - 1));
    for (int i = 1; i <= k - 1; ++i) {
        Interval lens;
        lens.lo = s.L - static_cast<double>(k - i) * s.r0;
        lens.hi = static_cast<double>(i) * s.r0;
        d.lenses.push_back(lens);
    }
    return d;
}

ChainScenario ChainScenario::from(const Scenario& s) {
    return from(lens_decomposition(s));
}

ChainScenario ChainScenario::from(const LensDecomposition& d) {
    ChainScenario c;
    c.k = d.k;
    c.big_lambda = d.big_lambda;
    c.normalized = true;
    return c;
}

double normalize_lens_coordinate(const LensDecomposition& d, int lens_index,
                                 double x) {
    const auto& lens = d.lenses.at(static_cast<std::size_t>(lens_index));
    return (x - lens.lo) / d.width;
}

}  // namespace geostat
