#include "geostat/analytics.hpp"

#include <cmath>

#include "geostat/errors.hpp"

namespace geostat {

MomentPolynomial mean_sigma(int k) {
    if (k < 1) throw UnsupportedK("mean_sigma needs k >= 1");
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(k - 1));
    mpq_class c(1, fact);
    c.canonicalize();
    return MomentPolynomial::monomial(static_cast<unsigned>(k - 1), c);
}

MomentPolynomial variance_sigma_paper(int k) {
    if (k == 3) {
        MomentPolynomial p = MomentPolynomial::monomial(3, rational(2, 3));
        p += MomentPolynomial::monomial(2, rational(1, 2));
        return p;
    }
    if (k == 4) {
        // (6 Lambda^5 + 15 Lambda^4 + 10 Lambda^3) / 60
        MomentPolynomial p = MomentPolynomial::monomial(5, rational(1, 10));
        p += MomentPolynomial::monomial(4, rational(1, 4));
        p += MomentPolynomial::monomial(3, rational(1, 6));
        return p;
    }
    throw UnsupportedK("published variance exists only for k = 3 and k = 4");
}

MomentPolynomial third_central_moment_paper() {
    MomentPolynomial p = MomentPolynomial::monomial(5, rational(-5, 6));
    p += MomentPolynomial::monomial(4, rational(-1, 5));
    return p;
}

MomentPolynomial variance_sigma_oracle(int k) {
    if (k == 1) return MomentPolynomial();       // sigma_1 == 1
    if (k == 2) return MomentPolynomial::monomial(1, 1);  // Poisson
    if (k <= 7) return mecke_central_moment(k, 2);
    return recursion_moments(k).variance;
}

VarianceComparison variance_comparison(int k) {
    VarianceComparison out;
    out.recursion = recursion_moments(k).variance;
    out.mecke = mecke_central_moment(k, 2);
    out.recursion_equals_mecke = (out.recursion == out.mecke);
    if (k == 3 || k == 4) {
        out.paper = variance_sigma_paper(k);
        out.oracle_matches_paper = (out.mecke == *out.paper);
    }
    return out;
}

RebroadcastResult rebroadcast_probability(const RebroadcastQuery& query) {
    if (!(query.target_paths > 0.0))
        throw InvalidScenario("rebroadcast: target path count must be > 0");
    const Scenario& s = query.scenario;
    const int k = s.hop_count();
    if (k == 1)
        throw DirectConnection("rebroadcast: k = 1 has a direct source-destination link");
    if (s.degenerate() || !(s.big_lambda() > 0.0))
        throw DegenerateScenario("rebroadcast: zero lens width");

    RebroadcastResult r;
    r.k = k;
    r.big_lambda = s.big_lambda();
    double fact = 1.0;
    for (int i = 2; i <= k - 1; ++i) fact *= static_cast<double>(i);
    r.nu_raw = std::pow(query.target_paths * fact, 1.0 / static_cast<double>(k - 1)) /
               r.big_lambda;
    r.clamped = r.nu_raw > 1.0;
    r.nu = r.clamped ? 1.0 : r.nu_raw;
    r.target_check =
        mean_sigma(k).evaluate(r.nu * r.big_lambda);
    return r;
}

}  // namespace geostat
