#include "geostat/recursion.hpp"

#include "geostat/errors.hpp"

namespace geostat {

// ProfilePoly -------------------------------------------------------------

ProfilePoly ProfilePoly::term(int u_power, MomentPolynomial coeff) {
    ProfilePoly p;
    p.insert(u_power, coeff);
    return p;
}

void ProfilePoly::insert(int p, const MomentPolynomial& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = t_.emplace(p, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) t_.erase(it);
    }
}

ProfilePoly& ProfilePoly::operator+=(const ProfilePoly& o) {
    for (const auto& [p, c] : o.t_) insert(p, c);
    return *this;
}

ProfilePoly ProfilePoly::operator*(const ProfilePoly& o) const {
    ProfilePoly out;
    for (const auto& [pa, ca] : t_)
        for (const auto& [pb, cb] : o.t_) out.insert(pa + pb, ca * cb);
    return out;
}

ProfilePoly ProfilePoly::scaled(const MomentPolynomial& s) const {
    ProfilePoly out;
    for (const auto& [p, c] : t_) out.insert(p, c * s);
    return out;
}

ProfilePoly ProfilePoly::integral() const {
    ProfilePoly out;
    for (const auto& [p, c] : t_)
        out.insert(p + 1, c * rational(1, p + 1));
    return out;
}

MomentPolynomial ProfilePoly::at_one() const {
    MomentPolynomial out;
    for (const auto& [p, c] : t_) out += c;
    return out;
}

// BiProfilePoly -----------------------------------------------------------

BiProfilePoly BiProfilePoly::term(int s_power, int t_power, MomentPolynomial coeff) {
    BiProfilePoly p;
    p.insert(s_power, t_power, coeff);
    return p;
}

BiProfilePoly BiProfilePoly::from_s_poly(const ProfilePoly& f) {
    BiProfilePoly out;
    for (const auto& [p, c] : f.terms()) out.insert(p, 0, c);
    return out;
}

void BiProfilePoly::insert(int ps, int pt, const MomentPolynomial& c) {
    if (c.is_zero()) return;
    auto key = std::make_pair(ps, pt);
    auto [it, fresh] = t_.emplace(key, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) t_.erase(it);
    }
}

BiProfilePoly& BiProfilePoly::operator+=(const BiProfilePoly& o) {
    for (const auto& [k, c] : o.t_) insert(k.first, k.second, c);
    return *this;
}

BiProfilePoly BiProfilePoly::scaled(const MomentPolynomial& s) const {
    BiProfilePoly out;
    for (const auto& [k, c] : t_) out.insert(k.first, k.second, c * s);
    return out;
}

ProfilePoly BiProfilePoly::ordered_double_integral() const {
    // s^a t^b over {0<s<t<u}: inner s-integral gives t^{a+b+1}/(a+1),
    // outer t-integral gives u^{a+b+2}/((a+1)(a+b+2))
    ProfilePoly out;
    for (const auto& [k, c] : t_) {
        const auto [a, b] = k;
        out += ProfilePoly::term(
            a + b + 2, c * (rational(1, a + 1) * rational(1, a + b + 2)));
    }
    return out;
}

BiProfilePoly BiProfilePoly::cross_integral() const {
    // p^a r^b over p in (0,s), r in (s,t):
    //   s^{a+1} (t^{b+1} - s^{b+1}) / ((a+1)(b+1))
    BiProfilePoly out;
    for (const auto& [k, c] : t_) {
        const auto [a, b] = k;
        const mpq_class f = rational(1, a + 1) * rational(1, b + 1);
        out.insert(a + 1, b + 1, c * f);
        out.insert(a + b + 2, 0, c * (-f));
    }
    return out;
}

ProfilePoly BiProfilePoly::diagonal() const {
    ProfilePoly out;
    for (const auto& [k, c] : t_) out += ProfilePoly::term(k.first + k.second, c);
    return out;
}

// RecursionState ----------------------------------------------------------

RecursionState RecursionState::base() {
    // tau^{(3)}(u) = sum over second-lens cells up to u of Y2 * (first-lens
    // count up to the same cell). Poisson identities (mean x, second
    // moment x^2 + x per cell) give, in the limit:
    //   mean     = (1/2) Lambda^2 u^2
    //   variance = (2/3) Lambda^3 u^3 + (1/2) Lambda^2 u^2
    //   cov(s,t) = variance(s) + (1/2) Lambda^3 s^2 (t - s)
    RecursionState st;
    st.stage = 3;
    st.mean_profile = ProfilePoly::term(2, MomentPolynomial::monomial(2, rational(1, 2)));
    st.variance_profile =
        ProfilePoly::term(3, MomentPolynomial::monomial(3, rational(2, 3))) +
        ProfilePoly::term(2, MomentPolynomial::monomial(2, rational(1, 2)));
    st.covariance_profile =
        BiProfilePoly::from_s_poly(st.variance_profile) +
        BiProfilePoly::term(2, 1, MomentPolynomial::monomial(3, rational(1, 2))) +
        BiProfilePoly::term(3, 0, MomentPolynomial::monomial(3, rational(-1, 2)));
    return st;
}

RecursionState RecursionState::advance() const {
    // One more lens: T(q) = Y_q * tau(q) with Y Poisson(Lambda/l),
    // independent of everything at earlier lenses. In the limit:
    //   mean'     = Lambda * int_0^u mean
    //   variance' = Lambda * int_0^u (variance + mean^2)
    //               + 2 Lambda^2 * int_{0<s<t<u} cov
    //   cov'(s,t) = variance'(s) + Lambda^2 * int_0^s dp int_s^t dr cov(p,r)
    const MomentPolynomial lam = MomentPolynomial::monomial(1, 1);
    const MomentPolynomial lam2 = MomentPolynomial::monomial(2, 1);
    const MomentPolynomial lam2_twice = MomentPolynomial::monomial(2, 2);

    RecursionState st;
    st.stage = stage + 1;
    st.mean_profile = mean_profile.integral().scaled(lam);
    ProfilePoly inner = variance_profile;
    inner += mean_profile * mean_profile;
    st.variance_profile = inner.integral().scaled(lam);
    st.variance_profile +=
        covariance_profile.ordered_double_integral().scaled(lam2_twice);
    st.covariance_profile = BiProfilePoly::from_s_poly(st.variance_profile);
    st.covariance_profile += covariance_profile.cross_integral().scaled(lam2);
    return st;
}

bool RecursionState::self_consistent() const {
    return covariance_profile.diagonal() == variance_profile;
}

RecursionMoments recursion_moments(int k) {
    if (k < 3)
        throw UnsupportedK("recursion_moments needs k >= 3 (k = 1, 2 are immediate)");
    RecursionState st = RecursionState::base();
    while (st.stage < k) st = st.advance();
    return {st.mean_profile.at_one(), st.variance_profile.at_one()};
}

}  // namespace geostat
