#pragma once

#include <map>
#include <utility>

#include "geostat/polynomial.hpp"

namespace geostat {

/// Polynomial in the normalized lens position u in [0,1], coefficients in
/// Q[Lambda]. The stage-n cumulative moments of the lens-splitting scheme
/// become clean polynomials in u once the cell count l tends to infinity
/// (sums over cell indices turn into integrals of these profiles).
class ProfilePoly {
  public:
    using Terms = std::map<int, MomentPolynomial>;

    ProfilePoly() = default;
    static ProfilePoly term(int u_power, MomentPolynomial coeff);

    const Terms& terms() const { return t_; }
    bool operator==(const ProfilePoly&) const = default;

    ProfilePoly& operator+=(const ProfilePoly& o);
    friend ProfilePoly operator+(ProfilePoly a, const ProfilePoly& b) { return a += b; }
    ProfilePoly operator*(const ProfilePoly& o) const;
    ProfilePoly scaled(const MomentPolynomial& s) const;

    /// integral from 0 to u
    ProfilePoly integral() const;

    /// value at u = 1: the full-lens (stage) moment
    MomentPolynomial at_one() const;

  private:
    void insert(int p, const MomentPolynomial& c);
    Terms t_;
};

/// Bivariate profile in the ordered pair (s, t), s <= t, used for the
/// covariance structure Cov(tau(s), tau(t)).
class BiProfilePoly {
  public:
    using Terms = std::map<std::pair<int, int>, MomentPolynomial>;

    BiProfilePoly() = default;
    static BiProfilePoly term(int s_power, int t_power, MomentPolynomial coeff);
    static BiProfilePoly from_s_poly(const ProfilePoly& f);  // f(s)

    const Terms& terms() const { return t_; }
    bool operator==(const BiProfilePoly&) const = default;

    BiProfilePoly& operator+=(const BiProfilePoly& o);
    friend BiProfilePoly operator+(BiProfilePoly a, const BiProfilePoly& b) { return a += b; }
    BiProfilePoly scaled(const MomentPolynomial& s) const;

    /// integral over {0 < s < t < u}, as a profile in u
    ProfilePoly ordered_double_integral() const;

    /// integral over p in (0,s), r in (s,t) of C(p,r), still in (s,t)
    BiProfilePoly cross_integral() const;

    /// restriction to t = s
    ProfilePoly diagonal() const;

  private:
    void insert(int ps, int pt, const MomentPolynomial& c);
    Terms t_;
};

/// Moment profiles of the running sums tau^{(n)} over the first n-1
/// lenses, advanced one lens at a time. Evaluating a profile at u = 1
/// gives the stage-n moment; at stage k that is the moment of sigma_k.
struct RecursionState {
    int stage = 3;
    ProfilePoly mean_profile;
    ProfilePoly variance_profile;
    BiProfilePoly covariance_profile;

    /// Stage-3 profiles, straight from the Poisson moment identities for
    /// the two-lens sum.
    static RecursionState base();

    RecursionState advance() const;

    /// The covariance profile restricted to t = s must reproduce the
    /// variance profile at every stage.
    bool self_consistent() const;
};

struct RecursionMoments {
    MomentPolynomial mean;
    MomentPolynomial variance;
};

/// Exact mean and variance of sigma_k for k >= 3 by the lens-splitting
/// recursion. Cost grows polynomially in k; intended budget is k <= 8.
RecursionMoments recursion_moments(int k);

}  // namespace geostat
