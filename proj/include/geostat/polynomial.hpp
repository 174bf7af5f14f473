#pragma once

#include <map>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <nlohmann/json_fwd.hpp>

namespace geostat {

/// Canonical rational from a numerator/denominator pair.
mpq_class rational(long num, long den = 1);
mpq_class rational_from_string(const std::string& s);

/// Polynomial in the lens intensity Lambda with exact rational
/// coefficients. This is the output format of every symbolic moment
/// engine; floating point enters only at evaluation.
class MomentPolynomial {
  public:
    using Coeffs = std::map<unsigned, mpq_class>;

    MomentPolynomial() = default;
    static MomentPolynomial constant(const mpq_class& c);
    static MomentPolynomial monomial(unsigned power, const mpq_class& coeff);

    const Coeffs& coefficients() const { return c_; }
    mpq_class coeff(unsigned power) const;
    unsigned degree() const;  // 0 for the zero polynomial
    bool is_zero() const { return c_.empty(); }

    MomentPolynomial& operator+=(const MomentPolynomial& o);
    MomentPolynomial& operator-=(const MomentPolynomial& o);
    MomentPolynomial& operator*=(const MomentPolynomial& o);
    MomentPolynomial& operator*=(const mpq_class& s);
    friend MomentPolynomial operator+(MomentPolynomial a, const MomentPolynomial& b) { return a += b; }
    friend MomentPolynomial operator-(MomentPolynomial a, const MomentPolynomial& b) { return a -= b; }
    friend MomentPolynomial operator*(MomentPolynomial a, const MomentPolynomial& b) { return a *= b; }
    friend MomentPolynomial operator*(MomentPolynomial a, const mpq_class& s) { return a *= s; }
    MomentPolynomial pow(unsigned e) const;

    bool operator==(const MomentPolynomial& o) const { return c_ == o.c_; }

    mpq_class evaluate_exact(const mpq_class& big_lambda) const;
    /// Exact rational evaluation at the (exactly represented) double,
    /// rounded once at the end.
    double evaluate(double big_lambda) const;

    std::string str(std::string_view symbol = "Lambda") const;

    /// {"powers": {"3": "2/3", "2": "1/2"}}
    nlohmann::json to_json() const;
    static MomentPolynomial from_json(const nlohmann::json& j);

  private:
    void insert(unsigned power, const mpq_class& coeff);
    Coeffs c_;  // no zero coefficients stored
};

}  // namespace geostat
