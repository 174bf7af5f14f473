#include "geostat/polynomial.hpp"

#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace geostat {

mpq_class rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

mpq_class rational_from_string(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("rational_from_string: bad literal '" + s + "'");
    q.canonicalize();
    return q;
}

MomentPolynomial MomentPolynomial::constant(const mpq_class& c) {
    return monomial(0, c);
}

MomentPolynomial MomentPolynomial::monomial(unsigned power, const mpq_class& coeff) {
    MomentPolynomial p;
    p.insert(power, coeff);
    return p;
}

void MomentPolynomial::insert(unsigned power, const mpq_class& coeff) {
    if (coeff == 0) return;
    auto [it, fresh] = c_.emplace(power, coeff);
    if (!fresh) {
        it->second += coeff;
        if (it->second == 0) c_.erase(it);
    }
}

mpq_class MomentPolynomial::coeff(unsigned power) const {
    auto it = c_.find(power);
    return it == c_.end() ? mpq_class(0) : it->second;
}

unsigned MomentPolynomial::degree() const {
    return c_.empty() ? 0u : c_.rbegin()->first;
}

MomentPolynomial& MomentPolynomial::operator+=(const MomentPolynomial& o) {
    for (const auto& [p, c] : o.c_) insert(p, c);
    return *this;
}

MomentPolynomial& MomentPolynomial::operator-=(const MomentPolynomial& o) {
    for (const auto& [p, c] : o.c_) insert(p, -c);
    return *this;
}

MomentPolynomial& MomentPolynomial::operator*=(const MomentPolynomial& o) {
    MomentPolynomial out;
    for (const auto& [pa, ca] : c_)
        for (const auto& [pb, cb] : o.c_) out.insert(pa + pb, ca * cb);
    c_ = std::move(out.c_);
    return *this;
}

MomentPolynomial& MomentPolynomial::operator*=(const mpq_class& s) {
    if (s == 0) {
        c_.clear();
        return *this;
    }
    for (auto& [p, c] : c_) c *= s;
    return *this;
}

MomentPolynomial MomentPolynomial::pow(unsigned e) const {
    MomentPolynomial out = constant(1);
    for (unsigned i = 0; i < e; ++i) out *= *this;
    return out;
}

mpq_class MomentPolynomial::evaluate_exact(const mpq_class& x) const {
    // Horner over the sparse map, highest power first
    mpq_class acc = 0;
    unsigned last_power = 0;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        if (first) {
            acc = it->second;
            last_power = it->first;
            first = false;
            continue;
        }
        for (unsigned p = it->first; p < last_power; ++p) acc *= x;
        acc += it->second;
        last_power = it->first;
    }
    if (first) return 0;
    for (unsigned p = 0; p < last_power; ++p) acc *= x;
    return acc;
}

double MomentPolynomial::evaluate(double big_lambda) const {
    return evaluate_exact(mpq_class(big_lambda)).get_d();
}

std::string MomentPolynomial::str(std::string_view symbol) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        mpq_class c = it->second;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        const bool unit = (c == 1);
        if (!unit || it->first == 0) os << c.get_str();
        if (it->first > 0) {
            if (!unit) os << "*";
            os << symbol;
            if (it->first > 1) os << "^" << it->first;
        }
    }
    return os.str();
}

nlohmann::json MomentPolynomial::to_json() const {
    nlohmann::json powers = nlohmann::json::object();
    for (const auto& [p, c] : c_) powers[std::to_string(p)] = c.get_str();
    return nlohmann::json{{"powers", powers}};
}

MomentPolynomial MomentPolynomial::from_json(const nlohmann::json& j) {
    MomentPolynomial out;
    for (const auto& [key, val] : j.at("powers").items())
        out.insert(static_cast<unsigned>(std::stoul(key)),
                   rational_from_string(val.get<std::string>()));
    return out;
}

}  // namespace geostat
