#include "treemeasure/rational.hpp"

#include "treemeasure/error.hpp"

#include <cmath>
#include <ostream>

namespace treemeasure {

Rational::Rational(const BigInt& numerator, const BigInt& denominator) {
    if (denominator == 0) throw InputError("rational with zero denominator");
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
}

Rational::Rational(const mpq_class& value) : value_(value) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    const std::string s(text);
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s), BigInt(1));
        return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw InputError("malformed rational '" + s + "'");
    }
}

std::string Rational::to_string() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::to_decimal(int digits) const {
    BigInt scale = power(10, static_cast<unsigned long>(digits));
    BigInt num = abs(value_.get_num()) * scale;
    BigInt rounded = (2 * num + value_.get_den()) / (2 * value_.get_den());
    std::string body = rounded.get_str();
    if (digits > 0) {
        if (body.size() <= static_cast<std::size_t>(digits))
            body.insert(0, static_cast<std::size_t>(digits) - body.size() + 1, '0');
        body.insert(body.size() - static_cast<std::size_t>(digits), ".");
    }
    return (sgn(value_) < 0 && rounded != 0 ? "-" : "") + body;
}

Rational& Rational::operator+=(const Rational& other) {
    value_ += other.value_;
    return *this;
}
Rational& Rational::operator-=(const Rational& other) {
    value_ -= other.value_;
    return *this;
}
Rational& Rational::operator*=(const Rational& other) {
    value_ *= other.value_;
    return *this;
}
Rational& Rational::operator/=(const Rational& other) {
    if (other.is_zero()) throw Error("division by zero");
    value_ /= other.value_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

BigInt power(unsigned long base, unsigned long exponent) {
    BigInt result;
    mpz_ui_pow_ui(result.get_mpz_t(), base, exponent);
    return result;
}

Rational rational_approximation(double value, long max_denominator) {
    if (!std::isfinite(value)) throw InputError("cannot approximate a non-finite value");
    mpq_class exact(value);
    // Continued-fraction expansion of the exact binary value.
    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    BigInt num = exact.get_num(), den = exact.get_den();
    while (den != 0) {
        BigInt a = num / den;
        if (sgn(num) < 0 && a * den != num) a -= 1;
        BigInt q2 = q0 + a * q1;
        if (q2 > max_denominator) {
            // Semiconvergent with the largest admissible partial quotient.
            BigInt k = (BigInt(max_denominator) - q0) / q1;
            Rational semi(p0 + k * p1, q0 + k * q1);
            Rational conv(p1, q1);
            mpq_class e1 = abs(semi.raw() - exact), e2 = abs(conv.raw() - exact);
            return e1 < e2 ? semi : conv;
        }
        BigInt p2 = p0 + a * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        BigInt r = num - a * den;
        num = den;
        den = r;
    }
    return Rational(p1, q1);
}

}  // namespace treemeasure
