#include "modelset/quadratic.hpp"

#include <cmath>
#include <stdexcept>

namespace modelset {

QuadraticNumber::QuadraticNumber(Rational a, Rational b, int d)
    : a_(std::move(a)), b_(std::move(b)), d_(d) {
    if (b_ == 0) d_ = 0;
    if (d_ < 0) throw std::domain_error("quadratic field D must be positive");
}

void QuadraticNumber::merge_field(const QuadraticNumber& o, int& d_out) const {
    if (d_ != 0 && o.d_ != 0 && d_ != o.d_)
        throw std::domain_error("mixing numbers from different quadratic fields");
    d_out = d_ != 0 ? d_ : o.d_;
}

QuadraticNumber QuadraticNumber::conjugate() const { return QuadraticNumber(a_, -b_, d_); }

int QuadraticNumber::sign() const {
    int sa = a_ == 0 ? 0 : (a_ > 0 ? 1 : -1);
    int sb = b_ == 0 ? 0 : (b_ > 0 ? 1 : -1);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: |a| vs |b|*sqrt(D), square both sides.
    Rational lhs = a_ * a_;
    Rational rhs = b_ * b_ * d_;
    if (lhs == rhs) return 0;  // only possible if D were a square; defensive
    return (lhs > rhs) ? sa : sb;
}

QuadraticNumber QuadraticNumber::operator-() const { return QuadraticNumber(-a_, -b_, d_); }

QuadraticNumber QuadraticNumber::operator+(const QuadraticNumber& o) const {
    int d;
    merge_field(o, d);
    return QuadraticNumber(a_ + o.a_, b_ + o.b_, d);
}

QuadraticNumber QuadraticNumber::operator-(const QuadraticNumber& o) const {
    int d;
    merge_field(o, d);
    return QuadraticNumber(a_ - o.a_, b_ - o.b_, d);
}

QuadraticNumber QuadraticNumber::operator*(const QuadraticNumber& o) const {
    int d;
    merge_field(o, d);
    return QuadraticNumber(a_ * o.a_ + Rational(d) * b_ * o.b_, a_ * o.b_ + b_ * o.a_, d);
}

QuadraticNumber QuadraticNumber::operator/(const QuadraticNumber& o) const {
    if (o.is_zero()) throw std::domain_error("division by zero");
    int d;
    merge_field(o, d);
    // x / (a + b sqrtD) = x * (a - b sqrtD) / (a^2 - D b^2)
    Rational norm = o.a_ * o.a_ - Rational(d) * o.b_ * o.b_;
    QuadraticNumber num = *this * o.conjugate();
    return QuadraticNumber(num.a_ / norm, num.b_ / norm, d);
}

BigInt QuadraticNumber::floor() const {
    if (b_ == 0) return floor_rational(a_);
    BigInt m(static_cast<long long>(std::floor(to_double())));
    // to_double is within 1 ulp-ish of the true value; fix up exactly.
    while (*this < QuadraticNumber(Rational(m))) --m;
    while (*this >= QuadraticNumber(Rational(m + 1))) ++m;
    return m;
}

BigInt QuadraticNumber::ceil() const { return -((-*this).floor()); }

double QuadraticNumber::to_double() const {
    double v = modelset::to_double(a_);
    if (b_ != 0) v += modelset::to_double(b_) * std::sqrt(static_cast<double>(d_));
    return v;
}

long double QuadraticNumber::to_long_double() const {
    long double v = modelset::to_long_double(a_);
    if (b_ != 0) v += modelset::to_long_double(b_) * sqrtl(static_cast<long double>(d_));
    return v;
}

std::string QuadraticNumber::to_string() const {
    if (b_ == 0) return rational_to_string(a_);
    std::string radical = rational_to_string(b_) + "*sqrt" + std::to_string(d_);
    if (a_ == 0) return radical;
    return rational_to_string(a_) + (b_ > 0 ? "+" : "") + radical;
}

QuadraticNumber operator*(const Rational& r, const QuadraticNumber& q) {
    return QuadraticNumber(r) * q;
}

}  // namespace modelset
