#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "modelset/rational.hpp"

namespace modelset {

/// Element a + b*sqrt(D) of the real quadratic field Q(sqrt(D)), D a squarefree
/// positive integer shared across one scheme. Pure rationals carry D = 0 and mix
/// freely with any field. Equality, ordering and sign are exact.
class QuadraticNumber {
public:
    QuadraticNumber() = default;
    QuadraticNumber(Rational a) : a_(std::move(a)) {}
    QuadraticNumber(long long a) : a_(a) {}
    QuadraticNumber(Rational a, Rational b, int d);

    static QuadraticNumber sqrt_d(int d) { return QuadraticNumber(0, 1, d); }

    const Rational& rational_part() const { return a_; }
    const Rational& radical_part() const { return b_; }
    int field_d() const { return d_; }
    bool is_rational() const { return b_ == 0; }

    /// a + b*sqrt(D) -> a - b*sqrt(D). Involution and ring homomorphism.
    QuadraticNumber conjugate() const;

    int sign() const;  // -1, 0, +1, decided exactly
    bool is_zero() const { return a_ == 0 && b_ == 0; }

    QuadraticNumber operator-() const;
    QuadraticNumber operator+(const QuadraticNumber& o) const;
    QuadraticNumber operator-(const QuadraticNumber& o) const;
    QuadraticNumber operator*(const QuadraticNumber& o) const;
    /// Field division; throws std::domain_error on division by zero.
    QuadraticNumber operator/(const QuadraticNumber& o) const;
    QuadraticNumber& operator+=(const QuadraticNumber& o) { return *this = *this + o; }
    QuadraticNumber& operator-=(const QuadraticNumber& o) { return *this = *this - o; }
    QuadraticNumber& operator*=(const QuadraticNumber& o) { return *this = *this * o; }

    bool operator==(const QuadraticNumber& o) const { return (*this - o).is_zero(); }
    bool operator!=(const QuadraticNumber& o) const { return !(*this == o); }
    bool operator<(const QuadraticNumber& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const QuadraticNumber& o) const { return (*this - o).sign() <= 0; }
    bool operator>(const QuadraticNumber& o) const { return (*this - o).sign() > 0; }
    bool operator>=(const QuadraticNumber& o) const { return (*this - o).sign() >= 0; }

    QuadraticNumber abs() const { return sign() < 0 ? -*this : *this; }

    BigInt floor() const;
    BigInt ceil() const;

    double to_double() const;
    long double to_long_double() const;

    std::string to_string() const;  // "a", "b*sqrtD", or "a+b*sqrtD"

private:
    void merge_field(const QuadraticNumber& o, int& d_out) const;

    Rational a_ = 0;
    Rational b_ = 0;
    int d_ = 0;  // 0 == pure rational
};

QuadraticNumber operator*(const Rational& r, const QuadraticNumber& q);

}  // namespace modelset
