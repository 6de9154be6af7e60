#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace chancesplit {

/// Exact rational number in canonical form (reduced, positive denominator).
///
/// Every probability, distance and rationing bound in the library is a
/// Rational; no floating point is used anywhere.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t value) : value_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)
    Rational(std::int64_t num, std::int64_t den);
    explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

    /// Parses "num/den", an integer ("3", "-2") or an exact decimal ("0.35").
    /// Throws std::invalid_argument on malformed text or a zero denominator.
    static Rational parse(std::string_view text);

    /// Canonical "num/den" text, e.g. "3/5", "0/1", "1/1".
    [[nodiscard]] std::string str() const;

    [[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
    [[nodiscard]] mpz_class denominator() const { return value_.get_den(); }
    [[nodiscard]] int sign() const { return sgn(value_); }
    [[nodiscard]] bool is_zero() const { return sign() == 0; }
    [[nodiscard]] const mpq_class& raw() const { return value_; }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    mpq_class value_{0};
};

Rational abs(const Rational& x);
const Rational& min(const Rational& a, const Rational& b);
const Rational& max(const Rational& a, const Rational& b);

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace chancesplit
