#include "chancesplit/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace chancesplit {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    }
    return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
    std::string_view digits = s;
    bool negative = false;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
        negative = digits.front() == '-';
        digits.remove_prefix(1);
    }
    if (!all_digits(digits)) {
        throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    }
    mpz_class z(std::string(digits), 10);
    return negative ? mpz_class(-z) : z;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    value_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    value_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero rational");
    value_ /= o.value_;
    return *this;
}

Rational Rational::parse(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty rational");

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const mpz_class num = parse_integer(text.substr(0, slash), text);
        const std::string_view den_text = text.substr(slash + 1);
        if (!all_digits(den_text)) {
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        }
        const mpz_class den(std::string(den_text), 10);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        return Rational(mpq_class(num, den));
    }

    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const std::string_view int_part = text.substr(0, dot);
        const std::string_view frac_part = text.substr(dot + 1);
        if (!frac_part.empty() && !all_digits(frac_part)) {
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        }
        bool negative = !int_part.empty() && int_part.front() == '-';
        std::string_view int_digits = int_part;
        if (!int_digits.empty() && (int_digits.front() == '-' || int_digits.front() == '+')) {
            int_digits.remove_prefix(1);
        }
        if (int_digits.empty() && frac_part.empty()) {
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        }
        if (!int_digits.empty() && !all_digits(int_digits)) {
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        }
        const std::string digits = std::string(int_digits) + std::string(frac_part);
        mpz_class num(digits, 10);
        mpz_class den = 1;
        for (std::size_t k = 0; k < frac_part.size(); ++k) den *= 10;
        if (negative) num = -num;
        return Rational(mpq_class(num, den));
    }

    return Rational(mpq_class(parse_integer(text, text)));
}

std::string Rational::str() const {
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }
const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace chancesplit
