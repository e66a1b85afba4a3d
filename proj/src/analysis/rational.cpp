#include "wtown/analysis/rational.hpp"

#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace wtown::analysis {

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    num_ = g ? num / g : 0;
    den_ = g ? den / g : 1;
}

Rational operator+(const Rational& a, const Rational& b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

Rational operator-(const Rational& a, const Rational& b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}

Rational operator*(const Rational& a, const Rational& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) {
        throw std::domain_error("division by zero rational");
    }
    return {a.num_ * b.den_, a.den_ * b.num_};
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return (a.num_ * b.den_) <=> (b.num_ * a.den_);
}

std::string Rational::to_fixed(int decimals) const {
    std::int64_t scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    const bool negative = num_ < 0;
    const std::int64_t n = negative ? -num_ : num_;
    // round(n * scale / den), half away from zero
    const std::int64_t scaled = (2 * n * scale + den_) / (2 * den_);
    const std::int64_t whole = scaled / scale;
    const std::int64_t frac = scaled % scale;
    std::string out = (negative && scaled != 0 ? "-" : "") + std::to_string(whole);
    if (decimals > 0) {
        out += fmt::format(".{:0{}}", frac, decimals);
    }
    return out;
}

}  // namespace wtown::analysis
