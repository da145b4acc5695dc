#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "relalg/error.hpp"

namespace relalg {

/// Exact rational with a positive denominator, always in lowest terms.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit from integer
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
        if (d == 0) throw Error("rational with zero denominator");
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rational operator+(Rational a, Rational b) {
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend Rational operator-(Rational a, Rational b) {
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }
    friend Rational operator*(Rational a, Rational b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(Rational a, Rational b) {
        return a.num_ * b.den_ <=> b.num_ * a.den_;
    }

    /// "p/q", or just "p" for integers.
    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "p", "p/q" or a short decimal "0.25". Throws Error on garbage.
    static Rational parse(std::string_view text);

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        auto g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace relalg
