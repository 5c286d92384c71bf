#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fairmatch {

/// Exact rational number over int64, always kept in canonical form:
/// denominator > 0, gcd(|num|, den) == 1, zero is 0/1.
///
/// All fairness verdicts in this library are threshold comparisons on
/// cumulative values, so arithmetic must be exact. Magnitudes stay tiny
/// (values in [0,1], horizons of a few hundred steps); intermediates are
/// computed in 128 bits and an overflow_error is thrown if a reduced
/// result ever leaves the int64 range.
class Rat {
public:
    constexpr Rat() = default;
    Rat(std::int64_t value) : num_(value), den_(1) {}
    Rat(std::int64_t num, std::int64_t den);

    /// Accepts "p/q" or a bare integer "p".
    static Rat parse(std::string_view text);

    /// Canonical "p/q" spelling, always with an explicit denominator.
    std::string str() const;

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rat operator-() const;
    Rat& operator+=(const Rat& rhs);
    Rat& operator-=(const Rat& rhs);
    Rat& operator*=(const Rat& rhs);
    Rat& operator/=(const Rat& rhs);

    friend Rat operator+(Rat lhs, const Rat& rhs) { return lhs += rhs; }
    friend Rat operator-(Rat lhs, const Rat& rhs) { return lhs -= rhs; }
    friend Rat operator*(Rat lhs, const Rat& rhs) { return lhs *= rhs; }
    friend Rat operator/(Rat lhs, const Rat& rhs) { return lhs /= rhs; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;

    static Rat make_reduced(__int128 num, __int128 den);
};

}  // namespace fairmatch
