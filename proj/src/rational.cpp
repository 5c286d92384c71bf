#include "fairmatch/rational.hpp"

#include <charconv>
#include <limits>

namespace fairmatch {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t narrow(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("rational overflow");
    return static_cast<std::int64_t>(v);
}

}  // namespace

Rat Rat::make_reduced(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num == 0) den = 1;
    __int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    Rat r;
    r.num_ = narrow(num);
    r.den_ = narrow(den);
    return r;
}

Rat::Rat(std::int64_t num, std::int64_t den) { *this = make_reduced(num, den); }

Rat Rat::parse(std::string_view text) {
    auto parse_int = [](std::string_view s) -> std::int64_t {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw std::invalid_argument("bad rational literal: '" + std::string(s) + "'");
        return v;
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rat(parse_int(text));
    return Rat(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::string Rat::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

Rat Rat::operator-() const {
    Rat r = *this;
    r.num_ = -r.num_;
    return r;
}

Rat& Rat::operator+=(const Rat& rhs) {
    *this = make_reduced(static_cast<__int128>(num_) * rhs.den_ +
                             static_cast<__int128>(rhs.num_) * den_,
                         static_cast<__int128>(den_) * rhs.den_);
    return *this;
}

Rat& Rat::operator-=(const Rat& rhs) { return *this += -rhs; }

Rat& Rat::operator*=(const Rat& rhs) {
    *this = make_reduced(static_cast<__int128>(num_) * rhs.num_,
                         static_cast<__int128>(den_) * rhs.den_);
    return *this;
}

Rat& Rat::operator/=(const Rat& rhs) {
    if (rhs.num_ == 0) throw std::domain_error("rational division by zero");
    *this = make_reduced(static_cast<__int128>(num_) * rhs.den_,
                         static_cast<__int128>(den_) * rhs.num_);
    return *this;
}

std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace fairmatch
