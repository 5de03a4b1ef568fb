#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace planlab::core {

struct division_by_zero : std::domain_error {
    division_by_zero() : std::domain_error("division by zero") {}
    explicit division_by_zero(const std::string& what) : std::domain_error(what) {}
};

// Exact rational on 64-bit components, always normalized (den > 0, gcd == 1).
// Magnitudes stay tiny at the scales this project works at; intermediate
// products go through __int128 before reduction.
class rational {
public:
    rational() = default;
    rational(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
    rational(long long n, long long d) {
        if (d == 0) throw division_by_zero("rational with zero denominator");
        normalize_from(n, d);
    }

    [[nodiscard]] long long num() const { return num_; }
    [[nodiscard]] long long den() const { return den_; }
    [[nodiscard]] bool is_integer() const { return den_ == 1; }
    [[nodiscard]] bool is_zero() const { return num_ == 0; }

    friend rational operator+(const rational& a, const rational& b) {
        return from128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend rational operator-(const rational& a, const rational& b) {
        return from128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend rational operator*(const rational& a, const rational& b) {
        return from128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend rational operator/(const rational& a, const rational& b) {
        if (b.num_ == 0) throw division_by_zero();
        return from128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    rational operator-() const {
        rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend bool operator==(const rational& a, const rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const rational& a, const rational& b) { return !(a == b); }
    friend bool operator<(const rational& a, const rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator<=(const rational& a, const rational& b) { return !(b < a); }
    friend bool operator>(const rational& a, const rational& b) { return b < a; }
    friend bool operator>=(const rational& a, const rational& b) { return !(a < b); }

    // Exact canonical form: "7", "-3/2".
    [[nodiscard]] std::string str() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s;
    }

    // Prompt-style rendering: integers bare, otherwise two decimals rounded
    // half away from zero with trailing zeros stripped ("0.5", "0.67", "-3.67").
    [[nodiscard]] std::string str_rounded2() const {
        if (den_ == 1) return std::to_string(num_);
        i128 t = i128(num_) * 100;
        bool neg = t < 0;
        i128 mag = neg ? -t : t;
        i128 scaled = (2 * mag + den_) / (2 * i128(den_));  // half away from zero
        long long whole = static_cast<long long>(scaled / 100);
        int frac = static_cast<int>(scaled % 100);
        std::string s = neg ? "-" : "";
        s += std::to_string(whole);
        if (frac != 0) {
            if (frac % 10 == 0)
                s += "." + std::to_string(frac / 10);
            else
                s += (frac < 10 ? ".0" : ".") + std::to_string(frac);
        }
        return s;
    }

    static rational parse(const std::string& text);

private:
    using i128 = __int128;

    static rational from128(i128 n, i128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        rational r;
        r.num_ = static_cast<long long>(n);
        r.den_ = static_cast<long long>(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    void normalize_from(long long n, long long d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        num_ = n;
        den_ = d;
    }

    long long num_{0};
    long long den_{1};
};

// Accepts "7", "-3/2" and plain decimals like "0.29" (parsed exactly as 29/100).
inline rational rational::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        long long n = std::stoll(text.substr(0, slash));
        long long d = std::stoll(text.substr(slash + 1));
        return {n, d};
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return {std::stoll(text)};
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 9) throw std::invalid_argument("bad decimal literal: " + text);
    long long den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    bool neg = !whole.empty() && whole[0] == '-';
    long long w = (whole == "-" || whole.empty()) ? 0 : std::stoll(whole);
    long long mag = (w < 0 ? -w : w) * den + std::stoll(frac);
    return {neg ? -mag : mag, den};
}

}  // namespace planlab::core
