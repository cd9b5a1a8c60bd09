#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <string>

#include "robba/error.hpp"

namespace robba {

/// Exact rational with int64 numerator/denominator, always normalized
/// (den > 0, gcd = 1). Intermediate products go through __int128 and
/// overflow on narrowing throws rather than wrapping.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}
    Rat(long long num, long long den) : num_(num), den_(den) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return from_i128(n, d);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        __int128 n = (__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return from_i128(n, d);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return from_i128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) fail(ErrorCode::InvalidArgument, "rational division by zero");
        return from_i128((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }
    Rat operator-() const { return Rat(-num_, den_); }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        __int128 l = (__int128)a.num_ * b.den_;
        __int128 r = (__int128)b.num_ * a.den_;
        if (l < r) return std::strong_ordering::less;
        if (l > r) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// Largest integer <= *this.
    long long floor() const {
        long long q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }
    long long ceil() const { return -(-*this).floor(); }

    std::string str() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s;
    }

private:
    static Rat from_i128(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("rational overflow");
        Rat r;
        r.num_ = (long long)n;
        r.den_ = (long long)d;
        return r;
    }
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a;
    }
    void normalize() {
        if (den_ == 0) fail(ErrorCode::InvalidArgument, "zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    long long num_;
    long long den_;
};

/// Rational extended by +infinity. Used for norm exponents, precision caps
/// and valuations; -infinity never occurs (degrees use a separate optional).
class ExtRat {
public:
    ExtRat() : inf_(false), val_() {}
    ExtRat(const Rat& v) : inf_(false), val_(v) {}
    ExtRat(long long v) : inf_(false), val_(v) {}
    static ExtRat infinity() {
        ExtRat e;
        e.inf_ = true;
        return e;
    }

    bool is_infinite() const { return inf_; }
    bool is_finite() const { return !inf_; }
    const Rat& finite() const {
        if (inf_) fail(ErrorCode::InvalidArgument, "infinite value where finite required");
        return val_;
    }

    friend bool operator==(const ExtRat& a, const ExtRat& b) {
        if (a.inf_ || b.inf_) return a.inf_ && b.inf_;
        return a.val_ == b.val_;
    }
    friend std::partial_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
        if (a.inf_ && b.inf_) return std::partial_ordering::equivalent;
        if (a.inf_) return std::partial_ordering::greater;
        if (b.inf_) return std::partial_ordering::less;
        return a.val_ <=> b.val_;
    }

    friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
        if (a.inf_ || b.inf_) return infinity();
        return ExtRat(a.val_ + b.val_);
    }
    friend ExtRat operator+(const ExtRat& a, const Rat& b) { return a + ExtRat(b); }
    /// Scale by a finite nonnegative factor; 0 * inf is rejected.
    friend ExtRat operator*(const Rat& c, const ExtRat& a) {
        if (a.inf_) {
            if (c.is_zero()) fail(ErrorCode::InvalidArgument, "0 * infinity");
            return infinity();
        }
        return ExtRat(c * a.val_);
    }

    friend ExtRat min(const ExtRat& a, const ExtRat& b) { return a <= b ? a : b; }
    friend ExtRat max(const ExtRat& a, const ExtRat& b) { return a >= b ? a : b; }

    std::string str() const { return inf_ ? "inf" : val_.str(); }

private:
    bool inf_;
    Rat val_;
};

} // namespace robba
