#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "robba/error.hpp"
#include "robba/rational.hpp"

namespace robba {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// Coefficient field F_q, q = p^f, in a polynomial basis over F_p with a
/// fixed irreducible modulus per supported (p, f). Elements are encoded as
/// base-p digit strings packed into a uint16 index; arithmetic goes through
/// lookup tables built once at construction.
///
/// The context also owns the t-exponent denominator cap: Hahn-series
/// exponents must have denominator p^j with j <= denom_cap(), and every
/// series operation validates this (CapExceeded, never silent truncation).
class Field {
public:
    /// Interned accessor; instances are immutable and shareable.
    static FieldPtr get(int p, int f = 1, int denom_cap = 8);

    int p() const { return p_; }
    int f() const { return f_; }
    int q() const { return q_; }
    int denom_cap() const { return denom_cap_; }
    /// Modulus coefficients c_0..c_f of the defining polynomial (monic).
    const std::vector<int>& modulus() const { return modulus_; }

    uint16_t zero() const { return 0; }
    uint16_t one() const { return 1; }
    /// The polynomial-basis generator x (only meaningful for f > 1).
    uint16_t gen() const { return f_ > 1 ? (uint16_t)p_ : 1; }
    /// Image of an integer under Z -> F_p c F_q.
    uint16_t from_int(long long n) const {
        long long r = n % p_;
        if (r < 0) r += p_;
        return (uint16_t)r;
    }

    uint16_t add(uint16_t a, uint16_t b) const { return add_[(size_t)a * q_ + b]; }
    uint16_t sub(uint16_t a, uint16_t b) const { return add(a, neg(b)); }
    uint16_t neg(uint16_t a) const { return neg_[a]; }
    uint16_t mul(uint16_t a, uint16_t b) const { return mul_[(size_t)a * q_ + b]; }
    uint16_t inv(uint16_t a) const {
        if (a == 0) fail(ErrorCode::ZeroInput, "inverse of zero in F_q");
        return inv_[a];
    }
    uint16_t pow(uint16_t a, long long e) const;
    /// k-fold Frobenius x -> x^(p^k); any integer k (automorphism of order f).
    uint16_t frobenius(uint16_t a, long long k) const;

    /// Checks that the t-exponent denominator is p^j, j <= denom_cap.
    void check_exponent(const Rat& e) const;

    /// Element rendered in the polynomial basis: "1", "g", "1+g^2", ...
    std::string elem_str(uint16_t a) const;

    bool same(const Field& o) const {
        return p_ == o.p_ && f_ == o.f_ && denom_cap_ == o.denom_cap_;
    }

    Field(int p, int f, int denom_cap); // use get(); public for make_shared

private:
    int p_, f_, q_, denom_cap_;
    std::vector<int> modulus_;
    std::vector<uint16_t> add_, mul_;
    std::vector<uint16_t> neg_, inv_, frob_;
};

/// Throws FieldMismatch unless both operands live in the same field.
inline void require_same_field(const Field& a, const Field& b) {
    if (!a.same(b)) fail(ErrorCode::FieldMismatch, "operands from different coefficient fields");
}

} // namespace robba
