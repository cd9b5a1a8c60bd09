#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robba/fq.hpp"
#include "robba/rational.hpp"

namespace robba {

/// Valuation of a Hahn series. `exact` is false when the series stores no
/// terms but has finite precision: only v >= bound is known then.
struct Valuation {
    ExtRat bound;
    bool exact;
};

/// Truncated Hahn series over F_q with exponents in Z[1/p]: a finite
/// ascending list of (exponent, nonzero coefficient) terms plus a precision
/// cap ("known modulo t^prec"). Values are immutable after construction;
/// all operations return fresh values and never touch their inputs.
///
/// The norm is |x| = p^{-v(x)} with v(t) = 1; valuations and precisions are
/// exact rationals throughout.
class HahnSeries {
public:
    struct Term {
        Rat exp;
        uint16_t coef;
    };

    HahnSeries() = default;
    /// Exact zero (infinite precision).
    static HahnSeries zero(FieldPtr field);
    /// Zero modulo t^prec: nothing stored, finite knowledge.
    static HahnSeries zero_mod(FieldPtr field, const Rat& prec);
    static HahnSeries constant(FieldPtr field, uint16_t c);
    static HahnSeries monomial(FieldPtr field, uint16_t c, const Rat& exp);
    /// From arbitrary (not necessarily sorted/reduced) terms.
    static HahnSeries make(FieldPtr field, std::vector<Term> terms,
                           ExtRat prec = ExtRat::infinity());

    const FieldPtr& field() const { return field_; }
    const std::vector<Term>& terms() const { return terms_; }
    const ExtRat& prec() const { return prec_; }

    bool is_exact() const { return prec_.is_infinite(); }
    /// Provably the zero element.
    bool is_zero() const { return terms_.empty() && prec_.is_infinite(); }
    /// No stored terms; zero if exact, otherwise only known to be O(t^prec).
    bool no_terms() const { return terms_.empty(); }

    Valuation valuation() const;
    /// Coefficient at an exponent (0 if absent among stored terms).
    uint16_t coeff_at(const Rat& exp) const;

    friend HahnSeries operator+(const HahnSeries& a, const HahnSeries& b);
    friend HahnSeries operator-(const HahnSeries& a, const HahnSeries& b);
    friend HahnSeries operator*(const HahnSeries& a, const HahnSeries& b);
    HahnSeries operator-() const;
    HahnSeries scale(uint16_t c) const;

    /// Multiplicative inverse with residual target: a * result = 1 + O(t^target).
    /// Exact when *this is an exact monomial. Requires target <= prec - v(a).
    HahnSeries inverse(const Rat& target) const;

    /// Exponents scaled by p^k, coefficients by the k-fold Frobenius.
    /// k < 0 is the exact inverse automorphism (denominator cap permitting).
    HahnSeries frobenius(long long k) const;

    HahnSeries pow(long long e, const Rat& inv_target = Rat(64)) const;

    /// Same value with precision lowered to new_prec (terms beyond dropped).
    HahnSeries truncated(const ExtRat& new_prec) const;

    /// Drops stored terms with exponent >= cap without touching the
    /// precision: the result represents a different element (the caller
    /// accounts for the dropped part). Sets *dropped when terms were removed.
    HahnSeries drop_from(const Rat& cap, bool* dropped = nullptr) const;

    friend bool operator==(const HahnSeries& a, const HahnSeries& b);

    std::string str() const;

private:
    void normalize();

    FieldPtr field_;
    std::vector<Term> terms_; // ascending exponent, coef != 0, exp < prec_
    ExtRat prec_ = ExtRat::infinity();
};

} // namespace robba
