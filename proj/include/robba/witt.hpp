#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "robba/hahn.hpp"

namespace robba {

/// Closed interval [s, r] of radii, 0 < s <= r (stored as norm exponents:
/// the radius t corresponds to the norm p^{-t}-family member).
struct Interval {
    Rat s;
    Rat r;

    Interval(const Rat& s_, const Rat& r_) : s(s_), r(r_) {
        if (!(Rat(0) < s) || !(s <= r)) fail(ErrorCode::BadInterval, "need 0 < s <= r");
    }
    static Interval point(const Rat& r) { return Interval(r, r); }
    bool contains(const Interval& inner) const { return s <= inner.s && inner.r <= r; }
    bool contains(const Rat& t) const { return s <= t && t <= r; }
};

/// A norm value in log form: the norm is p^{-value}. `value` is computed
/// from the stored terms; `lower_bound` additionally accounts for what the
/// precision caps could hide. The value is exact iff the two agree.
struct NormExponent {
    ExtRat value;
    ExtRat lower_bound;

    bool reliable() const { return value == lower_bound; }
};

/// Element of the Witt-style series rings over L in the characteristic-p
/// model: a finite association of pi-exponents n to Hahn-series coefficients,
/// plus a precision tail. The tail (n0, v0), when present, means the element
/// is known modulo sums of pi^n [c] with n >= n0 and v(c) >= v0; absent tail
/// means exactly represented. Addition is coefficientwise and multiplication
/// is pi-adic convolution (W(R)_E = R tensor E in characteristic p).
class WittSeries {
public:
    struct Tail {
        long long n;
        Rat v;
    };
    /// A point (n, v) contributing the affine exponent n + t*v to norms.
    struct NormPoint {
        long long n;
        Rat v;
    };

    WittSeries() = default;
    static WittSeries zero(FieldPtr field);
    static WittSeries from_coeffs(FieldPtr field, std::map<long long, HahnSeries> coeffs,
                                  std::optional<Tail> tail = std::nullopt);
    /// Teichmuller lift [x] at pi-exponent 0 (a ring map in characteristic p).
    static WittSeries teichmuller(const HahnSeries& x);
    static WittSeries pi_power(FieldPtr field, long long n);
    static WittSeries one(FieldPtr field);

    const FieldPtr& field() const { return field_; }
    const std::map<long long, HahnSeries>& coeffs() const { return coeffs_; }
    const std::optional<Tail>& tail() const { return tail_; }

    bool is_zero() const { return coeffs_.empty() && !tail_; }
    /// No definite content: every stored coefficient is a possibly-zero
    /// precision marker (or nothing is stored at all).
    bool no_terms() const {
        for (const auto& [n, c] : coeffs_)
            if (!c.no_terms()) return false;
        return true;
    }
    bool is_exact() const;
    /// Least stored pi-exponent; requires stored terms.
    long long n_min() const;
    /// True when every stored index is >= 0 (the A^r subring role).
    bool integral_role() const;
    /// Tail index bound (prec_pi in the serialization); +inf when exact.
    ExtRat pi_prec() const;
    const HahnSeries* coeff_at(long long n) const;

    friend WittSeries operator+(const WittSeries& a, const WittSeries& b);
    friend WittSeries operator-(const WittSeries& a, const WittSeries& b);
    friend WittSeries operator*(const WittSeries& a, const WittSeries& b);
    WittSeries operator-() const;
    /// Multiply by pi^k (index shift).
    WittSeries shift(long long k) const;
    /// Multiply by the Teichmuller lift of h (coefficientwise Hahn product).
    WittSeries scale(const HahnSeries& h) const;

    friend bool operator==(const WittSeries& a, const WittSeries& b);

    /// Definite norm points (n, v(x_n)) of the stored nonempty coefficients.
    std::vector<NormPoint> norm_points() const;
    /// Lower-bound generators for what precision could hide: possibly-zero
    /// coefficients contribute (n, prec) and the tail contributes (n0, v0).
    std::vector<NormPoint> hidden_bounds() const;

    /// Gauss norm exponent at radius t >= 0; the t = 0 convention (0^t = 0)
    /// makes this the pi-adic absolute value.
    NormExponent gauss_norm(const Rat& t) const;
    /// lambda_I = max(lambda_s, lambda_r), i.e. min of the endpoint exponents.
    NormExponent interval_norm(const Interval& I) const;

    /// Drop material provably below the floor: each coefficient is truncated
    /// where its contribution to the t-exponent (any t in I) reaches `floor`.
    /// Sound: dropped content moves into the precision caps, never lost
    /// silently. Returns whether anything was dropped.
    WittSeries clipped(const Interval& I, const ExtRat& floor, bool* dropped = nullptr) const;

    std::string str() const;

private:
    void normalize();

    FieldPtr field_;
    std::map<long long, HahnSeries> coeffs_; // no exact-zero coefficients
    std::optional<Tail> tail_;
};

/// Interval restriction map B^I -> B^I' (identity on representations);
/// throws BadInterval unless I' is contained in I.
WittSeries restrict_interval(const WittSeries& x, const Interval& I, const Interval& inner);

} // namespace robba
