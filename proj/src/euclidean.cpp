#include "robba/euclidean.hpp"

#include <algorithm>

namespace robba {

namespace {

void poll_cancel(const DivOptions& opts) {
    if (opts.cancel && opts.cancel->load()) fail(ErrorCode::Cancelled, "division cancelled");
}

void require_divisor(const WittSeries& x) {
    if (x.is_zero()) fail(ErrorCode::ZeroDivisor, "division by zero");
    if (x.no_terms())
        fail(ErrorCode::PrecisionExhausted, "divisor is zero within precision");
    if (!x.integral_role())
        fail(ErrorCode::InvalidArgument, "divisor must have nonnegative pi-exponents");
}

// Inverse with the target clamped to what the precision supports.
HahnSeries clamped_inverse(const HahnSeries& c, Rat target) {
    if (c.prec().is_finite())
        target = std::min(target, c.prec().finite() - c.valuation().bound.finite());
    return c.inverse(target);
}

// Shared per-division divisor data.
struct DivisorData {
    long long m;          // degree at r
    ExtRat e_x;           // lambda_r exponent
    ExtRat gap;           // certified eps in log form (inf when no tail above m)
    HahnSeries lead_inv;  // 1 / x_m to working precision
};

DivisorData prepare_divisor(const WittSeries& x, const Rat& r, const DivOptions& opts) {
    DivisorData d;
    auto deg = degree(x, r);
    d.m = *deg; // non-null: x has stored terms
    d.e_x = x.gauss_norm(r).value;
    d.gap = ExtRat::infinity();
    for (const auto& p : x.norm_points())
        if (p.n > d.m) d.gap = min(d.gap, ExtRat(Rat(p.n) + r * p.v) + (-d.e_x.finite()));
    for (const auto& p : x.hidden_bounds())
        d.gap = min(d.gap, ExtRat(Rat(p.n) + r * p.v) + (-d.e_x.finite()));
    // The inverse target cannot exceed what the coefficient's precision
    // supports; a shallower target just lowers the junk ceiling.
    d.lead_inv = clamped_inverse(*x.coeff_at(d.m), opts.work_prec);
    return d;
}

// The inner iteration of the controlled step: repeatedly peel the part of
// cur at indices >= m with the shift-quotient until the degree drops below m
// or the norm falls by the certified factor. The largest index carrying a
// term above the eps level strictly decreases each pass; that is the
// termination certificate and is asserted.
StepResult divide_step_core(const WittSeries& y, const WittSeries& x, const Rat& r,
                            const DivisorData& dd, const DivOptions& opts) {
    WittSeries z = WittSeries::zero(y.field());
    WittSeries cur = y;
    if (cur.no_terms()) return {z, cur, dd.gap};

    const ExtRat e_y = cur.gauss_norm(r).value;
    const ExtRat threshold = e_y + dd.gap; // exponent level of eps * lambda_r(y)
    long long n_cert = 0;
    bool have_cert = false;
    long long iters = 0;

    while (true) {
        poll_cancel(opts);
        if (++iters > opts.max_iterations)
            fail(ErrorCode::PrecisionExhausted, "division step iteration budget exhausted");
        if (cur.no_terms()) break;
        NormExponent ne = cur.gauss_norm(r);
        if (!ne.reliable()) break; // remainder sank below precision; caller decides
        std::optional<long long> d_cur;
        try {
            d_cur = degree(cur, r);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::PrecisionExhausted) throw;
            break;
        }
        if (*d_cur < dd.m) break;
        ExtRat e_cur = ne.value;
        if (e_cur >= threshold) break;

        long long n_now = 0;
        bool found = false;
        for (const auto& p : cur.norm_points())
            if (ExtRat(Rat(p.n) + r * p.v) < threshold && (!found || p.n > n_now)) {
                n_now = p.n;
                found = true;
            }
        if (have_cert && n_now >= n_cert)
            fail(ErrorCode::PrecisionExhausted, "termination certificate failed to decrease");
        n_cert = n_now;
        have_cert = true;

        std::map<long long, HahnSeries> zc;
        for (const auto& [k, c] : cur.coeffs())
            if (k >= dd.m && !c.no_terms()) zc.emplace(k - dd.m, c * dd.lead_inv);
        WittSeries zl = WittSeries::from_coeffs(y.field(), std::move(zc));
        if (zl.no_terms()) break; // everything at or above m is below precision
        z = z + zl;
        cur = cur - zl * x;
    }
    return {z, cur, dd.gap};
}

} // namespace

StepResult divide_step(const WittSeries& y, const WittSeries& x, const Rat& r,
                       const DivOptions& opts) {
    require_divisor(x);
    if (!y.integral_role())
        fail(ErrorCode::InvalidArgument, "dividend must have nonnegative pi-exponents");
    DivisorData dd = prepare_divisor(x, r, opts);
    return divide_step_core(y, x, r, dd, opts);
}

DivisionResult divide(const WittSeries& y, const WittSeries& x, const Rat& r,
                      const Rat& stop_exponent, const DivOptions& opts) {
    require_divisor(x);
    if (!y.integral_role())
        fail(ErrorCode::InvalidArgument, "dividend must have nonnegative pi-exponents");

    DivisionResult res;
    res.quotient = WittSeries::zero(y.field());
    res.remainder = WittSeries::zero(y.field());
    res.residual_exponent = ExtRat::infinity();
    res.eps_gap = ExtRat::infinity();
    if (y.is_zero()) {
        res.status = DivStatus::Exact;
        return res;
    }

    DivisorData dd;
    try {
        dd = prepare_divisor(x, r, opts);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::PrecisionExhausted) throw;
        res.remainder = y;
        res.status = DivStatus::PrecisionExhausted;
        return res;
    }
    res.eps_gap = dd.gap;

    const Interval I = Interval::point(r);
    const ExtRat floor(stop_exponent);
    bool dropped = false;
    WittSeries cur = y.clipped(I, floor, &dropped);
    if (dropped) res.residual_exponent = floor;

    long long rounds = 0;
    while (true) {
        poll_cancel(opts);
        if (++rounds > opts.max_iterations) {
            res.status = DivStatus::PrecisionExhausted;
            res.remainder = cur;
            res.rounds = rounds;
            return res;
        }
        if (cur.no_terms()) {
            // Remainder is zero up to precision; fold its hidden content into
            // the residual bound.
            ExtRat hidden = ExtRat::infinity();
            for (const auto& p : cur.hidden_bounds())
                hidden = min(hidden, ExtRat(Rat(p.n) + r * p.v));
            res.residual_exponent = min(res.residual_exponent, hidden);
            res.status = cur.is_zero() && res.residual_exponent.is_infinite()
                             ? DivStatus::Exact
                             : DivStatus::Converged;
            res.rounds = rounds;
            return res;
        }
        std::optional<long long> d_cur;
        try {
            d_cur = degree(cur, r);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::PrecisionExhausted) throw;
            res.status = DivStatus::PrecisionExhausted;
            res.remainder = cur;
            res.rounds = rounds;
            return res;
        }
        if (*d_cur < dd.m) {
            res.remainder = cur;
            res.status = DivStatus::Exact;
            res.rounds = rounds;
            return res;
        }
        ExtRat e_cur = cur.gauss_norm(r).value;
        if (e_cur >= floor) {
            // Entirely below the stop level; treat as converged-to-zero.
            res.residual_exponent = min(res.residual_exponent, e_cur);
            res.remainder = WittSeries::zero(y.field());
            res.status = DivStatus::Converged;
            res.rounds = rounds;
            return res;
        }

        StepResult step;
        try {
            step = divide_step_core(cur, x, r, dd, opts);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::PrecisionExhausted) throw;
            res.status = DivStatus::PrecisionExhausted;
            res.remainder = cur;
            res.rounds = rounds;
            return res;
        }
        res.quotient = res.quotient + step.quotient;
        bool drop2 = false;
        WittSeries next = step.remainder.clipped(I, floor, &drop2);
        if (drop2) res.residual_exponent = min(res.residual_exponent, floor);
        if (step.quotient.no_terms() && next == cur) {
            res.status = DivStatus::PrecisionExhausted;
            res.remainder = cur;
            res.rounds = rounds;
            return res;
        }
        cur = next;
    }
}

GcdResult gcd_bezout(const WittSeries& x, const WittSeries& y, const Rat& r,
                     const Rat& stop_exponent, const DivOptions& opts) {
    if (x.is_zero() && y.is_zero()) fail(ErrorCode::ZeroInput, "gcd of two zeros");
    if ((x.no_terms() && !x.is_zero()) || (y.no_terms() && !y.is_zero()))
        fail(ErrorCode::PrecisionExhausted, "gcd input is zero within precision");
    if (!x.integral_role() || !y.integral_role())
        fail(ErrorCode::InvalidArgument, "gcd inputs must have nonnegative pi-exponents");

    const FieldPtr field = x.field();
    const Rat istop = stop_exponent + Rat(32);

    WittSeries r0 = x, r1 = y;
    WittSeries a0 = WittSeries::one(field), b0 = WittSeries::zero(field);
    WittSeries a1 = WittSeries::zero(field), b1 = WittSeries::one(field);
    if (r0.no_terms() || (!r1.no_terms() && degree(r0, r) < degree(r1, r))) {
        std::swap(r0, r1);
        std::swap(a0, a1);
        std::swap(b0, b1);
    }

    while (!r1.no_terms()) {
        poll_cancel(opts);
        DivisionResult div = divide(r0, r1, r, istop, opts);
        if (div.status == DivStatus::PrecisionExhausted)
            fail(ErrorCode::PrecisionExhausted, "gcd division lost precision");
        WittSeries a2 = a0 - div.quotient * a1;
        WittSeries b2 = b0 - div.quotient * b1;
        r0 = r1;
        a0 = a1;
        b0 = b1;
        r1 = div.remainder;
        a1 = a2;
        b1 = b2;
    }

    // Normalize: make the degree-attaining coefficient 1.
    long long mg = *degree(r0, r);
    HahnSeries u = clamped_inverse(*r0.coeff_at(mg), opts.work_prec);
    GcdResult res;
    res.g = r0.scale(u);
    res.a = a0.scale(u);
    res.b = b0.scale(u);

    WittSeries diff = res.a * x + res.b * y - res.g;
    ExtRat bound = diff.gauss_norm(r).lower_bound;
    if (bound < ExtRat(stop_exponent))
        fail(ErrorCode::PrecisionExhausted, "Bezout residual above tolerance");
    res.bezout_residual = bound;

    for (const WittSeries* input : {&x, &y}) {
        if (input->is_zero()) continue;
        DivisionResult check = divide(*input, res.g, r, stop_exponent, opts);
        if (check.status == DivStatus::PrecisionExhausted || !check.remainder.no_terms())
            fail(ErrorCode::PrecisionExhausted, "gcd does not divide an input to tolerance");
    }
    return res;
}

WittSeries invert_unit(const WittSeries& x, const Interval& I, const Rat& target_exponent,
                       const DivOptions& opts) {
    if (x.is_zero()) fail(ErrorCode::ZeroInput, "inverse of zero");
    if (x.no_terms()) fail(ErrorCode::PrecisionExhausted, "inverse of a possibly-zero element");
    if (degree_over(x, I) > 0) fail(ErrorCode::NotAUnit, "element has positive degree over I");

    // Degree 0 over the closed interval means a single index minimizes the
    // exponent at both endpoints (a slope at an endpoint would be in I).
    auto argmin = [&](const Rat& t) {
        ExtRat best = ExtRat::infinity();
        long long arg = 0;
        for (const auto& p : x.norm_points()) {
            ExtRat e(Rat(p.n) + t * p.v);
            if (e < best) {
                best = e;
                arg = p.n;
            }
        }
        return arg;
    };
    long long n0 = argmin(I.s);
    if (n0 != argmin(I.r))
        fail(ErrorCode::PrecisionExhausted, "dominant term not identifiable over I");

    const HahnSeries& c = *x.coeff_at(n0);
    Rat vc = c.valuation().bound.finite();
    // Precision of the scalar inverse: its cap must sit above the target at
    // every radius in I once multiplied back.
    Rat hahn_target =
        (target_exponent + Rat(8)) / std::min(I.s, Rat(1)) + std::max(vc, -vc) + Rat(8);
    HahnSeries cinv = clamped_inverse(c, hahn_target);

    WittSeries norm_x = (x.shift(-n0)).scale(cinv); // 1 + u with lambda_I(u) < 1
    WittSeries u = norm_x - WittSeries::one(x.field());
    ExtRat gamma = u.interval_norm(I).lower_bound;
    if (!(gamma > ExtRat(Rat(0))))
        fail(ErrorCode::PrecisionExhausted, "dominant term not separated within precision");

    const ExtRat floor(target_exponent + Rat(2));
    WittSeries acc = WittSeries::one(x.field());
    WittSeries power = WittSeries::one(x.field());
    long long iters = 0;
    while (true) {
        poll_cancel(opts);
        if (++iters > opts.max_iterations)
            fail(ErrorCode::PrecisionExhausted, "inversion iteration budget exhausted");
        power = (power * (-u)).clipped(I, floor);
        if (power.no_terms() || power.interval_norm(I).lower_bound >= ExtRat(target_exponent))
            break;
        acc = acc + power;
    }
    WittSeries inv = acc.shift(-n0).scale(cinv);

    WittSeries residual = x * inv - WittSeries::one(x.field());
    if (residual.interval_norm(I).lower_bound < ExtRat(target_exponent))
        fail(ErrorCode::PrecisionExhausted, "inverse residual above tolerance");
    return inv;
}

} // namespace robba
