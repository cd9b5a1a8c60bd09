#include "robba/points.hpp"

#include <algorithm>

namespace robba {

WittSeries FactoredElement::expand() const {
    WittSeries acc = WittSeries::teichmuller(unit_scalar).shift(pi_power);
    for (const auto& f : factors) acc = acc * f.element();
    return acc;
}

namespace {

using Poly = std::vector<HahnSeries>; // dense in the pi-placeholder variable

HahnSeries poly_eval(const Poly& P, const HahnSeries& u) {
    HahnSeries acc = HahnSeries::zero(u.field());
    for (size_t k = P.size(); k-- > 0;) acc = acc * u + P[k];
    return acc;
}

Poly poly_derivative(const Poly& P, const Field& field) {
    Poly D;
    for (size_t k = 1; k < P.size(); ++k) D.push_back(P[k].scale(field.from_int((long long)k)));
    while (!D.empty() && D.back().is_zero()) D.pop_back();
    return D;
}

// The iterate is ours to choose, so small terms are discarded outright
// (exact value, unchanged precision) rather than via the precision cap.
HahnSeries keep_below(const HahnSeries& h, const Rat& cutoff) {
    std::vector<HahnSeries::Term> terms;
    for (const auto& t : h.terms())
        if (t.exp < cutoff) terms.push_back(t);
    return HahnSeries::make(h.field(), std::move(terms), h.prec());
}

// Newton iteration toward the root with initial term u0; progress in the
// residual valuation is asserted each step. Exact roots come back exact.
HahnSeries newton_lift(const Poly& P, const Poly& D, const HahnSeries& u0, const Rat& v_target,
                       long long max_iters, const Rat& work_prec) {
    HahnSeries u = u0;
    ExtRat last_res = ExtRat(Rat(-100000));
    for (long long it = 0; it < max_iters; ++it) {
        HahnSeries e = poly_eval(P, u);
        if (e.is_zero()) return u;
        Valuation ve = e.valuation();
        HahnSeries d = poly_eval(D, u);
        if (d.no_terms())
            fail(ErrorCode::PrecisionExhausted, "derivative vanishes within precision");
        Rat vd = d.valuation().bound.finite();
        if (ve.bound >= ExtRat(v_target + vd)) return u.truncated(ExtRat(v_target));
        if (!(ve.bound > last_res))
            fail(ErrorCode::PrecisionExhausted, "Newton iteration stalled");
        last_res = ve.bound;
        HahnSeries delta = e * d.inverse(work_prec);
        u = keep_below(u - delta, v_target);
    }
    fail(ErrorCode::PrecisionExhausted, "Newton iteration budget exhausted");
}

struct RootCluster {
    HahnSeries root;
    long long mult;
};

struct HullPoint {
    long long k;
    Rat v;
};

// Descending lower hull of (k, v(P_k)); segments carry root valuations.
std::vector<HullPoint> poly_hull(const Poly& P) {
    std::vector<HullPoint> pts;
    for (size_t k = 0; k < P.size(); ++k) {
        if (P[k].no_terms()) continue;
        pts.push_back({(long long)k, P[k].valuation().bound.finite()});
    }
    std::vector<HullPoint> hull;
    for (const auto& p : pts) {
        if (!hull.empty() && p.v >= hull.back().v) continue;
        auto vslope = [](const HullPoint& a, const HullPoint& b) {
            return (a.v - b.v) / Rat(b.k - a.k);
        };
        while (hull.size() >= 2 && vslope(hull[hull.size() - 2], hull.back()) <= vslope(hull.back(), p))
            hull.pop_back();
        hull.push_back(p);
    }
    return hull;
}

bool valuation_in_field(const Field& field, const Rat& V) {
    long long den = V.den();
    int j = 0;
    while (den % field.p() == 0) {
        den /= field.p();
        ++j;
    }
    return den == 1 && j <= field.denom_cap();
}

// All roots in L with valuation strictly above v_min (no constraint when
// v_min is absent), as clusters (root, multiplicity). Roots closer together
// than v_stop are reported as one cluster; the caller's expansion check
// keeps that honest. Throws NeedsFieldExtension when roots escape L.
std::vector<RootCluster> poly_roots(const Poly& P, std::optional<Rat> v_min, const Rat& v_stop,
                                    const FactorOptions& opts, int depth) {
    if (depth > 64) fail(ErrorCode::PrecisionExhausted, "root recursion too deep");
    const FieldPtr field = P.front().field();
    // Coefficient inversions must stay ahead of the lift target.
    const Rat work = std::max(opts.work_prec, v_stop + Rat(32));
    std::vector<RootCluster> out;

    // Pure p-th powers: P(Z) = Q(Z^p); roots are inverse-Frobenius images.
    bool pure = P.size() > (size_t)field->p();
    for (size_t k = 0; k < P.size() && pure; ++k)
        if (!P[k].no_terms() && k % field->p() != 0) pure = false;
    if (pure) {
        Poly Q;
        for (size_t k = 0; k < P.size(); k += field->p()) Q.push_back(P[k]);
        std::optional<Rat> inner_min;
        if (v_min) inner_min = *v_min * Rat(field->p());
        auto sub = poly_roots(Q, inner_min, v_stop * Rat(field->p()), opts, depth + 1);
        for (const auto& rc : sub)
            out.push_back({rc.root.frobenius(-1), rc.mult * field->p()});
        return out;
    }

    std::vector<HullPoint> hull = poly_hull(P);
    for (size_t s = 0; s + 1 < hull.size(); ++s) {
        const HullPoint &A = hull[s], &B = hull[s + 1];
        Rat V = (A.v - B.v) / Rat(B.k - A.k);
        if (v_min && !(V > *v_min)) continue;
        if (!(V > Rat(0))) continue;
        long long seg_mult = B.k - A.k;
        if (!valuation_in_field(*field, V))
            fail(ErrorCode::NeedsFieldExtension,
                 "root valuation " + V.str() + " requires a ramified extension");

        // Residue polynomial from the on-line coefficients.
        std::vector<uint16_t> R((size_t)seg_mult + 1, 0);
        for (long long k = A.k; k <= B.k; ++k) {
            const HahnSeries& c = P[(size_t)k];
            if (c.no_terms()) continue;
            Rat vline = A.v - V * Rat(k - A.k);
            R[(size_t)(k - A.k)] = c.coeff_at(vline);
        }

        long long found = 0;
        for (int c = 1; c < field->q(); ++c) {
            // Multiplicity of c as a root of R by repeated deflation.
            std::vector<uint16_t> rr = R;
            long long mu = 0;
            for (size_t deg = rr.size() - 1; deg >= 1; --deg) {
                uint16_t val = 0;
                for (size_t k = rr.size(); k-- > 0;)
                    val = field->add(field->mul(val, (uint16_t)c), rr[k]);
                if (val != 0) break;
                std::vector<uint16_t> q(deg, 0);
                uint16_t carry = 0;
                for (size_t k = deg; k >= 1; --k) {
                    carry = field->add(rr[k], field->mul(carry, (uint16_t)c));
                    q[k - 1] = carry;
                }
                rr = std::move(q);
                ++mu;
            }
            if (mu == 0) continue;
            found += mu;
            HahnSeries u0 = HahnSeries::monomial(field, (uint16_t)c, V);
            if (mu == 1) {
                Poly D = poly_derivative(P, *field);
                out.push_back({newton_lift(P, D, u0, v_stop, opts.max_iterations, work), 1});
                continue;
            }
            if (V >= v_stop) {
                out.push_back({u0, mu}); // indistinguishable within the target
                continue;
            }
            // Shift to the cluster and recurse on the strictly closer roots.
            // Q(W) = P(u0 + W), binomial coefficients mod p via Pascal rows.
            Poly Q(P.size(), HahnSeries::zero(field));
            {
                std::vector<HahnSeries> upow(P.size(), HahnSeries::constant(field, 1));
                for (size_t k = 1; k < P.size(); ++k) upow[k] = upow[k - 1] * u0;
                for (size_t k = 0; k < P.size(); ++k) {
                    if (P[k].is_zero()) continue;
                    std::vector<uint16_t> row(k + 1, 0);
                    row[0] = 1;
                    for (size_t i = 1; i <= k; ++i)
                        for (size_t j = i; j >= 1; --j) row[j] = field->add(row[j], row[j - 1]);
                    for (size_t j = 0; j <= k; ++j) {
                        if (row[j] == 0) continue;
                        Q[j] = Q[j] + P[k].scale(row[j]) * upow[k - j];
                    }
                }
            }
            long long exact = 0;
            while (exact < mu && Q[(size_t)exact].is_zero()) ++exact;
            if (exact > 0) out.push_back({u0, exact});
            if (exact < mu) {
                Poly Qs(Q.begin() + exact, Q.end());
                auto sub = poly_roots(Qs, V, v_stop, opts, depth + 1);
                long long got = 0;
                for (const auto& rc : sub) {
                    out.push_back({u0 + rc.root, rc.mult});
                    got += rc.mult;
                }
                if (got != mu - exact)
                    fail(ErrorCode::NeedsFieldExtension, "cluster roots escape the base field");
            }
        }
        if (found != seg_mult)
            fail(ErrorCode::NeedsFieldExtension, "residue equation has no root in F_q");
    }
    return out;
}

} // namespace

PrimitiveDeg1 primitive_check(const WittSeries& z, const Rat& work_prec) {
    if (z.is_zero()) fail(ErrorCode::NotPrimitive, "zero element");
    if (z.no_terms()) fail(ErrorCode::PrecisionExhausted, "element is zero within precision");
    if (!z.integral_role()) fail(ErrorCode::NotPrimitive, "negative pi-exponent present");
    for (const auto& [n, c] : z.coeffs()) {
        if (c.no_terms()) continue;
        if (c.valuation().bound < ExtRat(Rat(0)))
            fail(ErrorCode::NotPrimitive, "coefficient outside the valuation ring");
    }
    const HahnSeries* c0 = z.coeff_at(0);
    if (!c0 || c0->no_terms())
        fail(ErrorCode::NotPrimitive, "constant coefficient not in m_L \\ {0}");
    Rat v0 = c0->valuation().bound.finite();
    if (!(v0 > Rat(0))) fail(ErrorCode::NotPrimitive, "constant coefficient not in m_L");
    const HahnSeries* c1 = z.coeff_at(1);
    if (!c1 || c1->no_terms() || !(c1->valuation().bound == ExtRat(Rat(0))))
        fail(ErrorCode::NotPrimitive, "pi-coefficient is not a unit");

    PrimitiveDeg1 prim;
    prim.slope = Rat(1) / v0;

    // Monic fast path: exactly pi - [u].
    bool monic = z.coeffs().size() == 2 && !z.tail() && c1->terms().size() == 1 &&
                 c1->terms()[0].coef == 1 && c1->terms()[0].exp.is_zero() && c1->is_exact() &&
                 c0->is_exact();
    if (monic) {
        prim.u_bar = -*c0;
        return prim;
    }
    if (z.tail())
        fail(ErrorCode::NotMonicShape, "inexact pi-precision prevents unit normalization");

    // General primitive: extract the unique slope-1/v0 root.
    try {
        long long top = z.coeffs().rbegin()->first;
        Poly P;
        for (long long k = 0; k <= top; ++k) {
            const HahnSeries* c = z.coeff_at(k);
            P.push_back(c ? *c : HahnSeries::zero(z.field()));
        }
        Poly D = poly_derivative(P, *z.field());
        // Residue root of the linear residue equation lc0 + lc1 * s.
        uint16_t lc0 = c0->terms().front().coef;
        uint16_t lc1 = c1->terms().front().coef;
        uint16_t s = z.field()->mul(z.field()->neg(lc0), z.field()->inv(lc1));
        HahnSeries u0 = HahnSeries::monomial(z.field(), s, v0);
        prim.u_bar = newton_lift(P, D, u0, work_prec, 256, work_prec + Rat(32));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::PrecisionExhausted)
            fail(ErrorCode::NotMonicShape, "cannot normalize to pi - [u] within precision");
        throw;
    }
    return prim;
}

HahnSeries eval_at_primitive(const WittSeries& x, const PrimitiveDeg1& z, const Rat& work_prec) {
    const FieldPtr field = z.u_bar.field();
    const Rat vu = z.u_bar.valuation().bound.finite();
    HahnSeries acc = HahnSeries::zero(field);
    HahnSeries u_inv = HahnSeries::zero(field);
    bool need_inv = !x.coeffs().empty() && x.coeffs().begin()->first < 0;
    if (need_inv) u_inv = z.u_bar.inverse(work_prec);
    for (const auto& [n, c] : x.coeffs()) {
        if (c.no_terms()) continue;
        HahnSeries p = n >= 0 ? z.u_bar.pow(n, work_prec) : u_inv.pow(-n, work_prec);
        acc = acc + c * p;
    }
    // Precision hidden in x maps to t-precision of the value.
    ExtRat cap = ExtRat::infinity();
    for (const auto& p : x.hidden_bounds()) cap = min(cap, ExtRat(Rat(p.n) * vu + p.v));
    return acc.truncated(min(acc.prec(), cap));
}

NormExponent point_seminorm(const WittSeries& x, const PrimitiveDeg1& z, const Rat& work_prec) {
    HahnSeries value = eval_at_primitive(x, z, work_prec);
    Valuation v = value.valuation();
    if (v.exact) {
        ExtRat e = v.bound.is_infinite() ? ExtRat::infinity() : ExtRat(z.slope * v.bound.finite());
        return {e, e};
    }
    return {ExtRat::infinity(), ExtRat(z.slope * v.bound.finite())};
}

NormExponent homotopy_seminorm(const FactoredElement& x, const PointSpec& point) {
    if (x.unit_scalar.no_terms())
        fail(ErrorCode::InvalidArgument, "factored element with vanishing unit scalar");
    const Rat r = point.center.slope;
    for (const auto& f : x.factors)
        if (!(f.slope == r)) fail(ErrorCode::SlopeMismatch, "factor slope differs from center slope");

    ExtRat value = ExtRat(r * x.unit_scalar.valuation().bound.finite() + Rat(x.pi_power));
    ExtRat lower = value;
    const ExtRat disc = point.rho_exponent + Rat(1); // exponent of p^{-1} rho
    for (const auto& f : x.factors) {
        HahnSeries diff = point.center.u_bar - f.u_bar;
        Valuation vd = diff.valuation();
        ExtRat lam = vd.bound.is_infinite() ? ExtRat::infinity() : r * vd.bound;
        if (vd.exact) {
            value = value + min(disc, lam);
            lower = lower + min(disc, lam);
        } else {
            // Only v(diff) >= bound is known; the contribution is pinned when
            // the disc term wins regardless.
            value = value + min(disc, ExtRat::infinity());
            lower = lower + min(disc, lam);
        }
    }
    return {value, min(value, lower)};
}

ExtRat join_radius(const PrimitiveDeg1& z1, const PrimitiveDeg1& z2) {
    if (!(z1.slope == z2.slope)) fail(ErrorCode::SlopeMismatch, "joins need equal slopes");
    HahnSeries diff = z1.u_bar - z2.u_bar;
    Valuation v = diff.valuation();
    if (v.bound.is_infinite()) return ExtRat::infinity(); // rho = 0
    if (!v.exact) fail(ErrorCode::PrecisionExhausted, "centers not separated within precision");
    Rat e = z1.slope * v.bound.finite() - Rat(1);
    return ExtRat(std::max(e, Rat(0)));
}

FactoredElement factor_primitive(const WittSeries& x, const Interval& window,
                                 const FactorOptions& opts) {
    if (x.is_zero()) fail(ErrorCode::ZeroInput, "factoring zero");
    if (x.no_terms()) fail(ErrorCode::PrecisionExhausted, "element is zero within precision");
    if (x.tail()) fail(ErrorCode::NotPolynomial, "element is not an exact pi-polynomial");

    NewtonPolygon np = polygon(x, Window::upto(ExtRat::infinity()));
    for (const auto& seg : np.segments)
        if (!window.contains(seg.slope))
            fail(ErrorCode::InvalidArgument,
                 "polygon slope " + seg.slope.str() + " outside the window");

    const long long a = x.n_min();
    const long long top = x.coeffs().rbegin()->first;
    Poly P;
    for (long long k = a; k <= top; ++k) {
        const HahnSeries* c = x.coeff_at(k);
        P.push_back(c ? *c : HahnSeries::zero(x.field()));
    }

    const Rat v_stop = (opts.residual_target + Rat(4)) / window.s + Rat(4);
    std::vector<RootCluster> roots = poly_roots(P, std::nullopt, v_stop, opts, 0);
    long long total = 0;
    for (const auto& rc : roots) total += rc.mult;
    if (total != np.total_multiplicity())
        fail(ErrorCode::NeedsFieldExtension, "factorization escapes the base field");

    FactoredElement fe;
    fe.pi_power = a;
    const HahnSeries* ctop = x.coeff_at(a + total);
    if (!ctop || ctop->no_terms())
        fail(ErrorCode::PrecisionExhausted, "degree coefficient missing");
    fe.unit_scalar = *ctop;
    for (const auto& rc : roots) {
        PrimitiveDeg1 prim;
        prim.u_bar = rc.root;
        prim.slope = Rat(1) / rc.root.valuation().bound.finite();
        for (long long i = 0; i < rc.mult; ++i) fe.factors.push_back(prim);
    }
    std::sort(fe.factors.begin(), fe.factors.end(), [](const PrimitiveDeg1& A, const PrimitiveDeg1& B) {
        if (!(A.slope == B.slope)) return A.slope < B.slope;
        return A.u_bar.str() < B.u_bar.str();
    });

    WittSeries diff = x - fe.expand();
    ExtRat bound = diff.interval_norm(window).lower_bound;
    if (bound < ExtRat(opts.residual_target))
        fail(ErrorCode::PrecisionExhausted, "expansion residual above tolerance");
    return fe;
}

} // namespace robba
