// Acceptance suite: one pass/fail line per criterion, every check in exact
// rational arithmetic. The CLI binary path comes in as argv[1] (criterion 11).

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "robba/config.hpp"
#include "robba/json_io.hpp"
#include "robba/newton.hpp"
#include "robba/points.hpp"
#include "robba/tate.hpp"
#include "test_util.hpp"

using namespace robba;
using nlohmann::json;
using testutil::random_hahn;
using testutil::random_witt;

namespace {

std::string g_cli;

struct Check {
    bool ok = true;
    std::ostringstream why;

    void expect(bool cond, const std::string& msg) {
        if (!cond && ok) {
            ok = false;
            why << msg;
        }
    }
};

FieldPtr field_for(int i) { return i % 2 == 0 ? Field::get(2, 1) : Field::get(2, 2); }

// ---------------------------------------------------------------- criterion 1
bool c1_norm_multiplicativity(Check& c) {
    std::mt19937_64 rng(1001);
    const Rat radii[] = {Rat(1, 3), Rat(1, 2), Rat(1), Rat(2)};
    int done = 0;
    for (int i = 0; done < 500; ++i) {
        FieldPtr F = field_for(i);
        WittSeries x = random_witt(rng, F, 6, -2, 6);
        WittSeries y = random_witt(rng, F, 6, -2, 6);
        if (x.no_terms() || y.no_terms()) continue;
        ++done;
        WittSeries xy = x * y;
        for (const Rat& t : radii) {
            NormExponent ex = x.gauss_norm(t), ey = y.gauss_norm(t), exy = xy.gauss_norm(t);
            c.expect(ex.reliable() && ey.reliable() && exy.reliable(), "unreliable norm");
            c.expect(exy.value == ex.value + ey.value, "norm exponent not additive");
        }
    }
    return c.ok;
}

// ---------------------------------------------------------------- criterion 2
bool c2_newton_additivity(Check& c) {
    std::mt19937_64 rng(1002);
    const Rat radii[] = {Rat(1, 3), Rat(1, 2), Rat(1), Rat(2)};
    const Window all = Window::upto(ExtRat::infinity());
    int done = 0;
    for (int i = 0; done < 500; ++i) {
        FieldPtr F = field_for(i);
        WittSeries x = random_witt(rng, F, 6, 0, 6);
        WittSeries y = random_witt(rng, F, 6, 0, 6);
        if (x.no_terms() || y.no_terms()) continue;
        ++done;
        WittSeries xy = x * y;
        // Multiplicity additive at every slope of any of the three polygons.
        std::vector<Rat> slopes;
        for (const WittSeries* w : {&x, &y, &xy})
            for (const auto& seg : polygon(*w, all).segments) slopes.push_back(seg.slope);
        for (const Rat& t : slopes)
            c.expect(multiplicity(xy, t, all) ==
                         multiplicity(x, t, all) + multiplicity(y, t, all),
                     "multiplicity not additive");
        for (const Rat& r : radii)
            c.expect(*degree(xy, r) == *degree(x, r) + *degree(y, r), "degree not additive");
    }
    return c.ok;
}

// ---------------------------------------------------------------- criterion 3
bool c3_division_contract(Check& c) {
    std::mt19937_64 rng(1003);
    const Rat r(1), stop(24);
    int done = 0, pe = 0;
    while (done < 200) {
        WittSeries x = random_witt(rng, Field::get(2, 1), 3, 0, 3, true);
        long long dx;
        try {
            dx = *degree(x, r);
        } catch (const Error&) {
            continue;
        }
        if (dx < 1 || dx > 4) continue;
        WittSeries y = random_witt(rng, Field::get(2, 1), 5, 0, 5, true);
        ++done;
        DivisionResult d = divide(y, x, r, stop);
        if (d.status == DivStatus::PrecisionExhausted) {
            ++pe;
            continue;
        }
        // lambda_r(w) <= lambda_r(y).
        c.expect(d.remainder.gauss_norm(r).value >= y.gauss_norm(r).value,
                 "remainder norm exceeds dividend norm");
        if (!d.remainder.no_terms())
            c.expect(*degree(d.remainder, r) < dx, "remainder degree not below divisor degree");
        WittSeries diff = y - d.quotient * x - d.remainder;
        c.expect(diff.gauss_norm(r).lower_bound >= ExtRat(stop),
                 "reconstructed residual below stop exponent");
    }
    c.expect(pe * 20 < 200, "PrecisionExhausted rate at least 5%");
    return c.ok;
}

// ---------------------------------------------------------------- criterion 4
bool c4_gcd_bezout(Check& c) {
    std::mt19937_64 rng(1004);
    const Rat r(1), stop(24);
    int done = 0;
    while (done < 100) {
        WittSeries g = random_witt(rng, Field::get(2, 1), 2, 0, 2, true);
        WittSeries h = random_witt(rng, Field::get(2, 1), 2, 0, 2, true);
        WittSeries k = random_witt(rng, Field::get(2, 1), 2, 0, 2, true);
        try {
            if (*degree(g, r) < 1) continue;
        } catch (const Error&) {
            continue;
        }
        ++done;
        WittSeries x = g * h, y = g * k;
        try {
            GcdResult res = gcd_bezout(x, y, r, stop);
            // gcd_bezout verifies divisibility and the Bezout identity
            // internally; re-check the residual bound here.
            c.expect(res.bezout_residual >= ExtRat(stop), "Bezout residual below stop");
            WittSeries d = res.a * x + res.b * y - res.g;
            c.expect(d.gauss_norm(r).lower_bound >= ExtRat(stop),
                     "recomputed Bezout residual below stop");
            for (const WittSeries* in : {&x, &y}) {
                DivisionResult div = divide(*in, res.g, r, stop);
                c.expect(div.status != DivStatus::PrecisionExhausted && div.remainder.no_terms(),
                         "gcd does not divide an input");
            }
        } catch (const Error& e) {
            c.expect(false, std::string("gcd failed: ") + e.what());
        }
    }
    return c.ok;
}

// ---------------------------------------------------------------- criterion 5
bool c5_unit_criterion(Check& c) {
    std::mt19937_64 rng(1005);
    const Rat pool[] = {Rat(1, 4), Rat(1, 2), Rat(1), Rat(2), Rat(4)};
    std::uniform_int_distribution<int> pick(0, 4), nterm(0, 3), idx(-2, 3);
    auto random_interval = [&] {
        Rat a = pool[pick(rng)], b = pool[pick(rng)];
        return a <= b ? Interval(a, b) : Interval(b, a);
    };
    auto random_unit = [&](const Interval& I) {
        long long n0 = idx(rng);
        HahnSeries c0 = random_hahn(rng, Field::get(2, 1), 2, 2, -3, 5, true);
        WittSeries x = WittSeries::teichmuller(c0).shift(n0);
        ExtRat base_s = x.gauss_norm(I.s).value, base_r = x.gauss_norm(I.r).value;
        int extra = nterm(rng);
        for (int k = 0; k < extra; ++k) {
            long long n = idx(rng);
            HahnSeries cc = random_hahn(rng, Field::get(2, 1), 2, 2, -3, 5, true);
            WittSeries term = WittSeries::teichmuller(cc).shift(n);
            // Dominated at both endpoints, hence on the whole interval.
            if (term.gauss_norm(I.s).value > base_s && term.gauss_norm(I.r).value > base_r)
                x = x + term;
        }
        return x;
    };

    for (int i = 0; i < 100; ++i) {
        Interval I = random_interval();
        WittSeries x = random_unit(I);
        if (degree_over(x, I) != 0) {
            c.expect(false, "constructed element is not degree 0");
            break;
        }
        try {
            WittSeries inv = invert_unit(x, I, Rat(10));
            ExtRat res =
                (x * inv - WittSeries::one(x.field())).interval_norm(I).lower_bound;
            c.expect(res >= ExtRat(Rat(10)), "inverse residual below 10");
        } catch (const Error& e) {
            c.expect(false, std::string("inversion failed: ") + e.what());
        }
    }
    // Positive degree: a primitive factor with slope inside the interval.
    for (int i = 0; i < 100; ++i) {
        Interval I = random_interval();
        Rat slope = I.s; // endpoint slopes count as inside the closed window
        Rat w = Rat(1) / slope;
        WittSeries x = (WittSeries::pi_power(Field::get(2, 1), 1) -
                        WittSeries::teichmuller(
                            HahnSeries::monomial(Field::get(2, 1), 1, w))) *
                       random_unit(I);
        bool raised = false;
        try {
            invert_unit(x, I, Rat(10));
        } catch (const Error& e) {
            raised = e.code() == ErrorCode::NotAUnit;
        }
        c.expect(raised, "positive-degree element did not raise NotAUnit");
    }
    return c.ok;
}

// ---------------------------------------------------------------- criterion 6
bool c6_hadamard(Check& c) {
    std::mt19937_64 rng(1006);
    const Rat ts[] = {Rat(1, 4), Rat(1, 2), Rat(1), Rat(3, 2), Rat(2), Rat(3)};
    const Rat cs[] = {Rat(1, 4), Rat(1, 3), Rat(1, 2), Rat(2, 3)};
    std::uniform_int_distribution<int> pt(0, 5), pc(0, 3);
    for (int i = 0; i < 200; ++i) {
        WittSeries x = random_witt(rng, field_for(i), 5, -2, 6, true);
        Rat t1 = ts[pt(rng)], t2 = ts[pt(rng)], cc = cs[pc(rng)];
        Rat t = cc * t1 + (Rat(1) - cc) * t2;
        Rat e1 = x.gauss_norm(t1).value.finite();
        Rat e2 = x.gauss_norm(t2).value.finite();
        c.expect(ExtRat(cc * e1 + (Rat(1) - cc) * e2) <= x.gauss_norm(t).value,
                 "Hadamard inequality violated");
        // Termwise equality for monomials.
        if (x.coeffs().size() == 1 && !x.tail()) {
            c.expect(ExtRat(cc * e1 + (Rat(1) - cc) * e2) == x.gauss_norm(t).value,
                     "monomial interpolation not an equality");
        }
    }
    // Dedicated monomial equality checks.
    std::uniform_int_distribution<long long> n(-2, 4);
    for (int i = 0; i < 50; ++i) {
        WittSeries m = WittSeries::teichmuller(
                           random_hahn(rng, Field::get(2, 1), 1, 3, -4, 6, true))
                           .shift(n(rng));
        Rat t1 = ts[pt(rng)], t2 = ts[pt(rng)], cc = cs[pc(rng)];
        Rat t = cc * t1 + (Rat(1) - cc) * t2;
        Rat e1 = m.gauss_norm(t1).value.finite(), e2 = m.gauss_norm(t2).value.finite();
        c.expect(ExtRat(cc * e1 + (Rat(1) - cc) * e2) == m.gauss_norm(t).value,
                 "monomial interpolation not an equality");
    }
    return c.ok;
}

// ---------------------------------------------------------------- criterion 7
bool c7_reduction_decay(Check& c) {
    std::mt19937_64 rng(1007);
    std::vector<Rat> weights = {Rat(0), Rat(0)};
    const Rat r(1), target(16);
    std::uniform_int_distribution<int> lead_e(0, 2), extra(0, 2), shift(1, 3);
    auto random_gen = [&] {
        MultiIndex I{(uint32_t)lead_e(rng), (uint32_t)lead_e(rng)};
        if (I[0] == 0 && I[1] == 0) I[0] = 1;
        WittSeries lead = random_witt(rng, Field::get(2, 1), 2, 0, 2, true);
        TateSeries g = TateSeries::monomial(weights, r, lead, I);
        ExtRat e0 = g.weighted_norm().value;
        int n = extra(rng);
        for (int k = 0; k < n; ++k) {
            MultiIndex J{(uint32_t)lead_e(rng), (uint32_t)lead_e(rng)};
            WittSeries cc = random_witt(rng, Field::get(2, 1), 2, 0, 2, true);
            TateSeries term = TateSeries::monomial(weights, r, cc, J);
            // Shift below the lead so the leading structure stays put.
            while (!(term.weighted_norm().value > e0))
                term = TateSeries::monomial(weights, r, cc = cc.shift(shift(rng)), J);
            if (!(J == g.terms().begin()->first) || true) g = g + term;
        }
        return g;
    };

    for (int i = 0; i < 50; ++i) {
        TateSeries g1 = random_gen(), g2 = random_gen();
        std::vector<TateSeries> G = {g1, g2};
        TateSeries y = g1 * g2;
        try {
            MembershipResult mr = membership(y, G, target);
            c.expect(mr.member, "product of generators not certified");
            if (!mr.member) continue;
            for (size_t k = 1; k < mr.round_exponents.size(); ++k)
                c.expect(mr.round_exponents[k] >= mr.round_exponents[k - 1] + mr.eps_gap,
                         "per-round decay below the computed gap");
            TateSeries recon = TateSeries::zero(Field::get(2, 1), weights, r);
            for (size_t k = 0; k < G.size(); ++k)
                recon = recon + mr.certificate[k] * G[k];
            c.expect((y - recon).weighted_norm().lower_bound >= ExtRat(target),
                     "certificate reconstruction misses the claimed residual");
        } catch (const Error& e) {
            c.expect(false, std::string("membership failed: ") + e.what());
        }
        // Non-member: a random nonzero constant stabilizes.
        TateSeries one = TateSeries::monomial(
            weights, r,
            WittSeries::teichmuller(random_hahn(rng, Field::get(2, 1), 2, 2, -2, 3, true)),
            MultiIndex{0, 0});
        MembershipResult nm = membership(one, G, target);
        c.expect(!nm.member && !nm.residual.no_terms(),
                 "constant did not stabilize to a nonzero remainder");
    }
    return c.ok;
}

// ---------------------------------------------------------------- criterion 8
bool c8_order_dickson(Check& c) {
    // Graded-lex axioms and refinement on the exhaustive {0..5}^2 grid.
    std::vector<MultiIndex> grid;
    for (uint32_t a = 0; a <= 5; ++a)
        for (uint32_t b = 0; b <= 5; ++b) grid.push_back({a, b});
    for (const auto& I : grid) {
        c.expect(graded_lex_cmp(I, I) == 0, "reflexivity failed");
        for (const auto& J : grid) {
            c.expect(graded_lex_cmp(I, J) == -graded_lex_cmp(J, I), "antisymmetry failed");
            if (componentwise_leq(I, J)) c.expect(graded_lex_cmp(I, J) <= 0, "refinement failed");
            for (const auto& K : grid)
                if (graded_lex_cmp(I, J) <= 0 && graded_lex_cmp(J, K) <= 0)
                    c.expect(graded_lex_cmp(I, K) <= 0, "transitivity failed");
        }
    }
    // minimal_indices against brute force on 1000 random sets, dims 2-3.
    std::mt19937_64 rng(1008);
    std::uniform_int_distribution<int> dim(2, 3), sz(1, 14), entry(0, 7);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = dim(rng);
        std::vector<MultiIndex> S;
        int count = sz(rng);
        for (int i = 0; i < count; ++i) {
            MultiIndex I((size_t)n);
            for (auto& x : I) x = (uint32_t)entry(rng);
            S.push_back(I);
        }
        auto mins = minimal_indices(S);
        // Brute-force oracle.
        for (const auto& I : S) {
            bool dominated = false;
            for (const auto& J : S)
                if (!(J == I) && componentwise_leq(J, I)) dominated = true;
            bool in_mins = std::find(mins.begin(), mins.end(), I) != mins.end();
            c.expect(in_mins == !dominated, "minimal set mismatch");
        }
    }
    return c.ok;
}

// ---------------------------------------------------------------- criterion 9
bool c9_point_geometry(Check& c) {
    std::mt19937_64 rng(1009);
    auto F = Field::get(2, 1);
    auto t_mono = [&](const Rat& e) { return HahnSeries::monomial(F, 1, e); };
    auto random_center = [&](const Rat& v) {
        HahnSeries u = t_mono(v);
        std::uniform_int_distribution<int> more(0, 2);
        std::uniform_int_distribution<long long> bump(1, 6);
        int n = more(rng);
        for (int i = 0; i < n; ++i) u = u + t_mono(v + Rat(bump(rng), 2));
        return u;
    };
    PrimitiveDeg1 base{t_mono(Rat(1)), Rat(1)};
    for (int i = 0; i < 200; ++i) {
        WittSeries x = random_witt(rng, F, 3, 0, 4);
        WittSeries y = random_witt(rng, F, 3, 0, 4);
        c.expect(eval_at_primitive(x * y, base) ==
                     eval_at_primitive(x, base) * eval_at_primitive(y, base),
                 "theta not multiplicative");
        c.expect(eval_at_primitive(x + y, base) ==
                     eval_at_primitive(x, base) + eval_at_primitive(y, base),
                 "theta not additive");
    }
    for (int i = 0; i < 50; ++i) {
        FactoredElement fe;
        fe.unit_scalar = random_hahn(rng, F, 2, 2, -2, 3, true);
        fe.pi_power = i % 3;
        fe.factors = {{random_center(Rat(1)), Rat(1)}, {random_center(Rat(1)), Rat(1)}};
        PrimitiveDeg1 center{random_center(Rat(1)), Rat(1)};
        c.expect(homotopy_seminorm(fe, {center, ExtRat::infinity()}).value ==
                     point_seminorm(fe.expand(), center).value,
                 "homotopy at rho=0 differs from the evaluation seminorm");
        c.expect(homotopy_seminorm(fe, {center, ExtRat(Rat(0))}).value ==
                     fe.expand().gauss_norm(Rat(1)).value,
                 "homotopy at rho=1 differs from lambda_r");
    }
    for (int i = 0; i < 100; ++i) {
        PrimitiveDeg1 a{random_center(Rat(1)), Rat(1)};
        PrimitiveDeg1 b{random_center(Rat(1)), Rat(1)};
        PrimitiveDeg1 d{random_center(Rat(1)), Rat(1)};
        ExtRat ab = join_radius(a, b), ad = join_radius(a, d), bd = join_radius(b, d);
        ExtRat lo = min(ab, min(ad, bd));
        int above = (ab > lo ? 1 : 0) + (ad > lo ? 1 : 0) + (bd > lo ? 1 : 0);
        c.expect(above <= 1, "three-point join condition violated");
    }
    return c.ok;
}

// --------------------------------------------------------------- criterion 10
bool c10_factorization(Check& c) {
    std::mt19937_64 rng(1010);
    std::uniform_int_distribution<int> nfac(1, 4), vnum(1, 3), more(0, 1);
    std::uniform_int_distribution<long long> bump(1, 4);
    const Interval window(Rat(1, 4), Rat(4));
    for (int i = 0; i < 100; ++i) {
        FieldPtr F = field_for(i);
        std::uniform_int_distribution<int> coef(1, F->q() - 1);
        auto t_mono = [&](uint16_t cc, const Rat& e) { return HahnSeries::monomial(F, cc, e); };
        int n = nfac(rng);
        WittSeries x = WittSeries::teichmuller(t_mono((uint16_t)coef(rng), Rat(0)));
        std::vector<Rat> slopes;
        for (int k = 0; k < n; ++k) {
            Rat v(vnum(rng), more(rng) ? 2 : 1);
            HahnSeries u = t_mono((uint16_t)coef(rng), v);
            if (more(rng)) u = u + t_mono((uint16_t)coef(rng), v + Rat(bump(rng), 2));
            x = x * (WittSeries::pi_power(F, 1) - WittSeries::teichmuller(u));
            slopes.push_back(Rat(1) / v);
        }
        try {
            FactorOptions fopts;
            fopts.residual_target = Rat(10);
            FactoredElement fe = factor_primitive(x, window, fopts);
            c.expect(fe.factors.size() == (size_t)n, "factor count mismatch");
            WittSeries diff = x - fe.expand();
            c.expect(diff.interval_norm(window).lower_bound >= ExtRat(Rat(10)),
                     "expansion residual below 10");
            // Slope multiset matches the polygon.
            std::sort(slopes.begin(), slopes.end());
            std::vector<Rat> got;
            for (const auto& f : fe.factors) got.push_back(f.slope);
            std::sort(got.begin(), got.end());
            c.expect(got == slopes, "slope multiset mismatch");
            NewtonPolygon np = polygon(x, Window::upto(ExtRat::infinity()));
            std::vector<Rat> from_poly;
            for (const auto& seg : np.segments)
                for (long long m = 0; m < seg.multiplicity; ++m) from_poly.push_back(seg.slope);
            c.expect(from_poly == slopes, "polygon multiplicities mismatch");
        } catch (const Error& e) {
            c.expect(false, std::string("factorization failed: ") + e.what());
        }
    }
    // Constructed irreducible-residue case over F_2.
    auto F2 = Field::get(2, 1);
    WittSeries bad = WittSeries::pi_power(F2, 2) +
                     WittSeries::teichmuller(HahnSeries::monomial(F2, 1, Rat(1))).shift(1) +
                     WittSeries::teichmuller(HahnSeries::monomial(F2, 1, Rat(2)));
    bool raised = false;
    try {
        factor_primitive(bad, window);
    } catch (const Error& e) {
        raised = e.code() == ErrorCode::NeedsFieldExtension;
    }
    c.expect(raised, "irreducible residue case did not raise NeedsFieldExtension");
    return c.ok;
}

// --------------------------------------------------------------- criterion 11
struct CliResult {
    int code;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = g_cli + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof(buf), p)) > 0) out.append(buf, got);
    int status = pclose(p);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

bool c11_cli(Check& c) {
    // Golden outputs for the worked examples.
    CliResult norm = run_cli("norm --t 1 \"pi - [t]\"");
    c.expect(norm.code == 0 && norm.out == "{\"exponent\":\"1\",\"reliable\":true}\n",
             "norm golden mismatch: " + norm.out);

    CliResult poly = run_cli("polygon \"pi - [t]\"");
    c.expect(poly.code == 0 && poly.out == "1\t1\t1\n", "polygon golden mismatch: " + poly.out);

    CliResult divres = run_cli("divide \"pi^2\" \"pi + [t]\"");
    c.expect(divres.code == 0, "divide exit code");
    {
        json j = json::parse(divres.out);
        c.expect(j["quotient"] == "[t] + pi" && j["remainder"] == "[t^2]" &&
                     j["status"] == "Exact" && j["residual_exponent"] == "inf",
                 "divide golden mismatch: " + divres.out);
    }

    CliResult gcd = run_cli(
        "gcd \"(pi+[t])*(pi+[t^2])\" \"(pi+[t])*(pi+[t^4])\"");
    c.expect(gcd.code == 0, "gcd exit code");
    {
        json j = json::parse(gcd.out);
        ParseContext ctx;
        ctx.field = Field::get(2, 1);
        WittSeries g = parse_witt(j["gcd"].get<std::string>(), ctx);
        c.expect(*degree(g, Rat(1)) == 1, "gcd degree mismatch: " + gcd.out);
        c.expect(parse_rat(j["bezout_residual_exponent"].get<std::string>()) >= Rat(24),
                 "gcd bezout residual too small");
    }

    CliResult inv = run_cli("invert \"pi\"");
    c.expect(inv.code == 0 && json::parse(inv.out)["inverse"] == "pi^-1",
             "invert golden mismatch: " + inv.out);

    CliResult notaunit = run_cli("invert \"pi + [t]\"");
    c.expect(notaunit.code == 1 &&
                 json::parse(notaunit.out)["error"]["code"] == "NotAUnit",
             "invert NotAUnit mismatch: " + notaunit.out);

    CliResult ev = run_cli("eval \"pi^2 + [t^2]\" --at \"t\"");
    c.expect(ev.code == 0 && json::parse(ev.out)["value"] == "0",
             "eval golden mismatch: " + ev.out);

    CliResult sem = run_cli("seminorm \"pi\" --at \"t^2\"");
    c.expect(sem.code == 0 && json::parse(sem.out)["exponent"] == "1",
             "seminorm golden mismatch: " + sem.out);

    CliResult hom = run_cli(
        "homotopy '{\"unit\":\"1\",\"pi_power\":0,\"factors\":[{\"u_bar\":\"t\"}]}' "
        "--at \"t\" --rho-exp 2");
    c.expect(hom.code == 0 && json::parse(hom.out)["exponent"] == "3",
             "homotopy golden mismatch: " + hom.out);

    CliResult join = run_cli("join --z1 \"t\" --z2 \"t + t^3\"");
    c.expect(join.code == 0 && json::parse(join.out)["rho_exponent"] == "2",
             "join golden mismatch: " + join.out);

    CliResult fac = run_cli("factor \"pi^2 + [t^3]\"");
    c.expect(fac.code == 0, "factor exit code");
    {
        json j = json::parse(fac.out);
        c.expect(j["unit"] == "1" && j["pi_power"] == 0 && j["factors"].size() == 2 &&
                     j["factors"][0]["u_bar"] == "t^(3/2)" &&
                     j["factors"][1]["u_bar"] == "t^(3/2)",
                 "factor golden mismatch: " + fac.out);
    }

    // Generator-file subcommands.
    {
        std::string gens = "/tmp/robba_gens_accept.json";
        FILE* f = fopen(gens.c_str(), "w");
        fputs("{\"n\":1,\"radii_log\":[\"0\"],\"r\":\"1\",\"generators\":[\"T1 - [t]\"]}", f);
        fclose(f);
        CliResult red = run_cli("reduce --gens " + gens + " \"T1^2\"");
        c.expect(red.code == 0, "reduce exit code");
        json j = json::parse(red.out);
        c.expect(j["cofactors"][0] == "[t] + T1" && j["remainder"] == "[t^2]",
                 "reduce golden mismatch: " + red.out);

        CliResult mem = run_cli("member --gens " + gens + " \"(T1 - [t])*(T1 - [t^2])\"");
        c.expect(mem.code == 0 && json::parse(mem.out)["member"] == true,
                 "member golden mismatch: " + mem.out);
        CliResult non = run_cli("member --gens " + gens + " \"1\"");
        c.expect(non.code == 1 && json::parse(non.out)["member"] == false &&
                     json::parse(non.out)["residual"] == "[1]",
                 "non-member golden mismatch: " + non.out);

        std::string gens2 = "/tmp/robba_gens2_accept.json";
        f = fopen(gens2.c_str(), "w");
        fputs("{\"n\":1,\"radii_log\":[\"0\"],\"r\":\"1\","
              "\"generators\":[\"pi*T1\",\"(pi + [t])*T1\"]}",
              f);
        fclose(f);
        CliResult comp = run_cli("complete --gens " + gens2);
        c.expect(comp.code == 0, "complete exit code");
        json jc = json::parse(comp.out);
        c.expect(jc["complete"] == true && jc["generators"].size() == 3,
                 "complete golden mismatch: " + comp.out);
    }

    // Exit code 2 on syntax errors; stdin element input.
    CliResult syn = run_cli("norm \"pi - [\"");
    c.expect(syn.code == 2, "syntax error exit code");

    // Environment fallback: with r = 2 the slope-2 segment enters the window.
    {
        std::string cmd = "ROBBA_R=2 " + g_cli + " polygon \"pi - [t^(1/2)]\" 2>/dev/null";
        FILE* p = popen(cmd.c_str(), "r");
        std::string out;
        char buf[256];
        size_t got;
        while ((got = fread(buf, 1, sizeof(buf), p)) > 0) out.append(buf, got);
        pclose(p);
        c.expect(out == "2\t1\t1\n", "env fallback polygon mismatch: " + out);
    }
    CliResult defaulted = run_cli("polygon \"pi - [t^(1/2)]\"");
    c.expect(defaulted.code == 0 && defaulted.out == "\n",
             "default window should discard slope 2: " + defaulted.out);

    // Config file (key=value), flags win over it.
    {
        std::string conf = "/tmp/robba_conf_accept.ini";
        FILE* f = fopen(conf.c_str(), "w");
        fputs("r=2\n", f);
        fclose(f);
        CliResult viaconf = run_cli("--config " + conf + " polygon \"pi - [t^(1/2)]\"");
        c.expect(viaconf.code == 0 && viaconf.out == "2\t1\t1\n",
                 "config file polygon mismatch: " + viaconf.out);
        CliResult flagwins = run_cli("--config " + conf + " --r 1 polygon \"pi - [t^(1/2)]\"");
        c.expect(flagwins.code == 0 && flagwins.out == "\n",
                 "flag should override the config file: " + flagwins.out);
    }

    // SVG rendering side output.
    {
        CliResult svg = run_cli("--svg /tmp/robba_hull_accept.svg polygon \"pi - [t]\"");
        c.expect(svg.code == 0, "svg polygon exit");
        std::string contents;
        FILE* f = fopen("/tmp/robba_hull_accept.svg", "r");
        if (f) {
            char buf[256];
            size_t got;
            while ((got = fread(buf, 1, sizeof(buf), f)) > 0) contents.append(buf, got);
            fclose(f);
        }
        c.expect(contents.rfind("<svg", 0) == 0 && contents.find("polyline") != std::string::npos,
                 "svg output malformed");
    }

    {
        std::string cmd = "echo 'pi - [t]' | " + g_cli + " norm --t 1 - 2>/dev/null";
        FILE* p = popen(cmd.c_str(), "r");
        std::string out;
        char buf[4096];
        size_t got;
        while ((got = fread(buf, 1, sizeof(buf), p)) > 0) out.append(buf, got);
        int status = pclose(p);
        c.expect(WIFEXITED(status) && WEXITSTATUS(status) == 0 &&
                     out == "{\"exponent\":\"1\",\"reliable\":true}\n",
                 "stdin norm mismatch: " + out);
    }
    // Pooled batch norm keeps input order.
    {
        std::string batch = "/tmp/robba_batch_accept.txt";
        FILE* f = fopen(batch.c_str(), "w");
        fputs("pi\n[t]\npi*[t]\n", f);
        fclose(f);
        CliResult multi = run_cli("norm --t 1 --batch " + batch);
        c.expect(multi.code == 0, "batch norm exit");
        json j = json::parse(multi.out);
        c.expect(j.is_array() && j.size() == 3 && j[0]["exponent"] == "1" &&
                     j[1]["exponent"] == "1" && j[2]["exponent"] == "2",
                 "batch norm mismatch: " + multi.out);
    }

    // Print/parse round trip on 500 random values.
    std::mt19937_64 rng(1011);
    ParseContext ctx2;
    ctx2.field = Field::get(2, 1);
    ParseContext ctx4;
    ctx4.field = Field::get(2, 2);
    for (int i = 0; i < 500; ++i) {
        const ParseContext& ctx = i % 2 ? ctx4 : ctx2;
        WittSeries x = random_witt(rng, ctx.field, 5, -2, 6);
        c.expect(parse_witt(x.str(), ctx) == x, "print/parse round trip failed");
    }
    return c.ok;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];

    struct Criterion {
        const char* name;
        double limit_s;
        std::function<bool(Check&)> run;
    };
    const Criterion criteria[] = {
        {"1. Gauss-norm multiplicativity (500 pairs, q in {2,4})", 5, c1_norm_multiplicativity},
        {"2. Newton multiplicity/degree additivity", 5, c2_newton_additivity},
        {"3. Division contract (200 pairs)", 30, c3_division_contract},
        {"4. Euclidean gcd with Bezout certificates (100 triples)", 60, c4_gcd_bezout},
        {"5. Unit criterion (100 inversions, 100 rejections)", 10, c5_unit_criterion},
        {"6. Hadamard convexity, arithmetic interpolation", 5, c6_hadamard},
        {"7. Groebner reduction decay (50 memberships)", 60, c7_reduction_decay},
        {"8. Term order and Dickson checks", 5, c8_order_dickson},
        {"9. Point geometry (theta, homotopy endpoints, joins)", 10, c9_point_geometry},
        {"10. Factorization round trip (100 products)", 60, c10_factorization},
        {"11. CLI conformance and print/parse round trips", 10, c11_cli},
    };

    int failures = 0;
    for (const auto& cr : criteria) {
        Check chk;
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        std::string threw;
        try {
            ok = cr.run(chk);
        } catch (const std::exception& e) {
            threw = e.what();
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = secs < cr.limit_s;
        if (ok && in_time) {
            printf("[PASS] %s  (%.2fs)\n", cr.name, secs);
        } else {
            ++failures;
            std::string reason = !threw.empty() ? threw
                                 : !ok          ? chk.why.str()
                                                : "time limit exceeded";
            printf("[FAIL] %s  (%.2fs): %s\n", cr.name, secs, reason.c_str());
        }
        fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
