#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "robba/euclidean.hpp"
#include "test_util.hpp"

using namespace robba;
using testutil::random_witt;

namespace {

FieldPtr F2() { return Field::get(2, 1); }

HahnSeries t_pow(const Rat& e) { return HahnSeries::monomial(F2(), 1, e); }
WittSeries tl(const HahnSeries& h) { return WittSeries::teichmuller(h); }
WittSeries pi_pow(long long n) { return WittSeries::pi_power(F2(), n); }

const Rat kStop(24);

// Reconstruction residual of y - z*x - w, as a provable exponent bound.
ExtRat reconstruct(const WittSeries& y, const WittSeries& x, const DivisionResult& d,
                   const Rat& r) {
    WittSeries diff = y - d.quotient * x - d.remainder;
    return diff.gauss_norm(r).lower_bound;
}

} // namespace

TEST_CASE("controlled step: pi^2 by pi + [t] at r = 1") {
    WittSeries y = pi_pow(2);
    WittSeries x = pi_pow(1) + tl(t_pow(Rat(1)));
    StepResult s = divide_step(y, x, Rat(1));
    CHECK(s.quotient == pi_pow(1) + tl(t_pow(Rat(1))));
    CHECK(s.remainder == tl(t_pow(Rat(2))));
    CHECK(s.eps_gap.is_infinite()); // eps = 0: no terms above the degree
    // Multiply back: (pi + [t])^2 + [t^2] = pi^2 over F_2.
    CHECK(s.quotient * x + s.remainder == y);
}

TEST_CASE("controlled step: zero dividend and monomial divisor") {
    StepResult s = divide_step(WittSeries::zero(F2()), pi_pow(1), Rat(1));
    CHECK(s.quotient.is_zero());
    CHECK(s.remainder.is_zero());
    // divide by pi peels the constant coefficient
    WittSeries y = pi_pow(2) + tl(t_pow(Rat(1))).shift(1) + tl(t_pow(Rat(3)));
    StepResult s2 = divide_step(y, pi_pow(1), Rat(1));
    CHECK(s2.quotient == pi_pow(1) + tl(t_pow(Rat(1))));
    CHECK(s2.remainder == tl(t_pow(Rat(3))));
}

TEST_CASE("full division: exact polynomial case") {
    WittSeries y = pi_pow(2);
    WittSeries x = pi_pow(1) + tl(t_pow(Rat(1)));
    DivisionResult d = divide(y, x, Rat(1), kStop);
    CHECK(d.status == DivStatus::Exact);
    CHECK(d.quotient == pi_pow(1) + tl(t_pow(Rat(1))));
    CHECK(d.remainder == tl(t_pow(Rat(2))));
    CHECK(d.residual_exponent.is_infinite());
}

TEST_CASE("division by a unit leaves remainder zero") {
    // u = [1] + pi[t] has degree 0 at r = 1.
    WittSeries u = WittSeries::one(F2()) + tl(t_pow(Rat(1))).shift(1);
    WittSeries y = pi_pow(1) + tl(t_pow(Rat(2)));
    DivisionResult d = divide(y, u, Rat(1), kStop);
    REQUIRE(d.status != DivStatus::PrecisionExhausted);
    CHECK(d.remainder.no_terms());
    CHECK(reconstruct(y, u, d, Rat(1)) >= ExtRat(kStop));
    // Cross-check against the geometric-series inverse.
    WittSeries uinv = invert_unit(u, Interval::point(Rat(1)), kStop);
    WittSeries alt = y * uinv;
    CHECK((alt - d.quotient).gauss_norm(Rat(1)).lower_bound >= ExtRat(Rat(20)));
}

TEST_CASE("division of an element by itself") {
    WittSeries x = pi_pow(1) + tl(t_pow(Rat(1)));
    DivisionResult d = divide(x, x, Rat(1), kStop);
    CHECK(d.status == DivStatus::Exact);
    CHECK(d.quotient == WittSeries::one(F2()));
    CHECK(d.remainder.is_zero());
}

TEST_CASE("division errors") {
    CHECK_THROWS_AS(divide(pi_pow(1), WittSeries::zero(F2()), Rat(1), kStop), Error);
    // Dividends outside the integral role are rejected.
    CHECK_THROWS_AS(divide(pi_pow(-1), pi_pow(1), Rat(1), kStop), Error);
}

TEST_CASE("division contract on random pairs") {
    std::mt19937_64 rng(211);
    int done = 0;
    for (int i = 0; i < 200 && done < 60; ++i) {
        WittSeries x = random_witt(rng, F2(), 3, 0, 3, true);
        WittSeries y = random_witt(rng, F2(), 4, 0, 5, true);
        Rat r(1);
        long long dx = *degree(x, r);
        if (dx < 1 || dx > 4) continue;
        ++done;
        DivisionResult d = divide(y, x, r, kStop);
        if (d.status == DivStatus::PrecisionExhausted) continue;
        // lambda_r(w) <= lambda_r(y)
        CHECK(d.remainder.gauss_norm(r).value >= y.gauss_norm(r).value);
        if (!d.remainder.no_terms()) CHECK(*degree(d.remainder, r) < dx);
        CHECK(reconstruct(y, x, d, r) >= ExtRat(kStop));
    }
    CHECK(done == 60);
}

TEST_CASE("monotone norm decay across the division loop") {
    // A divisor with a tail above its degree forces the eps branch.
    WittSeries x = pi_pow(1) + tl(t_pow(Rat(1))) + tl(t_pow(Rat(1))).shift(2);
    Rat r(1);
    StepResult s = divide_step(pi_pow(3) + tl(t_pow(Rat(2))), x, r);
    REQUIRE(s.eps_gap.is_finite());
    CHECK(s.eps_gap > ExtRat(Rat(0)));
    // The remainder either lost degree or lost the certified norm factor.
    WittSeries y = pi_pow(3) + tl(t_pow(Rat(2)));
    bool deg_drop = !s.remainder.no_terms() && *degree(s.remainder, r) < *degree(x, r);
    bool norm_drop = s.remainder.no_terms() ||
                     s.remainder.gauss_norm(r).value >= y.gauss_norm(r).value + s.eps_gap;
    CHECK((deg_drop || norm_drop));
}

TEST_CASE("gcd of an element with itself and with one") {
    WittSeries x = pi_pow(1) + tl(t_pow(Rat(1)));
    GcdResult g = gcd_bezout(x, x, Rat(1), kStop);
    CHECK(*degree(g.g, Rat(1)) == *degree(x, Rat(1)));
    GcdResult g1 = gcd_bezout(x, WittSeries::one(F2()), Rat(1), kStop);
    CHECK(*degree(g1.g, Rat(1)) == 0);
}

TEST_CASE("gcd extracts the common primitive factor") {
    Rat r(1);
    WittSeries common = pi_pow(1) + tl(t_pow(Rat(1)));
    WittSeries x = common * (pi_pow(1) + tl(t_pow(Rat(2))));
    WittSeries y = common * (pi_pow(1) + tl(t_pow(Rat(4))));
    GcdResult g = gcd_bezout(x, y, r, kStop);
    CHECK(*degree(g.g, r) == 1);
    CHECK(g.bezout_residual >= ExtRat(kStop));
    // g divides both inputs with remainder zero to tolerance.
    for (const WittSeries* in : {&x, &y}) {
        DivisionResult d = divide(*in, g.g, r, kStop);
        CHECK(d.status != DivStatus::PrecisionExhausted);
        CHECK(d.remainder.no_terms());
    }
}

TEST_CASE("unit inversion examples") {
    Interval I(Rat(2), Rat(3));
    CHECK(invert_unit(pi_pow(1), I, Rat(10)) == pi_pow(-1));
    CHECK(invert_unit(tl(t_pow(Rat(1))), I, Rat(10)) == tl(t_pow(Rat(-1))));
    // pi + [t] over [2,3]: dominant term pi, geometric series in [t]/pi.
    WittSeries x = pi_pow(1) + tl(t_pow(Rat(1)));
    WittSeries y = invert_unit(x, I, Rat(10));
    CHECK((x * y - WittSeries::one(F2())).interval_norm(I).lower_bound >= ExtRat(Rat(10)));
}

TEST_CASE("unit criterion rejects positive degree") {
    Interval I(Rat(1, 2), Rat(2));
    WittSeries x = pi_pow(1) + tl(t_pow(Rat(1))); // slope 1 inside I
    CHECK_THROWS_AS(invert_unit(x, I, Rat(10)), Error);
    try {
        invert_unit(x, I, Rat(10));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotAUnit);
    }
}

TEST_CASE("cancellation token aborts long divisions") {
    std::atomic<bool> cancelled{true};
    DivOptions opts;
    opts.cancel = &cancelled;
    WittSeries x = pi_pow(1) + tl(t_pow(Rat(1)));
    CHECK_THROWS_AS(divide(pi_pow(2), x, Rat(1), kStop, opts), Error);
}
