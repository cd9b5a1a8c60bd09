#pragma once

#include "robba/euclidean.hpp"
#include "robba/parse.hpp"

namespace robba {

/// Session-wide knobs shared by the CLI and embedders: the coefficient
/// field, default radii, precision caps and tolerance exponents.
struct SessionConfig {
    int p = 2;
    int q_degree = 1;
    Rat r = Rat(1);
    Rat s = Rat(1, 2);
    /// Hahn working precision (inverse targets and the like).
    Rat prec_t = Rat(96);
    /// Default pi-precision cap for operations that must truncate.
    long long prec_pi = 32;
    /// Exponent-denominator cap: denominators divide p^denom_cap.
    int denom_cap = 8;
    Rat stop_exponent = Rat(24);
    /// Verification tolerance for inverses, memberships and factorizations.
    Rat residual_exponent = Rat(10);
    /// Tate variable radii in log form (one per variable).
    std::vector<Rat> rho_log;

    FieldPtr field() const { return Field::get(p, q_degree, denom_cap); }

    ParseContext parse_context() const {
        ParseContext ctx;
        ctx.field = field();
        ctx.weights = rho_log;
        ctx.base_r = r;
        ctx.work_prec = prec_t;
        return ctx;
    }

    Interval interval() const { return Interval(s, r); }

    DivOptions div_options() const {
        DivOptions o;
        o.work_prec = prec_t;
        return o;
    }
};

} // namespace robba
