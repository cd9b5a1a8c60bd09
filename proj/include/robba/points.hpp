#pragma once

#include <vector>

#include "robba/newton.hpp"
#include "robba/witt.hpp"

namespace robba {

/// A primitive element of degree 1 in monic shape pi - [u_bar], with
/// 0 < v(u_bar) < inf. Its slope is 1/v(u_bar): the unique radius where the
/// norms of pi and [u_bar] agree, and the single Newton-polygon slope.
struct PrimitiveDeg1 {
    HahnSeries u_bar;
    Rat slope;

    WittSeries element() const {
        return WittSeries::pi_power(u_bar.field(), 1) - WittSeries::teichmuller(u_bar);
    }
};

/// [unit_scalar] * pi^pi_power * prod_i (pi - [u_bar_i]).
struct FactoredElement {
    HahnSeries unit_scalar;
    long long pi_power = 0;
    std::vector<PrimitiveDeg1> factors;

    WittSeries expand() const;
};

/// A point of the homotopy family: the evaluation point of `center`
/// deformed outward to radius rho = p^{-rho_exponent} (rho_exponent = +inf
/// is the evaluation seminorm itself, 0 is the Gauss point lambda_r).
struct PointSpec {
    PrimitiveDeg1 center;
    ExtRat rho_exponent;
};

/// Validates the primitive-of-degree-1 conditions and normalizes to the
/// monic shape pi - [u_bar] (unit scaling / root extraction when the input
/// has more than two terms). Throws NotPrimitive / NotMonicShape.
PrimitiveDeg1 primitive_check(const WittSeries& z, const Rat& work_prec = Rat(96));

/// theta(x) = sum_n x_n * u_bar^n: the evaluation map at the point cut out
/// by pi - [u_bar]; a ring homomorphism in the characteristic-p model.
HahnSeries eval_at_primitive(const WittSeries& x, const PrimitiveDeg1& z,
                             const Rat& work_prec = Rat(96));

/// Exponent slope * v(theta(x)) of the evaluation seminorm.
NormExponent point_seminorm(const WittSeries& x, const PrimitiveDeg1& z,
                            const Rat& work_prec = Rat(96));

/// Homotopy seminorm on a factored element via the closed formula on linear
/// factors: each pi - [w] contributes min(1 + rho_exponent, r*v(u - w)), pi
/// contributes 1, and [c] contributes r*v(c). All factor slopes must equal
/// the center's slope (SlopeMismatch otherwise).
NormExponent homotopy_seminorm(const FactoredElement& x, const PointSpec& point);

/// Least rho (as exponent, so +inf means rho = 0) at which the homotopies
/// centered at z1 and z2 agree on every same-slope linear factor:
/// max(0, r*v(u1 - u2) - 1).
ExtRat join_radius(const PrimitiveDeg1& z1, const PrimitiveDeg1& z2);

struct FactorOptions {
    Rat work_prec = Rat(96);
    /// Required lower bound on the exponent of x - expand(result).
    Rat residual_target = Rat(24);
    long long max_iterations = 512;
};

/// Slope factorization of an exact pi-polynomial into degree-1 primitive
/// factors over L: slopes are separated by the Newton polygon, residue
/// equations are solved over F_q by search, and roots are lifted by Newton
/// iteration. NeedsFieldExtension when a root does not exist in L.
FactoredElement factor_primitive(const WittSeries& x, const Interval& window,
                                 const FactorOptions& opts = {});

} // namespace robba
