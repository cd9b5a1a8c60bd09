#pragma once

#include <atomic>

#include "robba/newton.hpp"
#include "robba/witt.hpp"

namespace robba {

enum class DivStatus { Exact, Converged, PrecisionExhausted };

inline const char* div_status_name(DivStatus s) {
    switch (s) {
        case DivStatus::Exact: return "Exact";
        case DivStatus::Converged: return "Converged";
        case DivStatus::PrecisionExhausted: return "PrecisionExhausted";
    }
    return "?";
}

struct DivOptions {
    /// Residual target of coefficient inversions (Hahn-level working precision).
    Rat work_prec = Rat(96);
    long long max_iterations = 100000;
    /// Cooperative cancellation: polled between iterations.
    const std::atomic<bool>* cancel = nullptr;
};

/// One application of the controlled division step: y = z*x + w with
/// lambda_r(w) <= lambda_r(y), and whenever lambda_r(w) > eps*lambda_r(y)
/// the degree of w drops below deg(x). `eps_gap` is the certified epsilon
/// in log form (eps = p^{-eps_gap}); infinite gap means eps = 0, i.e. the
/// step terminates exactly like polynomial division.
struct StepResult {
    WittSeries quotient;
    WittSeries remainder;
    ExtRat eps_gap;
};

StepResult divide_step(const WittSeries& y, const WittSeries& x, const Rat& r,
                       const DivOptions& opts = {});

struct DivisionResult {
    WittSeries quotient;
    WittSeries remainder;
    /// Provable lower bound on the lambda_r exponent of y - z*x - w.
    ExtRat residual_exponent;
    DivStatus status;
    ExtRat eps_gap;
    long long rounds = 0;
};

/// Full division: iterates divide_step until the remainder degree drops
/// below deg(x) (Exact) or the residual passes stop_exponent (Converged).
DivisionResult divide(const WittSeries& y, const WittSeries& x, const Rat& r,
                      const Rat& stop_exponent, const DivOptions& opts = {});

struct GcdResult {
    WittSeries g;
    WittSeries a;
    WittSeries b;
    /// Provable bound on the exponent of a*x + b*y - g.
    ExtRat bezout_residual;
};

/// Euclidean gcd with Bezout certificate; g is normalized so its
/// degree-attaining coefficient is 1 (to working precision). Verifies
/// g | x, g | y and the Bezout identity to stop_exponent before returning.
GcdResult gcd_bezout(const WittSeries& x, const WittSeries& y, const Rat& r,
                     const Rat& stop_exponent, const DivOptions& opts = {});

/// Geometric-series inverse of a unit of B^I (degree 0 over I): returns y
/// with interval exponent of x*y - 1 at least target_exponent.
WittSeries invert_unit(const WittSeries& x, const Interval& I, const Rat& target_exponent,
                       const DivOptions& opts = {});

} // namespace robba
