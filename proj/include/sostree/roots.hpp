#pragma once

#include <functional>
#include <vector>

namespace sostree {

/// Real root of a polynomial found by the derivative-chain isolator.
/// `tangential` marks an even-multiplicity root (the curve touches zero
/// without crossing).
struct PolyRoot {
    double x = 0.0;
    bool tangential = false;
};

/// Horner evaluation; coeffs are in descending degree order.
double poly_eval(const std::vector<double>& coeffs, double x);

/// Derivative coefficients, descending degree order.
std::vector<double> poly_derivative(const std::vector<double>& coeffs);

/// All real roots in (lo, hi), isolated by recursing on the derivative chain.
/// Simple roots are bracketed between sign changes and bisected; local
/// extrema with |p| below `tangency_tol` times the local term scale are
/// reported as tangential roots. Degree after stripping leading zeros must be
/// at most 12.
std::vector<PolyRoot> poly_roots(const std::vector<double>& coeffs, double lo, double hi,
                                 double tangency_tol = 1e-12);

/// Sign changes in the coefficient sequence (Descartes bound helper).
int descartes_sign_changes(const std::vector<double>& coeffs);

/// Bisection on an arbitrary continuous function; requires f(lo) and f(hi)
/// of opposite sign (zero endpoints are returned directly).
double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200);

/// A few guarded Newton steps; falls back to x0 when the iteration leaves
/// [lo, hi] or the derivative vanishes.
double newton_polish(const std::function<double(double)>& f, const std::function<double(double)>& df,
                     double x0, double lo, double hi, int iters = 8);

/// Golden-section minimizer for unimodal f on [lo, hi]; returns argmin.
double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-13);

/// Damped two-dimensional Newton with a finite-difference Jacobian on
/// F : (x, y) -> (f1, f2). Steps are kept only while the sup-norm of F drops
/// and the iterate stays in the open positive quadrant.
void newton2d(const std::function<std::pair<double, double>(double, double)>& f, double& x, double& y,
              int iters = 12);

}  // namespace sostree
