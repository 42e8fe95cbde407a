#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sostree/ti_solver.hpp"

namespace sostree {

/// Parameters of the smooth family at k = 2. p >= 1 and may be +infinity;
/// bigq() is theta^(2^p) with the limiting conventions: for p = infinity it
/// is 0 for theta != 1 and 1 at theta = 1; finite-p values are clamped to
/// [0, 1e12] so the downstream algebra stays in range.
struct PSOSParams {
    double theta = 0.0;
    double p = 1.0;

    double bigq() const;
    double q() const { return 1.0 - bigq(); }
};

PSOSParams make_psos(double theta, double p);

/// Signed defects of the two k = 2 fixed-point equations with the distance-2
/// activity bigq included:
///   first:  x - (x^2 + theta*y^2 + Q) / (Q*x^2 + theta*y^2 + 1)
///   second: y - (theta*x^2 + y^2 + theta) / (Q*x^2 + theta*y^2 + 1)
std::pair<double, double> residual_psos(double x, double y, const PSOSParams& params);

/// Diagonal branch: positive roots y of theta*y^3 - y^2 + (Q+1)*y - 2*theta.
std::vector<TISolution> solve_psos_x1(const PSOSParams& params);

/// Discriminant of that cubic in the vanishing-Q limit, in expanded form:
/// 1 - 12*theta + 36*theta^2 - 108*theta^4. Its unique zero on (0, 0.3) is
/// theta0, the diagonal-branch tangency.
double delta0(double theta);
double theta0();

/// Off-diagonal reduction: the xi = x + 1/x values solve
/// A*xi^2 + B*xi + C = 0 with
///   A = (theta^2-Q)^2 + theta*Q*q^2,
///   B = 2q(theta^2-Q) - theta*q^3 + 2*theta*q^2*Q,
///   C = q^2 (1 - 2*theta*q).
/// Returns the sorted pair, or nothing when the discriminant is negative.
/// A tangency (discriminant ~ 0) yields an equal pair.
std::optional<std::pair<double, double>> xi12(const PSOSParams& params);

/// The same pair straight from the published quotient-with-radical formula
/// (kept as an independent cross-check route); sorted ascending.
std::optional<std::pair<double, double>> xi12_literal(const PSOSParams& params);

/// Sign-carrier of both routes:
/// q(q + 2*theta - 2)[(q - theta - 1)^2 + (theta+1)(3*theta-1)].
double xi12_radicand(const PSOSParams& params);

/// Full k = 2 classification of the smooth family. For theta >= 1 only the
/// diagonal branch can carry solutions.
PhaseRecord classify_psos(const PSOSParams& params);

}  // namespace sostree
