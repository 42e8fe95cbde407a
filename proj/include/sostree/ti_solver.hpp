#pragma once

#include <vector>

#include "sostree/boundary_law.hpp"

namespace sostree {

/// Which of the two reduced fixed-point branches a solution lies on.
enum class Branch { x1, xne1 };

/// One translation-invariant fixed point in reduced coordinates (m = 2).
struct TISolution {
    double x = 1.0;
    double y = 1.0;
    Branch branch = Branch::x1;
    bool tangential = false;  // even-multiplicity root: the branch touches zero
    double residual = 0.0;    // sup defect of the fixed-point pair, scaled by max(1,|x|,|y|)
};

/// Full classification at one (theta, k): all TI fixed points, sorted by
/// (x, y). A tangential pair is counted once per touching point.
struct PhaseRecord {
    double theta = 0.0;
    int k = 0;
    std::vector<TISolution> solutions;
    bool near_tangency = false;  // discriminant within tolerance of zero

    int count() const { return static_cast<int>(solutions.size()); }
};

/// Thresholds of the k = 3 hardcore classification plus the k = 2 analogues.
struct CriticalValues {
    double theta_c = 0.0;        // diagonal-branch tangency, k = 3
    double y0 = 0.0;             // its location
    double theta_tilde = 0.0;    // loss of the small-w branch, k = 3
    double hat_theta_c = 0.0;    // off-diagonal tangency, k = 3
    double eta_c = 0.0;          // smallest admissible eta, k = 3
    double theta0 = 0.0;         // diagonal-branch tangency, k = 2
    double theta0_prime = 0.0;   // off-diagonal tangency, k = 2
};

/// Structural constants of the k = 3 off-diagonal reduction.
struct StructuralConstantsK3 {
    double eta_c = 0.0;      // (7 + 3*sqrt(57))/8
    double theta_tilde = 0.0;
    double a_min = 0.0;      // 15/4, minimum of a(w) = w^2 + 3w + 1/w on (0, inf)
    double w_star = 0.0;     // 1/2, its location
    double b_min = 0.0;      // minimum of b(eta) on (2, inf)
    double b_min_location = 0.0;  // sqrt(7)
};

/// Diagonal branch (x = 1): positive roots y of
/// theta*y^(k+1) - y^k + y - 2*theta. At most three.
std::vector<TISolution> solve_x1(double theta, int k);

/// theta as a function of the diagonal root for k = 3:
/// alpha(y) = (y^3 - y)/(y^4 - 2). Rejects the pole at y = 2^(1/4).
double alpha(double y);

/// Location and value of the maximum of alpha on (0, 1), in closed form:
/// y0 = sqrt(1 - c + 1/c) with c = (1 + sqrt(2))^(1/3), theta_c = alpha(y0).
double alpha_argmax_closed();
double theta_c_closed();

/// Off-diagonal branch (x != 1) for k = 2, via the palindromic reduction in
/// xi = x + 1/x. Zero, two, or four solutions; tangential pairs collapse.
std::vector<TISolution> solve_xne1_k2(double theta);

/// Off-diagonal branch for k = 3, via the reduction in eta = x + 1/x and the
/// two branches of the auxiliary cubic in w = (eta - 1)*theta^2.
std::vector<TISolution> solve_xne1_k3(double theta);

StructuralConstantsK3 structural_constants_k3();

/// Tangency point of the k = 3 off-diagonal branch: Newton on the system
/// "curve meets line" + "slopes match". hat_eta() is the eta where it occurs.
double hat_theta_c();
double hat_eta();
/// Independent route: bisection on the solution count.
double hat_theta_c_by_counting();

/// Oracle classification for any k: kernel grid scan plus bisection for the
/// off-diagonal branch, polynomial isolation for the diagonal one.
PhaseRecord solve_generic(double theta, int k);

/// Closed-form classification for k in {2, 3}; falls back to the oracle for
/// 4 <= k <= 6.
PhaseRecord classify(double theta, int k);

/// All critical thresholds (k = 3 and the k = 2 analogues).
CriticalValues critical_values();

/// Descartes data of the degree-8 off-diagonal polynomial for k = 3.
int sign_changes_x8(double theta);
std::vector<double> x8_coefficients(double theta);
/// Where its sign-change count jumps 4 -> 8: sqrt((sqrt(3) - 1)/2).
double theta_c_dprime();

/// Shared helper: residual_m2 sup defect scaled by max(1, |x|, |y|).
double solution_residual(double x, double y, double theta, int k);

}  // namespace sostree
