#include "sostree/extremality.hpp"

#include <cmath>
#include <stdexcept>

namespace sostree {

namespace {

constexpr double kStatusBand = 1e-9;

void check_inputs(double x, double y, double theta, int k) {
    if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("transition_matrix: x and y must be positive");
    if (!(theta > 0.0)) throw std::invalid_argument("transition_matrix: theta must be positive");
    if (k < 1) throw std::invalid_argument("transition_matrix: k must be >= 1");
}

}  // namespace

TransitionMatrix transition_matrix(double x, double y, double theta, int k) {
    check_inputs(x, y, theta, k);
    const double xk = std::pow(x, k);
    const double yk = std::pow(y, k);
    TransitionMatrix tm;
    const double r0 = xk + theta * yk;
    tm.p[0] = {xk / r0, theta * yk / r0, 0.0};
    const double r1 = theta * xk + yk + theta;
    tm.p[1] = {theta * xk / r1, yk / r1, theta / r1};
    const double r2 = theta * yk + 1.0;
    tm.p[2] = {0.0, theta * yk / r2, 1.0 / r2};
    return tm;
}

EigenPair eigen_closed_x1(double y, double theta, int k) {
    if (!(y > 0.0) || !(theta > 0.0) || k < 1) throw std::invalid_argument("eigen_closed_x1: bad inputs");
    const double yk = std::pow(y, k);
    EigenPair e;
    e.lambda1 = (1.0 - 2.0 * theta * theta) * yk /
                (theta * yk * yk + (2.0 * theta * theta + 1.0) * yk + 2.0 * theta);
    e.lambda2 = 1.0 / (theta * yk + 1.0);
    return e;
}

EigenPair eigenvalues_numeric(const TransitionMatrix& tm) {
    const auto& p = tm.p;
    for (int i = 0; i < 3; ++i) {
        double row = 0.0;
        for (int j = 0; j < 3; ++j) {
            if (p[i][j] < -1e-14) throw std::invalid_argument("eigenvalues_numeric: negative entry");
            row += p[i][j];
        }
        if (std::fabs(row - 1.0) > 1e-10) throw std::invalid_argument("eigenvalues_numeric: row sums must be 1");
    }

    const double tr = p[0][0] + p[1][1] + p[2][2];
    const double m2 = (p[0][0] * p[1][1] - p[0][1] * p[1][0]) + (p[0][0] * p[2][2] - p[0][2] * p[2][0]) +
                      (p[1][1] * p[2][2] - p[1][2] * p[2][1]);
    const double det = p[0][0] * (p[1][1] * p[2][2] - p[1][2] * p[2][1]) -
                       p[0][1] * (p[1][0] * p[2][2] - p[1][2] * p[2][0]) +
                       p[0][2] * (p[1][0] * p[2][1] - p[1][1] * p[2][0]);

    // Characteristic cubic at the unit eigenvalue.
    const double chi1 = 1.0 - tr + m2 - det;
    if (std::fabs(chi1) > 1e-10) throw std::runtime_error("eigenvalues_numeric: unit eigenvalue check failed");

    // Remainder quadratic lambda^2 - (tr - 1) lambda + det.
    const double s = tr - 1.0;
    double disc = s * s - 4.0 * det;
    if (disc < 0.0) {
        if (std::sqrt(-disc) * 0.5 > 1e-10)
            throw std::runtime_error("eigenvalues_numeric: complex remainder spectrum");
        disc = 0.0;
    }
    const double root = std::sqrt(disc);
    double a = 0.5 * (s - root);
    double b = 0.5 * (s + root);
    if (std::fabs(a) > std::fabs(b)) std::swap(a, b);
    return {a, b};
}

std::array<double, 3> stationary_distribution(const TransitionMatrix& tm) {
    // Solve pi (P - I) = 0 with the normalization sum(pi) = 1: three linear
    // equations in pi (one balance equation is redundant and replaced).
    const auto& p = tm.p;
    double a[3][4] = {
        {p[0][0] - 1.0, p[1][0], p[2][0], 0.0},
        {p[0][1], p[1][1] - 1.0, p[2][1], 0.0},
        {1.0, 1.0, 1.0, 1.0},
    };
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) < 1e-300) throw std::runtime_error("stationary_distribution: singular system");
        for (int c = 0; c < 4; ++c) std::swap(a[col][c], a[piv][c]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return {a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]};
}

KSVerdict kesten_stigum(const TISolution& solution, double theta, int k) {
    const TransitionMatrix tm = transition_matrix(solution.x, solution.y, theta, k);
    const EigenPair numeric = eigenvalues_numeric(tm);

    KSVerdict v;
    v.lambda1 = numeric.lambda1;
    v.lambda2 = numeric.lambda2;
    const double sl = std::fabs(numeric.lambda2);
    v.eta = k * sl * sl - 1.0;

    if (std::fabs(solution.x - 1.0) <= 1e-9) {
        const EigenPair closed = eigen_closed_x1(solution.y, theta, k);
        v.eta_lambda2 = k * closed.lambda2 * closed.lambda2 - 1.0;
    } else {
        v.eta_lambda2 = v.eta;
    }

    v.in_condition_region = v.eta > 0.0;
    if (v.eta > kStatusBand)
        v.status = KSStatus::non_extremal;
    else if (v.eta < -kStatusBand)
        v.status = KSStatus::inconclusive;
    else
        v.status = KSStatus::boundary;
    v.routes_disagree = (v.eta > 0.0) != (v.eta_lambda2 > 0.0);
    return v;
}

double ks_bound_k3() { return (std::sqrt(3.0) - 1.0) / std::pow(8.0, 0.25); }

}  // namespace sostree
