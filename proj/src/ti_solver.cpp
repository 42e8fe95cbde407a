#include "sostree/ti_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sostree/kernels.hpp"
#include "sostree/roots.hpp"

namespace sostree {

namespace {

constexpr double kTangencyTol = 1e-12;

bool solution_less(const TISolution& a, const TISolution& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

TISolution make_solution(double x, double y, double theta, int k, Branch branch, bool tangential) {
    // Only mixed-coordinate roots get the joint polish; diagonal roots are
    // already polished in one dimension, and a joint step could push x off
    // the invariant line and scramble the (x, y)-ordering.
    if (!tangential && branch == Branch::xne1)
        newton2d([theta, k](double a, double b) { return residual_m2(a, b, theta, k); }, x, y);
    TISolution s;
    s.x = x;
    s.y = y;
    s.branch = branch;
    s.tangential = tangential;
    s.residual = solution_residual(x, y, theta, k);
    return s;
}

void check_theta(double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw std::invalid_argument("theta must be positive and finite");
}

}  // namespace

double solution_residual(double x, double y, double theta, int k) {
    const auto [d1, d2] = residual_m2(x, y, theta, k);
    return std::max(std::fabs(d1), std::fabs(d2)) / std::max({1.0, std::fabs(x), std::fabs(y)});
}

std::vector<TISolution> solve_x1(double theta, int k) {
    check_theta(theta);
    if (k < 1) throw std::invalid_argument("solve_x1: k must be >= 1");
    std::vector<double> coeffs(static_cast<size_t>(k) + 2, 0.0);
    coeffs[0] = theta;                             // y^(k+1)
    coeffs[1] = -1.0;                              // y^k
    coeffs[static_cast<size_t>(k)] += 1.0;         // y
    coeffs[static_cast<size_t>(k) + 1] = -2.0 * theta;
    const double hi = 3.0 + 2.0 / theta + 2.0 * theta;

    std::vector<TISolution> out;
    for (const PolyRoot& r : poly_roots(coeffs, 1e-300, hi, kTangencyTol)) {
        double y = r.x;
        if (!r.tangential) {
            const auto f = [&](double t) { return poly_eval(coeffs, t); };
            const auto df = [&, d = poly_derivative(coeffs)](double t) { return poly_eval(d, t); };
            y = newton_polish(f, df, y, 0.0, hi);
        }
        out.push_back(make_solution(1.0, y, theta, k, Branch::x1, r.tangential));
    }
    std::sort(out.begin(), out.end(), solution_less);
    if (out.size() > 3) throw std::runtime_error("solve_x1: more than three roots found");
    return out;
}

double alpha(double y) {
    if (!(y > 0.0)) throw std::invalid_argument("alpha: y must be positive");
    const double den = y * y * y * y - 2.0;
    if (std::fabs(den) < 1e-12) throw std::invalid_argument("alpha: y too close to the pole 2^(1/4)");
    return (y * y * y - y) / den;
}

double alpha_argmax_closed() {
    const double c = std::cbrt(1.0 + std::sqrt(2.0));
    return std::sqrt(1.0 - c + 1.0 / c);
}

double theta_c_closed() {
    const double c = std::cbrt(1.0 + std::sqrt(2.0));
    const double y0sq = 1.0 - c + 1.0 / c;
    const double y0 = std::sqrt(y0sq);
    return y0 * (1.0 - c * c) / (c * (y0sq * y0sq - 2.0));
}

std::vector<TISolution> solve_xne1_k2(double theta) {
    check_theta(theta);
    const double a = theta * theta * theta * theta;
    const double b = 2.0 * theta * theta - theta;
    const double c = 1.0 - 2.0 * theta;
    const double disc = b * b - 4.0 * a * c;
    const double scale = std::max(b * b, std::fabs(4.0 * a * c));

    std::vector<double> xis;
    bool tangential = false;
    if (std::fabs(disc) <= kTangencyTol * std::max(scale, 1e-300)) {
        xis.push_back(-b / (2.0 * a));
        tangential = true;
    } else if (disc > 0.0) {
        const double root = std::sqrt(disc);
        const double q = (b <= 0.0) ? 0.5 * (root - b) : -0.5 * (root + b);
        const double xi1 = q / a;
        const double xi2 = c / q;
        xis.push_back(std::min(xi1, xi2));
        xis.push_back(std::max(xi1, xi2));
    }

    std::vector<TISolution> out;
    for (double xi : xis) {
        if (!(xi > 2.0)) continue;
        const double xbig = 0.5 * (xi + std::sqrt(xi * xi - 4.0));
        for (double x : {1.0 / xbig, xbig}) {
            const double y = std::sqrt(x / theta);
            out.push_back(make_solution(x, y, theta, 2, Branch::xne1, tangential));
        }
    }
    std::sort(out.begin(), out.end(), solution_less);
    return out;
}

namespace {

// Auxiliary functions of the k = 3 off-diagonal reduction.
double a_of_w(double w) { return w * w + 3.0 * w + 1.0 / w; }
double da_of_w(double w) { return 2.0 * w + 3.0 - 1.0 / (w * w); }

double b_of_eta(double eta) {
    return (eta * eta * eta + 7.0) / ((eta - 1.0) * (eta + 2.0));
}

double db_of_eta(double eta) {
    const double n = (eta + 1.0) * (eta + 1.0) * (eta * eta - 7.0);
    const double d = (eta - 1.0) * (eta - 1.0) * (eta + 2.0) * (eta + 2.0);
    return n / d;
}

constexpr double kAMin = 3.75;  // a(1/2)

// Inverse of a(w) on (0, 1/2] (small branch) or [1/2, inf) (large branch).
double w_branch(double e, bool small_branch) {
    const double ee = std::max(e, kAMin);
    double lo, hi;
    if (small_branch) {
        lo = 1.0 / (ee + 4.0);
        hi = 0.5;
    } else {
        lo = 0.5;
        hi = std::sqrt(ee) + 2.0;
    }
    double w = bisect([&](double t) { return a_of_w(t) - ee; }, lo, hi, 90);
    w = newton_polish([&](double t) { return a_of_w(t) - ee; }, [](double t) { return da_of_w(t); }, w, lo, hi, 4);
    return w;
}

double eta_c_closed() { return (7.0 + 3.0 * std::sqrt(57.0)) / 8.0; }

struct EtaRoot {
    double eta = 0.0;
    bool tangential = false;
};

// Roots of w_branch(b(eta)) = (eta - 1)*theta^2 on [eta_c, eta_max]. The
// large branch grows like sqrt(eta), so the crossing can sit near 1/theta^4;
// the domain must stretch accordingly.
std::vector<EtaRoot> eta_equation_roots(double theta, bool small_branch) {
    const double t2 = theta * theta;
    const double eta_c = eta_c_closed();
    const double eta_max = std::max(1e3, 8.0 / (t2 * t2));
    const auto phi = [&](double eta) { return w_branch(b_of_eta(eta), small_branch) - (eta - 1.0) * t2; };

    std::vector<double> grid;
    const int n_lin = 1200;
    for (int i = 0; i <= n_lin; ++i) grid.push_back(eta_c + (1.0 * i) / n_lin);
    const int n_log = 2400;
    const double lo = eta_c + 1.0;
    const double ratio = std::log(eta_max / lo);
    for (int i = 1; i <= n_log; ++i) grid.push_back(lo * std::exp(ratio * i / n_log));

    std::vector<double> vals(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) vals[i] = phi(grid[i]);

    std::vector<EtaRoot> out;
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        if ((vals[i] > 0.0 && vals[i + 1] < 0.0) || (vals[i] < 0.0 && vals[i + 1] > 0.0)) {
            out.push_back({bisect(phi, grid[i], grid[i + 1], 90), false});
        } else if (vals[i] == 0.0 && i > 0) {
            out.push_back({grid[i], false});
        }
    }

    // A tangency shows up as an interior minimum of |phi| that reaches zero
    // without a sign change.
    if (!small_branch && out.empty()) {
        for (size_t i = 1; i + 1 < grid.size(); ++i) {
            const double av = std::fabs(vals[i]);
            if (av < std::fabs(vals[i - 1]) && av <= std::fabs(vals[i + 1])) {
                const double eta_min =
                    golden_min([&](double eta) { return std::fabs(phi(eta)); }, grid[i - 1], grid[i + 1]);
                const double scale = std::max(1.0, (eta_min - 1.0) * t2);
                if (std::fabs(phi(eta_min)) <= 1e-8 * scale) out.push_back({eta_min, true});
            }
        }
    }
    return out;
}

}  // namespace

std::vector<TISolution> solve_xne1_k3(double theta) {
    check_theta(theta);
    std::vector<TISolution> out;
    for (bool small_branch : {true, false}) {
        for (const EtaRoot& r : eta_equation_roots(theta, small_branch)) {
            if (!(r.eta > 2.0)) continue;
            const double xbig = 0.5 * (r.eta + std::sqrt(r.eta * r.eta - 4.0));
            for (double x : {1.0 / xbig, xbig}) {
                const double y = std::cbrt((x * x + x) / theta);
                out.push_back(make_solution(x, y, theta, 3, Branch::xne1, r.tangential));
            }
        }
    }
    std::sort(out.begin(), out.end(), solution_less);
    return out;
}

StructuralConstantsK3 structural_constants_k3() {
    StructuralConstantsK3 s;
    s.eta_c = eta_c_closed();
    s.theta_tilde = std::sqrt(0.5 / (s.eta_c - 1.0));
    s.a_min = kAMin;
    s.w_star = 0.5;
    s.b_min_location = std::sqrt(7.0);
    s.b_min = b_of_eta(s.b_min_location);
    return s;
}

double hat_theta_c() {
    // Tangency of the large-branch curve against the line (eta - 1)*t in the
    // variable t = theta^2: value match plus slope match.
    const auto g1 = [](double eta, double t) { return w_branch(b_of_eta(eta), false) - (eta - 1.0) * t; };
    const auto g2 = [](double eta, double t) {
        const double w = w_branch(b_of_eta(eta), false);
        return db_of_eta(eta) / da_of_w(w) - t;
    };
    double eta = 5.0;
    double t = 0.2316;
    for (int iter = 0; iter < 80; ++iter) {
        const double f1 = g1(eta, t);
        const double f2 = g2(eta, t);
        const double he = 1e-8 * std::max(1.0, std::fabs(eta));
        const double j11 = (g1(eta + he, t) - f1) / he;
        const double j21 = (g2(eta + he, t) - f2) / he;
        const double j12 = -(eta - 1.0);
        const double j22 = -1.0;
        const double det = j11 * j22 - j12 * j21;
        if (!std::isfinite(det) || std::fabs(det) < 1e-300) break;
        const double de = (f1 * j22 - f2 * j12) / det;
        const double dt = (j11 * f2 - j21 * f1) / det;
        eta -= de;
        t -= dt;
        if (std::fabs(de) + std::fabs(dt) < 1e-15) break;
    }
    if (!(t > 0.0)) throw std::runtime_error("hat_theta_c: Newton iteration failed");
    return std::sqrt(t);
}

double hat_eta() {
    const double t = hat_theta_c() * hat_theta_c();
    // With t known, the tangent point is where the slopes match. The slope of
    // the large branch falls monotonically from +inf just above eta_c to 0.
    return bisect(
        [&](double eta) {
            const double w = w_branch(b_of_eta(eta), false);
            return db_of_eta(eta) / da_of_w(w) - t;
        },
        eta_c_closed() + 1e-6, 1000.0, 90);
}

double hat_theta_c_by_counting() {
    const auto has_crossing = [](double theta) {
        for (const EtaRoot& r : eta_equation_roots(theta, false))
            if (!r.tangential) return true;
        return false;
    };
    double lo = 0.46, hi = 0.50;
    if (!has_crossing(lo) || has_crossing(hi))
        throw std::runtime_error("hat_theta_c_by_counting: bracket does not straddle the threshold");
    for (int i = 0; i < 45; ++i) {
        const double mid = 0.5 * (lo + hi);
        (has_crossing(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Pieces of the sign-equivalent off-diagonal defect, for tangency scaling.
void xne1_defect_parts(double x, double theta, int k, double& numk_out, double& rest_out) {
    const double theta2 = theta * theta;
    double tkm1 = 1.0;
    for (int j = 1; j < k; ++j) tkm1 *= theta;
    double s = x;
    for (int j = 2; j < k; ++j) s = std::fma(s, x, x);
    double xk = x;
    for (int j = 2; j <= k; ++j) xk *= x;
    const double num = std::fma(theta2, xk + 1.0, s);
    double numk = num;
    for (int j = 2; j <= k; ++j) numk *= num;
    const double sp1 = s + 1.0;
    double sp1k = sp1;
    for (int j = 2; j <= k; ++j) sp1k *= sp1;
    numk_out = numk;
    rest_out = (tkm1 * s) * sp1k;
}

double xne1_scalar_defect(double x, double theta, int k) {
    double out;
    kernels::xne1_defect(&x, &out, 1, theta, k);
    return out;
}

double reduced_y(double x, double theta, int k) {
    double s = x;
    for (int j = 2; j < k; ++j) s = std::fma(s, x, x);
    return std::pow(s / theta, 1.0 / k);
}

}  // namespace

PhaseRecord solve_generic(double theta, int k) {
    check_theta(theta);
    if (k < 2) throw std::invalid_argument("solve_generic: k must be >= 2");
    PhaseRecord rec;
    rec.theta = theta;
    rec.k = k;

    for (const TISolution& s : solve_x1(theta, k)) rec.solutions.push_back(s);

    const double t2 = theta * theta;
    const double xmax = std::max(1e6, 8.0 / (t2 * t2));
    const double xmin = 1e-6;
    const int n_grid = 200001;
    std::vector<double> grid(static_cast<size_t>(n_grid));
    std::vector<double> vals(static_cast<size_t>(n_grid));
    const double step = std::log(xmax / xmin) / (n_grid - 1);
    for (int i = 0; i < n_grid; ++i) grid[static_cast<size_t>(i)] = xmin * std::exp(step * i);
    kernels::xne1_defect(grid.data(), vals.data(), static_cast<size_t>(n_grid), theta, k);

    std::vector<std::pair<double, bool>> xroots;  // (x, tangential)
    for (int i = 0; i + 1 < n_grid; ++i) {
        const double va = vals[static_cast<size_t>(i)];
        const double vb = vals[static_cast<size_t>(i) + 1];
        if ((va > 0.0 && vb < 0.0) || (va < 0.0 && vb > 0.0)) {
            const double x = bisect([&](double t) { return xne1_scalar_defect(t, theta, k); },
                                    grid[static_cast<size_t>(i)], grid[static_cast<size_t>(i) + 1], 200);
            xroots.emplace_back(x, false);
        } else if (va == 0.0 && i > 0) {
            xroots.emplace_back(grid[static_cast<size_t>(i)], false);
        }
    }

    if (xroots.empty()) {
        for (int i = 1; i + 1 < n_grid; ++i) {
            const double av = std::fabs(vals[static_cast<size_t>(i)]);
            if (av < std::fabs(vals[static_cast<size_t>(i) - 1]) && av <= std::fabs(vals[static_cast<size_t>(i) + 1])) {
                const double x = golden_min([&](double t) { return std::fabs(xne1_scalar_defect(t, theta, k)); },
                                            grid[static_cast<size_t>(i) - 1], grid[static_cast<size_t>(i) + 1]);
                double numk, rest;
                xne1_defect_parts(x, theta, k, numk, rest);
                const double scale = std::max(1.0, std::fabs(numk) + std::fabs(rest));
                if (std::fabs(xne1_scalar_defect(x, theta, k)) <= 1e-10 * scale) xroots.emplace_back(x, true);
            }
        }
    }

    for (const auto& [x, tangential] : xroots) {
        const double y = reduced_y(x, theta, k);
        rec.solutions.push_back(make_solution(x, y, theta, k, Branch::xne1, tangential));
    }

    std::sort(rec.solutions.begin(), rec.solutions.end(), solution_less);
    rec.solutions.erase(std::unique(rec.solutions.begin(), rec.solutions.end(),
                                    [](const TISolution& a, const TISolution& b) {
                                        return std::fabs(a.x - b.x) <= 1e-9 * std::max(1.0, std::fabs(a.x)) &&
                                               std::fabs(a.y - b.y) <= 1e-9 * std::max(1.0, std::fabs(a.y));
                                    }),
                        rec.solutions.end());
    for (const TISolution& s : rec.solutions) rec.near_tangency |= s.tangential;
    return rec;
}

PhaseRecord classify(double theta, int k) {
    check_theta(theta);
    if (k < 2 || k > 6) throw std::invalid_argument("classify: k must lie in [2, 6]");
    if (k > 3) return solve_generic(theta, k);

    PhaseRecord rec;
    rec.theta = theta;
    rec.k = k;
    for (const TISolution& s : solve_x1(theta, k)) rec.solutions.push_back(s);
    const auto off = (k == 2) ? solve_xne1_k2(theta) : solve_xne1_k3(theta);
    for (const TISolution& s : off) rec.solutions.push_back(s);
    std::sort(rec.solutions.begin(), rec.solutions.end(), solution_less);

    for (const TISolution& s : rec.solutions) rec.near_tangency |= s.tangential;
    if (k == 2) {
        const double a = theta * theta * theta * theta;
        const double b = 2.0 * theta * theta - theta;
        const double c = 1.0 - 2.0 * theta;
        const double disc = b * b - 4.0 * a * c;
        const double scale = std::max({b * b, std::fabs(4.0 * a * c), 1e-300});
        if (std::fabs(disc) <= 1e-9 * scale) rec.near_tangency = true;
    }
    return rec;
}

CriticalValues critical_values() {
    CriticalValues cv;
    cv.theta_c = theta_c_closed();
    cv.y0 = alpha_argmax_closed();
    const StructuralConstantsK3 s = structural_constants_k3();
    cv.theta_tilde = s.theta_tilde;
    cv.eta_c = s.eta_c;
    cv.hat_theta_c = hat_theta_c();
    // Discriminant zero of the k = 2 diagonal cubic in the vanishing-Q limit:
    // 1 - 12*theta + 36*theta^2 - 108*theta^4, strictly decreasing on (0, 0.3).
    cv.theta0 = bisect(
        [](double t) { return 1.0 - 12.0 * t + 36.0 * t * t - 108.0 * t * t * t * t; }, 0.05, 0.3, 200);
    cv.theta0_prime = (std::sqrt(5.0) - 1.0) / 4.0;
    return cv;
}

std::vector<double> x8_coefficients(double theta) {
    const double t2 = theta * theta;
    const double t4 = t2 * t2;
    const double t6 = t4 * t2;
    const double c8 = t6;
    const double c7 = -t6 + 3.0 * t4 - t2;
    const double c6 = t6;
    const double c5 = 2.0 * t6 - 3.0 * t2 + 1.0;
    const double c4 = -2.0 * t6 + 6.0 * t4 - 7.0 * t2 + 2.0;
    return {c8, c7, c6, c5, c4, c5, c6, c7, c8};
}

int sign_changes_x8(double theta) {
    check_theta(theta);
    return descartes_sign_changes(x8_coefficients(theta));
}

double theta_c_dprime() { return std::sqrt((std::sqrt(3.0) - 1.0) / 2.0); }

}  // namespace sostree
