#include "sostree/psos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sostree/roots.hpp"

namespace sostree {

namespace {

constexpr double kTangencyTol = 1e-12;
constexpr double kBigQCap = 1e12;

void check_params(const PSOSParams& params) {
    if (!(params.theta > 0.0) || !std::isfinite(params.theta))
        throw std::invalid_argument("psos: theta must be positive and finite");
    if (!(params.p >= 1.0)) throw std::invalid_argument("psos: p must be >= 1 (or infinity)");
}

TISolution finish_solution(double x, double y, const PSOSParams& params, Branch branch, bool tangential) {
    // Same rule as the hardcore oracle: never let a joint polish move a
    // diagonal root off the invariant line.
    if (!tangential && branch == Branch::xne1)
        newton2d([&params](double a, double b) { return residual_psos(a, b, params); }, x, y);
    TISolution s;
    s.x = x;
    s.y = y;
    s.branch = branch;
    s.tangential = tangential;
    const auto [d1, d2] = residual_psos(x, y, params);
    s.residual = std::max(std::fabs(d1), std::fabs(d2)) / std::max({1.0, std::fabs(x), std::fabs(y)});
    return s;
}

}  // namespace

double PSOSParams::bigq() const {
    if (std::isinf(p)) return theta == 1.0 ? 1.0 : 0.0;
    const double lg = std::exp2(p) * std::log(theta);
    if (lg < -745.0) return 0.0;
    if (lg > std::log(kBigQCap)) return kBigQCap;
    return std::exp(lg);
}

PSOSParams make_psos(double theta, double p) {
    PSOSParams params{theta, p};
    check_params(params);
    return params;
}

std::pair<double, double> residual_psos(double x, double y, const PSOSParams& params) {
    check_params(params);
    if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("residual_psos: x and y must be positive");
    const double theta = params.theta;
    const double bigq = params.bigq();
    const double x2 = x * x;
    const double y2 = y * y;
    const double den = bigq * x2 + theta * y2 + 1.0;
    const double d1 = x - (x2 + theta * y2 + bigq) / den;
    const double d2 = y - (theta * x2 + y2 + theta) / den;
    return {d1, d2};
}

std::vector<TISolution> solve_psos_x1(const PSOSParams& params) {
    check_params(params);
    const double theta = params.theta;
    const double bigq = params.bigq();
    const std::vector<double> coeffs{theta, -1.0, bigq + 1.0, -2.0 * theta};
    const double hi = 3.0 + 2.0 / theta + 2.0 * theta;
    std::vector<TISolution> out;
    for (const PolyRoot& r : poly_roots(coeffs, 1e-300, hi, kTangencyTol)) {
        double y = r.x;
        if (!r.tangential) {
            const auto f = [&](double t) { return poly_eval(coeffs, t); };
            const auto df = [&, d = poly_derivative(coeffs)](double t) { return poly_eval(d, t); };
            y = newton_polish(f, df, y, 0.0, hi);
        }
        out.push_back(finish_solution(1.0, y, params, Branch::x1, r.tangential));
    }
    std::sort(out.begin(), out.end(), [](const TISolution& a, const TISolution& b) { return a.y < b.y; });
    if (out.size() > 3) throw std::runtime_error("solve_psos_x1: more than three roots found");
    return out;
}

double delta0(double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("delta0: theta must be positive");
    return 1.0 - 12.0 * theta + 36.0 * theta * theta - 108.0 * theta * theta * theta * theta;
}

double theta0() {
    return bisect([](double t) { return delta0(t); }, 0.05, 0.3, 200);
}

double xi12_radicand(const PSOSParams& params) {
    check_params(params);
    const double theta = params.theta;
    const double q = params.q();
    const double u = q - theta - 1.0;
    return q * (q + 2.0 * theta - 2.0) * (u * u + (theta + 1.0) * (3.0 * theta - 1.0));
}

std::optional<std::pair<double, double>> xi12(const PSOSParams& params) {
    check_params(params);
    const double theta = params.theta;
    const double bigq = params.bigq();
    const double q = params.q();
    const double c1 = theta * theta - bigq;
    const double a = c1 * c1 + theta * bigq * q * q;
    const double b = 2.0 * q * c1 - theta * q * q * q + 2.0 * theta * q * q * bigq;
    const double c = q * q * (1.0 - 2.0 * theta * q);
    if (!(a > 0.0)) return std::nullopt;  // degenerate only at theta = 1
    const double disc = b * b - 4.0 * a * c;
    const double scale = std::max({b * b, std::fabs(4.0 * a * c), 1e-300});
    if (std::fabs(disc) <= kTangencyTol * scale) {
        const double xi = -b / (2.0 * a);
        return std::make_pair(xi, xi);
    }
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    const double qq = (b <= 0.0) ? 0.5 * (root - b) : -0.5 * (root + b);
    const double xi1 = qq / a;
    const double xi2 = c / qq;
    return std::make_pair(std::min(xi1, xi2), std::max(xi1, xi2));
}

std::optional<std::pair<double, double>> xi12_literal(const PSOSParams& params) {
    check_params(params);
    const double theta = params.theta;
    const double q = params.q();
    const double rad = xi12_radicand(params);
    if (rad < 0.0) return std::nullopt;
    const double sq = theta * std::sqrt(rad);
    const double num0 = -3.0 * theta * q * q + 2.0 * (theta + 1.0) * q + 2.0 * (theta * theta - 1.0);
    const double den = (q - theta - 1.0) * (theta * q * q + (theta * theta - 1.0) * (q + theta - 1.0));
    if (den == 0.0) return std::nullopt;
    const double xi_minus = 0.5 * q * (num0 - sq) / den;
    const double xi_plus = 0.5 * q * (num0 + sq) / den;
    return std::make_pair(std::min(xi_minus, xi_plus), std::max(xi_minus, xi_plus));
}

PhaseRecord classify_psos(const PSOSParams& params) {
    check_params(params);
    PhaseRecord rec;
    rec.theta = params.theta;
    rec.k = 2;
    for (const TISolution& s : solve_psos_x1(params)) rec.solutions.push_back(s);

    if (params.theta < 1.0) {
        const auto xis = xi12(params);
        if (xis) {
            const bool tangential = xis->first == xis->second;
            const double theta = params.theta;
            const double bigq = params.bigq();
            const double q = params.q();
            std::vector<double> xi_values{xis->first};
            if (!tangential) xi_values.push_back(xis->second);
            for (double xi : xi_values) {
                if (!(xi > 2.0)) continue;
                const double xbig = 0.5 * (xi + std::sqrt(xi * xi - 4.0));
                for (double x : {1.0 / xbig, xbig}) {
                    // theta*y^2 = q*x - Q*(x^2+1) on this branch
                    const double h = q * x - bigq * (x * x + 1.0);
                    if (!(h > 0.0)) continue;
                    const double y = std::sqrt(h / theta);
                    rec.solutions.push_back(finish_solution(x, y, params, Branch::xne1, tangential));
                }
            }
            const double c1 = theta * theta - bigq;
            const double a = c1 * c1 + theta * bigq * q * q;
            const double b = 2.0 * q * c1 - theta * q * q * q + 2.0 * theta * q * q * bigq;
            const double c = q * q * (1.0 - 2.0 * theta * q);
            const double disc = b * b - 4.0 * a * c;
            const double scale = std::max({b * b, std::fabs(4.0 * a * c), 1e-300});
            if (std::fabs(disc) <= 1e-9 * scale) rec.near_tangency = true;
        }
    }

    std::sort(rec.solutions.begin(), rec.solutions.end(), [](const TISolution& a, const TISolution& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
    for (const TISolution& s : rec.solutions) rec.near_tangency |= s.tangential;
    return rec;
}

}  // namespace sostree
