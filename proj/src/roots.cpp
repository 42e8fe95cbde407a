#include "sostree/roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sostree {

double poly_eval(const std::vector<double>& coeffs, double x) {
    double acc = 0.0;
    for (double c : coeffs) acc = std::fma(acc, x, c);
    return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& coeffs) {
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg <= 0) return {0.0};
    std::vector<double> d(static_cast<size_t>(deg));
    for (int i = 0; i < deg; ++i) d[i] = coeffs[i] * (deg - i);
    return d;
}

int descartes_sign_changes(const std::vector<double>& coeffs) {
    int changes = 0;
    int prev = 0;
    for (double c : coeffs) {
        const int s = (c > 0.0) - (c < 0.0);
        if (s != 0) {
            if (prev != 0 && s != prev) ++changes;
            prev = s;
        }
    }
    return changes;
}

namespace {

// Magnitude of the largest term of p at x; the natural scale against which
// "p(x) is numerically zero" is judged.
double term_scale(const std::vector<double>& coeffs, double x) {
    double scale = 0.0;
    const double ax = std::fabs(x);
    double power = 1.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        scale = std::max(scale, std::fabs(*it) * power);
        power *= ax;
    }
    return std::max(scale, 1e-300);
}

double refine_bracket(const std::vector<double>& coeffs, double a, double b, double fa) {
    for (int i = 0; i < 200 && b - a > 1e-300; ++i) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = poly_eval(coeffs, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

void roots_rec(const std::vector<double>& coeffs, double lo, double hi, double tangency_tol,
               std::vector<PolyRoot>& out) {
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg < 1) return;
    if (deg == 1) {
        const double r = -coeffs[1] / coeffs[0];
        if (r > lo && r < hi) out.push_back({r, false});
        return;
    }

    std::vector<PolyRoot> crit;
    roots_rec(poly_derivative(coeffs), lo, hi, tangency_tol, crit);

    std::vector<double> breaks;
    breaks.push_back(lo);
    for (const auto& c : crit) breaks.push_back(c.x);
    breaks.push_back(hi);
    std::sort(breaks.begin(), breaks.end());

    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        if (!(b > a)) continue;
        const double fa = poly_eval(coeffs, a);
        const double fb = poly_eval(coeffs, b);
        if ((fa > 0.0 && fb < 0.0) || (fa < 0.0 && fb > 0.0)) {
            out.push_back({refine_bracket(coeffs, a, b, fa), false});
        }
    }

    // Repeated roots sit at critical points where p itself is numerically
    // zero; the signs on either side decide touching versus crossing.
    for (const auto& c : crit) {
        const double val = poly_eval(coeffs, c.x);
        if (std::fabs(val) <= tangency_tol * term_scale(coeffs, c.x)) {
            bool crossed = false;
            for (const auto& r : out)
                if (std::fabs(r.x - c.x) <= 1e-9 * std::max(1.0, std::fabs(c.x))) crossed = true;
            if (crossed) continue;
            const auto pos = std::lower_bound(breaks.begin(), breaks.end(), c.x);
            const double prev = pos == breaks.begin() ? lo : *(pos - 1);
            const double next = pos + 1 == breaks.end() ? hi : *(pos + 1);
            const double left = poly_eval(coeffs, 0.5 * (prev + c.x));
            const double right = poly_eval(coeffs, 0.5 * (c.x + next));
            out.push_back({c.x, !(left * right < 0.0)});
        }
    }

    std::sort(out.begin(), out.end(), [](const PolyRoot& a, const PolyRoot& b) { return a.x < b.x; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const PolyRoot& a, const PolyRoot& b) {
                              return std::fabs(a.x - b.x) <= 1e-12 * std::max(1.0, std::fabs(a.x));
                          }),
              out.end());
}

}  // namespace

std::vector<PolyRoot> poly_roots(const std::vector<double>& coeffs, double lo, double hi,
                                 double tangency_tol) {
    std::vector<double> c = coeffs;
    while (c.size() > 1 && c.front() == 0.0) c.erase(c.begin());
    if (c.size() > 13) throw std::invalid_argument("poly_roots: degree too large");
    if (!(hi > lo)) throw std::invalid_argument("poly_roots: empty interval");
    std::vector<PolyRoot> out;
    roots_rec(c, lo, hi, tangency_tol, out);
    return out;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, int iters) {
    double fa = f(lo);
    double fb = f(hi);
    if (fa == 0.0) return lo;
    if (fb == 0.0) return hi;
    if ((fa > 0.0) == (fb > 0.0)) throw std::invalid_argument("bisect: endpoints have equal sign");
    for (int i = 0; i < iters && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fa > 0.0)) {
            lo = mid;
            fa = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double newton_polish(const std::function<double(double)>& f, const std::function<double(double)>& df,
                     double x0, double lo, double hi, int iters) {
    double x = x0;
    for (int i = 0; i < iters; ++i) {
        const double d = df(x);
        if (d == 0.0 || !std::isfinite(d)) break;
        const double step = f(x) / d;
        const double nx = x - step;
        if (!(nx > lo) || !(nx < hi) || !std::isfinite(nx)) break;
        x = nx;
        if (std::fabs(step) <= 1e-16 * std::max(1.0, std::fabs(x))) break;
    }
    return std::fabs(f(x)) <= std::fabs(f(x0)) ? x : x0;
}

void newton2d(const std::function<std::pair<double, double>(double, double)>& f, double& x, double& y,
              int iters) {
    for (int iter = 0; iter < iters; ++iter) {
        const auto [f1, f2] = f(x, y);
        const double r0 = std::max(std::fabs(f1), std::fabs(f2));
        if (r0 == 0.0) return;
        const double hx = 1e-7 * std::max(1.0, std::fabs(x));
        const double hy = 1e-7 * std::max(1.0, std::fabs(y));
        const auto [f1x, f2x] = f(x + hx, y);
        const auto [f1y, f2y] = f(x, y + hy);
        const double j11 = (f1x - f1) / hx;
        const double j21 = (f2x - f2) / hx;
        const double j12 = (f1y - f1) / hy;
        const double j22 = (f2y - f2) / hy;
        const double det = j11 * j22 - j12 * j21;
        if (!std::isfinite(det) || std::fabs(det) < 1e-300) return;
        const double dx = (f1 * j22 - f2 * j12) / det;
        const double dy = (j11 * f2 - j21 * f1) / det;
        const double nx = x - dx;
        const double ny = y - dy;
        if (!(nx > 0.0) || !(ny > 0.0) || !std::isfinite(nx) || !std::isfinite(ny)) return;
        const auto [g1, g2] = f(nx, ny);
        if (std::max(std::fabs(g1), std::fabs(g2)) >= r0) return;
        x = nx;
        y = ny;
    }
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol * std::max(1.0, std::fabs(a) + std::fabs(b))) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace sostree
