#include "sostree/boundary_law.hpp"

#include <algorithm>
#include <cmath>

namespace sostree {

TIBoundaryLaw TIBoundaryLaw::from_z(std::vector<double> z) {
    if (z.size() < 2) throw std::invalid_argument("TIBoundaryLaw: need at least two spins");
    for (double v : z)
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("TIBoundaryLaw: entries must be positive");
    const double last = z.back();
    for (double& v : z) v /= last;
    TIBoundaryLaw law;
    law.m = static_cast<int>(z.size()) - 1;
    law.z = std::move(z);
    return law;
}

TIBoundaryLaw TIBoundaryLaw::from_xy(double x, double y, int k) {
    if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("TIBoundaryLaw: x and y must be positive");
    if (k < 1) throw std::invalid_argument("TIBoundaryLaw: k must be >= 1");
    return from_z({std::pow(x, k), std::pow(y, k), 1.0});
}

BoundaryLawField BoundaryLawField::constant(const CayleyBall& ball, const TIBoundaryLaw& law) {
    BoundaryLawField field;
    field.m = law.m;
    field.z.assign(static_cast<size_t>(ball.num_vertices()), law.z);
    return field;
}

BoundaryLawField BoundaryLawField::site_dependent(const CayleyBall& ball, std::vector<std::vector<double>> z) {
    if (static_cast<int>(z.size()) != ball.num_vertices())
        throw std::invalid_argument("BoundaryLawField: one vector per vertex required");
    const size_t width = z.empty() ? 0 : z[0].size();
    if (width < 2) throw std::invalid_argument("BoundaryLawField: need at least two spins");
    for (auto& zv : z) {
        if (zv.size() != width) throw std::invalid_argument("BoundaryLawField: ragged spin dimension");
        for (double v : zv)
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument("BoundaryLawField: entries must be positive");
        const double last = zv.back();
        for (double& v : zv) v /= last;
    }
    BoundaryLawField field;
    field.m = static_cast<int>(width) - 1;
    field.z = std::move(z);
    return field;
}

namespace {

double spin_sum(const ModelSpec& model, int i, const std::vector<double>& z) {
    double acc = 0.0;
    for (int j = 0; j <= model.m(); ++j) {
        if (!model.graph.adjacent(i, j)) continue;
        acc += activity_weight(model.activity, i, j) * z[static_cast<size_t>(j)];
    }
    return acc;
}

}  // namespace

double residual_general(const CayleyBall& ball, const ModelSpec& model, const BoundaryLawField& field) {
    if (field.m != model.m()) throw std::invalid_argument("residual_general: spin dimension mismatch");
    if (static_cast<int>(field.z.size()) != ball.num_vertices())
        throw std::invalid_argument("residual_general: field size mismatch");
    const int m = model.m();
    double worst = 0.0;
    for (int v = 0; v < ball.num_vertices(); ++v) {
        if (v == 0 || ball.is_leaf(v)) continue;
        for (int i = 0; i < m; ++i) {
            double prod = 1.0;
            for (int c : ball.children[v]) {
                const double num = spin_sum(model, i, field.at(c));
                const double den = spin_sum(model, m, field.at(c));
                if (!(den > 0.0)) throw std::invalid_argument("residual_general: zero normalizing sum");
                prod *= num / den;
            }
            worst = std::max(worst, std::fabs(field.at(v)[static_cast<size_t>(i)] - prod));
        }
    }
    return worst;
}

double residual_ti(const TIBoundaryLaw& law, const ModelSpec& model, int k) {
    if (law.m != model.m()) throw std::invalid_argument("residual_ti: spin dimension mismatch");
    if (k < 1) throw std::invalid_argument("residual_ti: k must be >= 1");
    const int m = law.m;
    const double den = spin_sum(model, m, law.z);
    if (!(den > 0.0)) throw std::invalid_argument("residual_ti: zero normalizing sum");
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
        const double ratio = spin_sum(model, i, law.z) / den;
        worst = std::max(worst, std::fabs(law.z[static_cast<size_t>(i)] - std::pow(ratio, k)));
    }
    return worst;
}

std::pair<double, double> residual_m2(double x, double y, double theta, int k) {
    if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("residual_m2: x and y must be positive");
    if (!(theta > 0.0)) throw std::invalid_argument("residual_m2: theta must be positive");
    if (k < 1) throw std::invalid_argument("residual_m2: k must be >= 1");
    const double xk = std::pow(x, k);
    const double yk = std::pow(y, k);
    const double den = std::fma(theta, yk, 1.0);
    const double d1 = x - (xk + theta * yk) / den;
    const double d2 = y - (std::fma(theta, xk, yk) + theta) / den;
    return {d1, d2};
}

}  // namespace sostree
