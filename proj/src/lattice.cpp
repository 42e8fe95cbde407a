#include "sostree/lattice.hpp"

#include <cmath>
#include <limits>

namespace sostree {

CayleyBall build_ball(int k, int n) {
    if (k < 1) throw std::invalid_argument("build_ball: k must be >= 1");
    if (n < 0) throw std::invalid_argument("build_ball: n must be >= 0");

    CayleyBall ball;
    ball.k = k;
    ball.n = n;
    ball.parent.push_back(-1);
    ball.depth.push_back(0);
    ball.children.emplace_back();
    ball.spheres.assign(static_cast<size_t>(n) + 1, {});
    ball.spheres[0].push_back(0);

    for (int r = 1; r <= n; ++r) {
        for (int p : ball.spheres[r - 1]) {
            const int fanout = (p == 0) ? k + 1 : k;
            for (int c = 0; c < fanout; ++c) {
                const int v = ball.num_vertices();
                ball.parent.push_back(p);
                ball.depth.push_back(r);
                ball.children.emplace_back();
                ball.children[p].push_back(v);
                ball.spheres[r].push_back(v);
            }
        }
    }
    return ball;
}

const std::vector<int>& successors(const CayleyBall& ball, int v) {
    if (v < 0 || v >= ball.num_vertices()) throw std::invalid_argument("successors: vertex out of range");
    return ball.children[v];
}

HingeGraphSpec hinge_graph(int m) {
    if (m < 1) throw std::invalid_argument("hinge_graph: m must be >= 1");
    HingeGraphSpec g;
    g.m = m;
    g.adjacency.assign(static_cast<size_t>(m + 1) * (m + 1), 0);
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j)
            if (std::abs(i - j) <= 1) g.adjacency[static_cast<size_t>(i) * (m + 1) + j] = 1;
    return g;
}

HingeGraphSpec complete_graph(int m) {
    if (m < 1) throw std::invalid_argument("complete_graph: m must be >= 1");
    HingeGraphSpec g;
    g.m = m;
    g.adjacency.assign(static_cast<size_t>(m + 1) * (m + 1), 1);
    return g;
}

double ActivitySpec::J() const {
    return std::log(theta);
}

ModelSpec make_model(int m, ModelVariant variant, double theta, double p) {
    if (theta < 0.0) throw std::invalid_argument("make_model: theta must be >= 0");
    if (variant == ModelVariant::p_sos && !(p >= 1.0))
        throw std::invalid_argument("make_model: p must be >= 1 (or infinity)");
    ModelSpec model;
    model.graph = (variant == ModelVariant::inf_sos) ? hinge_graph(m) : complete_graph(m);
    model.activity.variant = variant;
    model.activity.theta = theta;
    model.activity.p = p;
    return model;
}

double activity_weight(const ActivitySpec& spec, int i, int j) {
    const int d = std::abs(i - j);
    if (d == 0) return 1.0;
    if (d == 1) return spec.theta;
    if (spec.variant == ModelVariant::inf_sos) return 0.0;
    if (std::isinf(spec.p)) return spec.theta == 1.0 ? 1.0 : 0.0;
    // theta^(d^p), evaluated in log space so large p degrades to 0/1/overflow
    // clamp instead of NaN.
    const double lg = std::pow(static_cast<double>(d), spec.p) * std::log(spec.theta);
    if (lg < -745.0) return 0.0;
    if (lg > 690.0) return 1e300;
    return std::exp(lg);
}

bool is_admissible(const HingeGraphSpec& graph, const CayleyBall& ball, const Configuration& cfg) {
    if (static_cast<int>(cfg.size()) != ball.num_vertices())
        throw std::invalid_argument("is_admissible: configuration size mismatch");
    for (int v = 0; v < ball.num_vertices(); ++v) {
        if (cfg[v] > graph.m) throw std::invalid_argument("is_admissible: spin out of range");
        if (ball.parent[v] >= 0 && !graph.adjacent(cfg[ball.parent[v]], cfg[v])) return false;
    }
    return true;
}

}  // namespace sostree
