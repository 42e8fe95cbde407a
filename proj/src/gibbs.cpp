#include "sostree/gibbs.hpp"

#include <algorithm>
#include <cmath>

namespace sostree {

namespace {

constexpr double kEnumGuard = 1e7;

void check_field(const CayleyBall& ball, const ModelSpec& model, const BoundaryLawField& field) {
    if (field.m != model.m()) throw std::invalid_argument("spin dimension mismatch between field and model");
    if (static_cast<int>(field.z.size()) != ball.num_vertices())
        throw std::invalid_argument("boundary-law field size does not match the ball");
}

// Visits every admissible configuration in depth-first spin order, passing
// (code, unnormalized weight). Returns the partition function.
double enumerate_admissible(const CayleyBall& ball, const ModelSpec& model, const BoundaryLawField& field,
                            const std::function<void(uint64_t, double)>& visit) {
    const int n_vertices = ball.num_vertices();
    const int m = model.m();
    std::vector<uint64_t> place(static_cast<size_t>(n_vertices));
    uint64_t pw = 1;
    for (int v = 0; v < n_vertices; ++v) {
        place[static_cast<size_t>(v)] = pw;
        pw *= static_cast<uint64_t>(m + 1);
    }

    std::vector<int> spin(static_cast<size_t>(n_vertices), 0);
    std::vector<double> weight(static_cast<size_t>(n_vertices) + 1);
    weight[0] = 1.0;
    double z = 0.0;

    // Iterative DFS over vertex index; parent spin is always assigned first
    // because children have larger breadth-first indices.
    int v = 0;
    spin[0] = -1;
    while (v >= 0) {
        if (++spin[static_cast<size_t>(v)] > m) {
            --v;
            continue;
        }
        const int s = spin[static_cast<size_t>(v)];
        const int p = ball.parent[static_cast<size_t>(v)];
        double w = weight[static_cast<size_t>(v)];
        if (p >= 0) {
            if (!model.graph.adjacent(spin[static_cast<size_t>(p)], s)) continue;
            w *= activity_weight(model.activity, spin[static_cast<size_t>(p)], s);
        }
        if (ball.is_leaf(v)) w *= field.at(v)[static_cast<size_t>(s)];
        if (v + 1 == n_vertices) {
            uint64_t code = 0;
            for (int u = 0; u < n_vertices; ++u)
                code += static_cast<uint64_t>(spin[static_cast<size_t>(u)]) * place[static_cast<size_t>(u)];
            visit(code, w);
            z += w;
        } else {
            weight[static_cast<size_t>(v) + 1] = w;
            ++v;
            spin[static_cast<size_t>(v)] = -1;
        }
    }
    return z;
}

void check_enum_guard(const CayleyBall& ball, const ModelSpec& model) {
    const double count = count_admissible(ball, model.graph);
    if (count > kEnumGuard) throw guard_error("enumeration would visit " + std::to_string(count) +
                                              " admissible configurations (limit 1e7)");
    const double bits = ball.num_vertices() * std::log2(static_cast<double>(model.m() + 1));
    if (bits >= 63.0) throw guard_error("configuration codes would overflow 64 bits");
}

}  // namespace

double FiniteMeasure::prob(uint64_t code) const {
    auto it = std::lower_bound(atoms.begin(), atoms.end(), code,
                               [](const std::pair<uint64_t, double>& a, uint64_t c) { return a.first < c; });
    if (it != atoms.end() && it->first == code) return it->second;
    return 0.0;
}

uint64_t encode_config(const Configuration& cfg, int m) {
    uint64_t code = 0;
    uint64_t pw = 1;
    for (uint8_t s : cfg) {
        if (s > m) throw std::invalid_argument("encode_config: spin out of range");
        code += static_cast<uint64_t>(s) * pw;
        pw *= static_cast<uint64_t>(m + 1);
    }
    return code;
}

Configuration decode_config(uint64_t code, int m, int num_vertices) {
    Configuration cfg(static_cast<size_t>(num_vertices));
    const uint64_t base = static_cast<uint64_t>(m + 1);
    for (int v = 0; v < num_vertices; ++v) {
        cfg[static_cast<size_t>(v)] = static_cast<uint8_t>(code % base);
        code /= base;
    }
    if (code != 0) throw std::invalid_argument("decode_config: code out of range");
    return cfg;
}

double config_weight(const CayleyBall& ball, const ModelSpec& model, const BoundaryLawField& field,
                     const Configuration& cfg) {
    check_field(ball, model, field);
    if (static_cast<int>(cfg.size()) != ball.num_vertices())
        throw std::invalid_argument("config_weight: configuration size mismatch");
    double w = 1.0;
    for (int v = 0; v < ball.num_vertices(); ++v) {
        const int s = cfg[static_cast<size_t>(v)];
        if (s > model.m()) throw std::invalid_argument("config_weight: spin out of range");
        const int p = ball.parent[static_cast<size_t>(v)];
        if (p >= 0) {
            if (!model.graph.adjacent(cfg[static_cast<size_t>(p)], s)) return 0.0;
            w *= activity_weight(model.activity, cfg[static_cast<size_t>(p)], s);
        }
        if (ball.is_leaf(v)) w *= field.at(v)[static_cast<size_t>(s)];
    }
    return w;
}

double count_admissible(const CayleyBall& ball, const HingeGraphSpec& graph) {
    const int m = graph.m;
    std::vector<std::vector<double>> cnt(static_cast<size_t>(ball.num_vertices()),
                                         std::vector<double>(static_cast<size_t>(m) + 1, 1.0));
    for (int v = ball.num_vertices() - 1; v >= 0; --v) {
        for (int i = 0; i <= m; ++i) {
            double prod = 1.0;
            for (int c : ball.children[v]) {
                double acc = 0.0;
                for (int j = 0; j <= m; ++j)
                    if (graph.adjacent(i, j)) acc += cnt[static_cast<size_t>(c)][static_cast<size_t>(j)];
                prod *= acc;
            }
            cnt[static_cast<size_t>(v)][static_cast<size_t>(i)] = prod;
        }
    }
    double total = 0.0;
    for (int i = 0; i <= m; ++i) total += cnt[0][static_cast<size_t>(i)];
    return total;
}

FiniteMeasure finite_measure(const CayleyBall& ball, const ModelSpec& model, const BoundaryLawField& field) {
    check_field(ball, model, field);
    check_enum_guard(ball, model);
    FiniteMeasure mu;
    mu.m = model.m();
    mu.num_vertices = ball.num_vertices();
    mu.atoms.reserve(static_cast<size_t>(count_admissible(ball, model.graph)));
    mu.z = enumerate_admissible(ball, model, field, [&mu](uint64_t code, double w) {
        if (w > 0.0) mu.atoms.emplace_back(code, w);
    });
    if (!(mu.z > 0.0)) throw std::invalid_argument("finite_measure: partition function is not positive");
    std::sort(mu.atoms.begin(), mu.atoms.end());
    for (auto& a : mu.atoms) a.second /= mu.z;
    return mu;
}

double compatibility_residual(const CayleyBall& ball, const ModelSpec& model, const BoundaryLawField& field) {
    check_field(ball, model, field);
    // Radius 1 would compare the root marginal (k+1 subtree factors) against
    // the field's root entry, which the radius-1 measure never consumes; the
    // marginal-consistency notion starts at radius 2.
    if (ball.n < 2) throw std::invalid_argument("compatibility_residual: needs a ball of radius >= 2");
    check_enum_guard(ball, model);

    const CayleyBall inner = build_ball(ball.k, ball.n - 1);
    BoundaryLawField inner_field;
    inner_field.m = field.m;
    inner_field.z.assign(field.z.begin(), field.z.begin() + inner.num_vertices());

    uint64_t prefix_span = 1;
    for (int v = 0; v < inner.num_vertices(); ++v) prefix_span *= static_cast<uint64_t>(model.m() + 1);

    std::vector<double> agg(static_cast<size_t>(prefix_span), 0.0);
    double z_outer = enumerate_admissible(ball, model, field, [&](uint64_t code, double w) {
        agg[static_cast<size_t>(code % prefix_span)] += w;
    });
    if (!(z_outer > 0.0)) throw std::invalid_argument("compatibility_residual: outer partition function vanishes");
    for (double& a : agg) a /= z_outer;

    std::vector<double> inner_probs(static_cast<size_t>(prefix_span), 0.0);
    double z_inner = enumerate_admissible(inner, model, inner_field, [&](uint64_t code, double w) {
        inner_probs[static_cast<size_t>(code)] += w;
    });
    if (!(z_inner > 0.0)) throw std::invalid_argument("compatibility_residual: inner partition function vanishes");
    for (double& a : inner_probs) a /= z_inner;

    double worst = 0.0;
    for (uint64_t c = 0; c < prefix_span; ++c)
        worst = std::max(worst, std::fabs(agg[static_cast<size_t>(c)] - inner_probs[static_cast<size_t>(c)]));
    return worst;
}

namespace {

struct Messages {
    std::vector<std::vector<double>> up;    // up[v][i], normalized
    std::vector<std::vector<double>> down;  // down[v][i], normalized
};

std::vector<double> child_term(const ModelSpec& model, const std::vector<double>& up_child) {
    const int m = model.m();
    std::vector<double> t(static_cast<size_t>(m) + 1, 0.0);
    for (int i = 0; i <= m; ++i) {
        double acc = 0.0;
        for (int j = 0; j <= m; ++j)
            if (model.graph.adjacent(i, j))
                acc += activity_weight(model.activity, i, j) * up_child[static_cast<size_t>(j)];
        t[static_cast<size_t>(i)] = acc;
    }
    return t;
}

void normalize(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    if (!(s > 0.0)) throw std::invalid_argument("message passing: vanishing normalization");
    for (double& x : v) x /= s;
}

Messages run_messages(const CayleyBall& ball, const ModelSpec& model, const BoundaryLawField& field) {
    check_field(ball, model, field);
    const int m = model.m();
    const int n_vertices = ball.num_vertices();
    Messages msg;
    msg.up.assign(static_cast<size_t>(n_vertices), {});
    msg.down.assign(static_cast<size_t>(n_vertices), {});

    for (int v = n_vertices - 1; v >= 0; --v) {
        if (ball.is_leaf(v)) {
            msg.up[static_cast<size_t>(v)] = field.at(v);
        } else {
            std::vector<double> up(static_cast<size_t>(m) + 1, 1.0);
            for (int c : ball.children[v]) {
                const auto t = child_term(model, msg.up[static_cast<size_t>(c)]);
                for (int i = 0; i <= m; ++i) up[static_cast<size_t>(i)] *= t[static_cast<size_t>(i)];
            }
            msg.up[static_cast<size_t>(v)] = std::move(up);
        }
        normalize(msg.up[static_cast<size_t>(v)]);
    }

    msg.down[0].assign(static_cast<size_t>(m) + 1, 1.0);
    for (int v = 0; v < n_vertices; ++v) {
        const auto& children = ball.children[v];
        if (children.empty()) continue;
        std::vector<std::vector<double>> terms;
        terms.reserve(children.size());
        for (int c : children) terms.push_back(child_term(model, msg.up[static_cast<size_t>(c)]));

        const size_t deg = children.size();
        std::vector<std::vector<double>> prefix(deg + 1, std::vector<double>(static_cast<size_t>(m) + 1, 1.0));
        std::vector<std::vector<double>> suffix(deg + 1, std::vector<double>(static_cast<size_t>(m) + 1, 1.0));
        for (size_t c = 0; c < deg; ++c)
            for (int i = 0; i <= m; ++i)
                prefix[c + 1][static_cast<size_t>(i)] = prefix[c][static_cast<size_t>(i)] * terms[c][static_cast<size_t>(i)];
        for (size_t c = deg; c-- > 0;)
            for (int i = 0; i <= m; ++i)
                suffix[c][static_cast<size_t>(i)] = suffix[c + 1][static_cast<size_t>(i)] * terms[c][static_cast<size_t>(i)];

        for (size_t ci = 0; ci < deg; ++ci) {
            const int c = children[ci];
            std::vector<double> down(static_cast<size_t>(m) + 1, 0.0);
            for (int j = 0; j <= m; ++j) {
                double acc = 0.0;
                for (int i = 0; i <= m; ++i) {
                    if (!model.graph.adjacent(i, j)) continue;
                    const double excl = prefix[ci][static_cast<size_t>(i)] * suffix[ci + 1][static_cast<size_t>(i)];
                    acc += activity_weight(model.activity, i, j) * msg.down[static_cast<size_t>(v)][static_cast<size_t>(i)] * excl;
                }
                down[static_cast<size_t>(j)] = acc;
            }
            normalize(down);
            msg.down[static_cast<size_t>(c)] = std::move(down);
        }
    }
    return msg;
}

}  // namespace

std::vector<double> site_marginal(const CayleyBall& ball, const ModelSpec& model,
                                  const BoundaryLawField& field, int v) {
    if (v < 0 || v >= ball.num_vertices()) throw std::invalid_argument("site_marginal: vertex out of range");
    const Messages msg = run_messages(ball, model, field);
    const int m = model.m();
    std::vector<double> law(static_cast<size_t>(m) + 1);
    for (int i = 0; i <= m; ++i)
        law[static_cast<size_t>(i)] =
            msg.up[static_cast<size_t>(v)][static_cast<size_t>(i)] * msg.down[static_cast<size_t>(v)][static_cast<size_t>(i)];
    normalize(law);
    return law;
}

std::vector<double> pair_marginal(const CayleyBall& ball, const ModelSpec& model,
                                  const BoundaryLawField& field, int v) {
    if (v <= 0 || v >= ball.num_vertices()) throw std::invalid_argument("pair_marginal: vertex must have a parent");
    const Messages msg = run_messages(ball, model, field);
    const int m = model.m();
    const int p = ball.parent[static_cast<size_t>(v)];

    std::vector<double> excl(static_cast<size_t>(m) + 1, 1.0);
    for (int c : ball.children[p]) {
        if (c == v) continue;
        const auto t = child_term(model, msg.up[static_cast<size_t>(c)]);
        for (int i = 0; i <= m; ++i) excl[static_cast<size_t>(i)] *= t[static_cast<size_t>(i)];
    }

    std::vector<double> joint(static_cast<size_t>(m + 1) * (m + 1), 0.0);
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
            if (!model.graph.adjacent(i, j)) continue;
            joint[static_cast<size_t>(i) * (m + 1) + j] =
                msg.down[static_cast<size_t>(p)][static_cast<size_t>(i)] * excl[static_cast<size_t>(i)] *
                activity_weight(model.activity, i, j) * msg.up[static_cast<size_t>(v)][static_cast<size_t>(j)];
        }
    }
    normalize(joint);
    return joint;
}

}  // namespace sostree
