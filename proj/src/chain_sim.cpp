#include "sostree/chain_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sostree {

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

void philox_round(std::array<uint32_t, 4>& c, uint32_t k0, uint32_t k1) {
    const uint64_t p0 = uint64_t{kPhiloxM0} * c[0];
    const uint64_t p1 = uint64_t{kPhiloxM1} * c[2];
    const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
    const uint32_t lo0 = static_cast<uint32_t>(p0);
    const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
    const uint32_t lo1 = static_cast<uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

double edge_weight(const ModelSpec& model, int i, int j) {
    if (!model.graph.adjacent(i, j)) return 0.0;
    return activity_weight(model.activity, i, j);
}

/// Subtree weight vectors by depth: R[n] = z, and for 1 <= d < n
/// R[d](i) = (sum_j w_ij R[d+1](j))^k, max-normalized per depth. R[0] is the
/// root's slot and stays empty; the root aggregates k+1 child factors instead.
std::vector<std::vector<double>> subtree_tables(const CayleyBall& ball, const ModelSpec& model,
                                                const TIBoundaryLaw& law) {
    const int s = model.m() + 1;
    std::vector<std::vector<double>> R(static_cast<size_t>(ball.n) + 1);
    R[static_cast<size_t>(ball.n)] = law.z;
    for (int d = ball.n - 1; d >= 1; --d) {
        std::vector<double> row(static_cast<size_t>(s), 0.0);
        double mx = 0.0;
        for (int i = 0; i < s; ++i) {
            double acc = 0.0;
            for (int j = 0; j < s; ++j) acc += edge_weight(model, i, j) * R[static_cast<size_t>(d) + 1][static_cast<size_t>(j)];
            row[static_cast<size_t>(i)] = std::pow(acc, static_cast<double>(ball.k));
            mx = std::max(mx, row[static_cast<size_t>(i)]);
        }
        if (!(mx > 0.0)) throw std::runtime_error("subtree weights vanished; activities admit no configuration");
        for (double& v : row) v /= mx;
        R[static_cast<size_t>(d)] = std::move(row);
    }
    return R;
}

std::vector<double> normalized(std::vector<double> v) {
    double total = 0.0;
    for (double x : v) total += x;
    if (!(total > 0.0)) throw std::runtime_error("cannot normalize an all-zero law");
    for (double& x : v) x /= total;
    return v;
}

int draw_from(const std::vector<double>& pmf, double u) {
    double acc = 0.0;
    for (size_t j = 0; j + 1 < pmf.size(); ++j) {
        acc += pmf[j];
        if (u < acc) return static_cast<int>(j);
    }
    return static_cast<int>(pmf.size()) - 1;
}

}  // namespace

std::array<uint32_t, 4> philox4x32(uint64_t key, const std::array<uint32_t, 4>& counter) {
    std::array<uint32_t, 4> c = counter;
    uint32_t k0 = static_cast<uint32_t>(key);
    uint32_t k1 = static_cast<uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
        philox_round(c, k0, k1);
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return c;
}

double substream_uniform(uint64_t seed, uint64_t sample, uint32_t vertex) {
    const std::array<uint32_t, 4> counter = {vertex, static_cast<uint32_t>(sample),
                                             static_cast<uint32_t>(sample >> 32), 0u};
    const std::array<uint32_t, 4> out = philox4x32(seed, counter);
    const uint64_t bits = (uint64_t{out[1]} << 32) | out[0];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::vector<double> sampler_root_law(const CayleyBall& ball, const ModelSpec& model, const TIBoundaryLaw& law) {
    const int s = model.m() + 1;
    if (law.m != model.m()) throw std::invalid_argument("boundary law and model disagree on the spin range");
    if (ball.n == 0) return normalized(law.z);
    const auto R = subtree_tables(ball, model, law);
    const std::vector<double>& child = ball.n == 1 ? law.z : R[1];
    std::vector<double> root(static_cast<size_t>(s), 0.0);
    for (int i = 0; i < s; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += edge_weight(model, i, j) * child[static_cast<size_t>(j)];
        root[static_cast<size_t>(i)] = std::pow(acc, static_cast<double>(ball.k) + 1.0);
    }
    return normalized(root);
}

std::vector<std::vector<double>> conditional_table(const CayleyBall& ball, const ModelSpec& model,
                                                   const TIBoundaryLaw& law, int parent_depth) {
    if (parent_depth < 0 || parent_depth >= ball.n) throw std::invalid_argument("parent depth outside the ball");
    if (law.m != model.m()) throw std::invalid_argument("boundary law and model disagree on the spin range");
    const int s = model.m() + 1;
    const auto R = subtree_tables(ball, model, law);
    const std::vector<double>& child =
        parent_depth + 1 == ball.n ? law.z : R[static_cast<size_t>(parent_depth) + 1];
    std::vector<std::vector<double>> table(static_cast<size_t>(s));
    for (int i = 0; i < s; ++i) {
        std::vector<double> row(static_cast<size_t>(s), 0.0);
        for (int j = 0; j < s; ++j) row[static_cast<size_t>(j)] = edge_weight(model, i, j) * child[static_cast<size_t>(j)];
        table[static_cast<size_t>(i)] = normalized(std::move(row));
    }
    return table;
}

SampleBatch sample(const CayleyBall& ball, const ModelSpec& model, const TIBoundaryLaw& law, int count,
                   uint64_t seed) {
    if (count < 0) throw std::invalid_argument("sample count must be non-negative");
    SampleBatch batch;
    batch.k = ball.k;
    batch.n = ball.n;
    batch.m = model.m();
    batch.seed = seed;
    batch.configs.reserve(static_cast<size_t>(count));

    const std::vector<double> root = sampler_root_law(ball, model, law);
    std::vector<std::vector<std::vector<double>>> tables;
    tables.reserve(static_cast<size_t>(ball.n));
    for (int d = 0; d < ball.n; ++d) tables.push_back(conditional_table(ball, model, law, d));

    const int num_vertices = ball.num_vertices();
    for (int s = 0; s < count; ++s) {
        Configuration cfg(static_cast<size_t>(num_vertices), 0);
        cfg[0] = static_cast<uint8_t>(draw_from(root, substream_uniform(seed, static_cast<uint64_t>(s), 0)));
        for (int v = 1; v < num_vertices; ++v) {
            const int p = ball.parent[static_cast<size_t>(v)];
            const auto& row = tables[static_cast<size_t>(ball.depth[static_cast<size_t>(v)]) - 1][cfg[static_cast<size_t>(p)]];
            const double u = substream_uniform(seed, static_cast<uint64_t>(s), static_cast<uint32_t>(v));
            cfg[static_cast<size_t>(v)] = static_cast<uint8_t>(draw_from(row, u));
        }
        batch.configs.push_back(std::move(cfg));
    }
    return batch;
}

EmpiricalStats empirical_stats(const SampleBatch& batch) {
    const CayleyBall ball = build_ball(batch.k, batch.n);
    const int s = batch.m + 1;
    EmpiricalStats stats;
    stats.num_configs = static_cast<int64_t>(batch.configs.size());
    stats.site_freq.assign(static_cast<size_t>(batch.n) + 1, std::vector<double>(static_cast<size_t>(s), 0.0));
    stats.pair_freq.assign(static_cast<size_t>(s) * static_cast<size_t>(s), 0.0);

    int64_t pairs = 0;
    for (const Configuration& cfg : batch.configs) {
        for (int v = 0; v < ball.num_vertices(); ++v) {
            stats.site_freq[static_cast<size_t>(ball.depth[static_cast<size_t>(v)])][cfg[static_cast<size_t>(v)]] += 1.0;
            if (v > 0) {
                const int p = ball.parent[static_cast<size_t>(v)];
                stats.pair_freq[static_cast<size_t>(cfg[static_cast<size_t>(p)]) * static_cast<size_t>(s) +
                                cfg[static_cast<size_t>(v)]] += 1.0;
                ++pairs;
            }
        }
    }
    for (int d = 0; d <= batch.n; ++d) {
        const double total = static_cast<double>(stats.num_configs) * static_cast<double>(ball.sphere(d).size());
        if (total > 0.0)
            for (double& f : stats.site_freq[static_cast<size_t>(d)]) f /= total;
    }
    if (pairs > 0)
        for (double& f : stats.pair_freq) f /= static_cast<double>(pairs);
    return stats;
}

double chi_square_pvalue(double stat, int dof) {
    if (dof <= 0) return 1.0;
    if (!(stat > 0.0)) return 1.0;
    if (std::isinf(stat)) return 0.0;
    const double a = 0.5 * dof;
    const double x = 0.5 * stat;
    const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) {
        // Lower regularized incomplete gamma by series; return its complement.
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(log_prefix);
    }
    // Upper regularized incomplete gamma by modified Lentz continued fraction.
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(log_prefix) * h;
}

ChiSquareResult root_chi_square(const SampleBatch& batch, const std::vector<double>& expected) {
    const int s = batch.m + 1;
    if (static_cast<int>(expected.size()) != s) throw std::invalid_argument("expected law has wrong size");
    std::vector<int64_t> counts(static_cast<size_t>(s), 0);
    for (const Configuration& cfg : batch.configs) ++counts[cfg[0]];
    const double total = static_cast<double>(batch.configs.size());

    ChiSquareResult result;
    int live = 0;
    for (int i = 0; i < s; ++i) {
        if (expected[static_cast<size_t>(i)] > 0.0) {
            ++live;
            const double mean = total * expected[static_cast<size_t>(i)];
            const double diff = static_cast<double>(counts[static_cast<size_t>(i)]) - mean;
            result.stat += diff * diff / mean;
        } else if (counts[static_cast<size_t>(i)] > 0) {
            result.stat = std::numeric_limits<double>::infinity();
        }
    }
    result.dof = live - 1;
    result.pvalue = chi_square_pvalue(result.stat, result.dof);
    return result;
}

std::string batch_to_lines(const SampleBatch& batch) {
    std::string out;
    if (batch.configs.empty()) return out;
    out.reserve(batch.configs.size() * (batch.configs[0].size() + 1));
    for (const Configuration& cfg : batch.configs) {
        for (uint8_t spin : cfg) out.push_back(static_cast<char>('0' + spin));
        out.push_back('\n');
    }
    return out;
}

}  // namespace sostree
