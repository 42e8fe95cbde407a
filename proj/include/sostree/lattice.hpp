#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sostree {

/// Thrown when an operation would exceed the exhaustive-enumeration size guard.
class guard_error : public std::runtime_error {
public:
    explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

/// Rooted ball of radius n in the Cayley tree of order k: the root has k+1
/// children, every other internal vertex has k. Vertices are indexed
/// breadth-first with children in creation order, so vertex 0 is the root and
/// depth is non-decreasing in the index.
struct CayleyBall {
    int k = 0;
    int n = 0;
    std::vector<int> parent;                 // parent[0] == -1
    std::vector<int> depth;                  // depth[v] in [0, n]
    std::vector<std::vector<int>> children;  // children[v] in index order
    std::vector<std::vector<int>> spheres;   // spheres[r] = vertices at depth r

    int num_vertices() const { return static_cast<int>(parent.size()); }
    bool is_leaf(int v) const { return depth[v] == n; }
    const std::vector<int>& sphere(int r) const { return spheres.at(r); }
};

CayleyBall build_ball(int k, int n);

/// Children of v (empty for leaves).
const std::vector<int>& successors(const CayleyBall& ball, int v);

/// Spins {0,...,m} with an edge between i and j iff |i-j| <= 1.
struct HingeGraphSpec {
    int m = 0;
    std::vector<uint8_t> adjacency;  // (m+1)x(m+1), row-major

    bool adjacent(int i, int j) const { return adjacency[static_cast<size_t>(i) * (m + 1) + j] != 0; }
};

HingeGraphSpec hinge_graph(int m);

/// All spin pairs allowed; constraint graph of the smooth family.
HingeGraphSpec complete_graph(int m);

enum class ModelVariant { inf_sos, p_sos };

/// Edge activity rule: theta on adjacent spins for the hardcore variant, or
/// theta^(|i-j|^p) for the smooth family. p may be infinity, which reproduces
/// the hardcore weights for theta != 1 and the all-ones weights at theta == 1.
struct ActivitySpec {
    ModelVariant variant = ModelVariant::inf_sos;
    double theta = 1.0;
    double p = 0.0;  // only meaningful for p_sos; may be +infinity

    double J() const;
};

/// Model = admissibility graph + activity rule; the pair every measure-level
/// routine consumes.
struct ModelSpec {
    HingeGraphSpec graph;
    ActivitySpec activity;

    int m() const { return graph.m; }
};

ModelSpec make_model(int m, ModelVariant variant, double theta, double p = 0.0);

double activity_weight(const ActivitySpec& spec, int i, int j);

/// Spin assignment, one entry per vertex in ball index order.
using Configuration = std::vector<uint8_t>;

bool is_admissible(const HingeGraphSpec& graph, const CayleyBall& ball, const Configuration& cfg);

}  // namespace sostree
