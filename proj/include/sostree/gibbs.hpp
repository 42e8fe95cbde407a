#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sostree/boundary_law.hpp"
#include "sostree/lattice.hpp"

namespace sostree {

/// Exhaustive finite-volume measure: probabilities of all admissible
/// configurations of a ball, keyed by their integer codes.
struct FiniteMeasure {
    int m = 0;
    int num_vertices = 0;
    double z = 0.0;  // partition function
    std::vector<std::pair<uint64_t, double>> atoms;  // (code, probability), sorted by code

    double prob(uint64_t code) const;
};

/// code = sum_v sigma(v) * (m+1)^v over the ball's breadth-first indices.
uint64_t encode_config(const Configuration& cfg, int m);
Configuration decode_config(uint64_t code, int m, int num_vertices);

/// Unnormalized weight: product of edge activities times the boundary-law
/// factor of every depth-n vertex. Zero for inadmissible configurations.
double config_weight(const CayleyBall& ball, const ModelSpec& model, const BoundaryLawField& field,
                     const Configuration& cfg);

/// Enumerates admissible configurations only; throws guard_error when their
/// number exceeds 10^7 (counted exactly up front by dynamic programming).
FiniteMeasure finite_measure(const CayleyBall& ball, const ModelSpec& model, const BoundaryLawField& field);

/// Number of admissible configurations of the ball, by tree DP.
double count_admissible(const CayleyBall& ball, const HingeGraphSpec& graph);

/// Sup-norm distance between the radius-(n-1) restriction of the ball's
/// measure and the measure the same field induces on the radius-(n-1) ball.
/// Requires n >= 1; subject to the same enumeration guard.
double compatibility_residual(const CayleyBall& ball, const ModelSpec& model, const BoundaryLawField& field);

/// Exact single-site law at vertex v, by message passing (no size guard).
std::vector<double> site_marginal(const CayleyBall& ball, const ModelSpec& model,
                                  const BoundaryLawField& field, int v);

/// Exact joint law of (parent(v), v), row-major with the parent spin as the
/// row index. Requires v != root.
std::vector<double> pair_marginal(const CayleyBall& ball, const ModelSpec& model,
                                  const BoundaryLawField& field, int v);

}  // namespace sostree
