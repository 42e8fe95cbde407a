#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sostree/boundary_law.hpp"
#include "sostree/gibbs.hpp"
#include "sostree/lattice.hpp"

namespace sostree {

/// Counter-based generator (Philox 4x32, 10 rounds). Stateless: every
/// (seed, sample, vertex) triple owns an independent substream, so batches
/// are reproducible under any execution order.
std::array<uint32_t, 4> philox4x32(uint64_t key, const std::array<uint32_t, 4>& counter);

/// Uniform double in [0, 1) from the (seed, sample, vertex) substream.
double substream_uniform(uint64_t seed, uint64_t sample, uint32_t vertex);

struct SampleBatch {
    int k = 0;
    int n = 0;
    int m = 0;
    uint64_t seed = 0;
    std::vector<Configuration> configs;
};

/// Exact ancestral sampling of the finite-volume measure defined by a
/// translation-invariant boundary law: root law first, then depth-by-depth
/// conditional draws. Exact for any positive law, not only fixed points.
SampleBatch sample(const CayleyBall& ball, const ModelSpec& model, const TIBoundaryLaw& law, int count,
                   uint64_t seed);

/// Per-depth conditional tables used by the sampler: row i is the law of a
/// child spin given parent spin i, for parents at depth d. When the law is a
/// fixed point these rows coincide with the chain's transition matrix.
std::vector<std::vector<double>> conditional_table(const CayleyBall& ball, const ModelSpec& model,
                                                   const TIBoundaryLaw& law, int parent_depth);

/// Root law the sampler draws from (equals the exact root marginal).
std::vector<double> sampler_root_law(const CayleyBall& ball, const ModelSpec& model, const TIBoundaryLaw& law);

struct EmpiricalStats {
    std::vector<std::vector<double>> site_freq;  // per depth, normalized over spins
    std::vector<double> pair_freq;               // parent-child spin pairs pooled, row-major, normalized
    int64_t num_configs = 0;
};

EmpiricalStats empirical_stats(const SampleBatch& batch);

struct ChiSquareResult {
    double stat = 0.0;
    int dof = 0;
    double pvalue = 1.0;
};

/// Goodness-of-fit of root-spin counts against an expected law. Categories
/// with expected probability 0 must stay empty (else pvalue = 0).
ChiSquareResult root_chi_square(const SampleBatch& batch, const std::vector<double>& expected);

/// Upper-tail p-value of the chi-square distribution.
double chi_square_pvalue(double stat, int dof);

/// One configuration per line, spins as digits in vertex index order.
std::string batch_to_lines(const SampleBatch& batch);

}  // namespace sostree
