#pragma once

#include <utility>
#include <vector>

#include "sostree/lattice.hpp"

namespace sostree {

/// Translation-invariant boundary law: one positive vector z over spins,
/// normalized so the last entry is 1.
struct TIBoundaryLaw {
    int m = 0;
    std::vector<double> z;  // size m+1, z[m] == 1

    static TIBoundaryLaw from_z(std::vector<double> z);
    /// m = 2 reduced coordinates: z = (x^k, y^k, 1).
    static TIBoundaryLaw from_xy(double x, double y, int k);
};

/// Site-dependent boundary law: one normalized positive vector per vertex.
struct BoundaryLawField {
    int m = 0;
    std::vector<std::vector<double>> z;  // per vertex, each of size m+1

    static BoundaryLawField constant(const CayleyBall& ball, const TIBoundaryLaw& law);
    /// Normalizes each vector by its last entry; entries must be positive.
    static BoundaryLawField site_dependent(const CayleyBall& ball, std::vector<std::vector<double>> z);

    const std::vector<double>& at(int v) const { return z[static_cast<size_t>(v)]; }
};

/// Sup-norm defect of the recursive boundary-law equation over interior
/// non-root vertices of the ball (the root carries no constraint, and for
/// n <= 1 there is nothing to check, so the result is 0).
double residual_general(const CayleyBall& ball, const ModelSpec& model, const BoundaryLawField& field);

/// Sup-norm defect of the translation-invariant fixed-point equation
/// z_i = (sum_j a_ij lam_ij z_j / sum_j a_mj lam_mj z_j)^k for i < m.
double residual_ti(const TIBoundaryLaw& law, const ModelSpec& model, int k);

/// Signed defects of the two reduced m = 2 hardcore equations at (x, y):
///   first:  x - (x^k + theta*y^k) / (theta*y^k + 1)
///   second: y - (theta*x^k + y^k + theta) / (theta*y^k + 1)
std::pair<double, double> residual_m2(double x, double y, double theta, int k);

}  // namespace sostree
