#pragma once

#include <array>

#include "sostree/ti_solver.hpp"

namespace sostree {

/// Stochastic 3x3 transition matrix of the tree-indexed Markov chain attached
/// to a reduced fixed point (x, y).
struct TransitionMatrix {
    std::array<std::array<double, 3>, 3> p{};

    double operator()(int i, int j) const { return p[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
};

TransitionMatrix transition_matrix(double x, double y, double theta, int k);

/// The two non-unit eigenvalues. For the diagonal branch the closed forms are
///   lambda1 = (1 - 2*theta^2) y^k / (theta*y^(2k) + (2*theta^2+1)*y^k + 2*theta)
///   lambda2 = 1 / (theta*y^k + 1)
struct EigenPair {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

EigenPair eigen_closed_x1(double y, double theta, int k);

/// Remainder spectrum after deflating the unit eigenvalue from the
/// characteristic cubic; ordered by modulus (|lambda1| <= |lambda2|). Throws
/// when the remainder pair is complex beyond 1e-10 or when the unit
/// eigenvalue check fails.
EigenPair eigenvalues_numeric(const TransitionMatrix& tm);

/// Left stationary distribution: pi * P = pi, summing to 1.
std::array<double, 3> stationary_distribution(const TransitionMatrix& tm);

enum class KSStatus { non_extremal, inconclusive, boundary };

/// Second-eigenvalue criterion report. eta = k*lambda_sl^2 - 1 where
/// lambda_sl is the second-largest eigenvalue modulus; eta_lambda2 uses the
/// diagonal-branch closed lambda2 instead (the two agree for theta < 1 on
/// that branch). eta > 0 certifies non-extremality; eta < 0 decides nothing.
struct KSVerdict {
    double lambda1 = 0.0;  // smaller modulus
    double lambda2 = 0.0;  // larger modulus
    double eta = 0.0;
    double eta_lambda2 = 0.0;
    bool in_condition_region = false;  // eta > 0
    KSStatus status = KSStatus::boundary;
    bool routes_disagree = false;  // sign(eta) != sign(eta_lambda2)
};

KSVerdict kesten_stigum(const TISolution& solution, double theta, int k);

/// Threshold above which the large diagonal root at k = 3 certifiably fails
/// the condition: (sqrt(3) - 1) / 8^(1/4).
double ks_bound_k3();

}  // namespace sostree
