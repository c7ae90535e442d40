#pragma once

// The monotone nonnegative cone S = {v : v_1 >= v_2 >= ... >= v_d >= 0} and
// projections onto it.

#include <Eigen/Core>

#include <random>

namespace tenscomp {

/// Exact membership test, no tolerance.
bool in_monotone_cone(const Eigen::VectorXd &v);

/// Componentwise max(v, 0).
Eigen::VectorXd project_nonneg(const Eigen::VectorXd &v);

/// Approximate projection onto S.
///
/// Clamps to the nonnegative orthant, then sweeps left to right applying the
/// projection onto S_{i+1} = {v >= 0 : v_1 >= ... >= v_{i+1}} to a vector
/// already in S_i. The result lies in S and is no farther than v from any
/// point of S, which is all a projected subgradient method needs. It is not
/// in general the Euclidean projection.
Eigen::VectorXd approx_project(const Eigen::VectorXd &v);

/// Euclidean projection onto S: decreasing isotonic regression by pooled
/// adjacent violators, then clamping at zero.
Eigen::VectorXd exact_project(const Eigen::VectorXd &v);

/// Checks ||approx_project(v) - z|| <= ||v - z|| + 1e-10 for `samples`
/// random z in S, for z = exact_project(v) and for z = 0.
bool verify_approx_contract(const Eigen::VectorXd &v, int samples,
                            std::mt19937_64 &rng);

} // namespace tenscomp
