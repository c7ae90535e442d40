#pragma once

// ADMM for entry-sampled tensor completion with a spectral penalty on every
// matricization:
//
//     min_W  ||y - I(W)||^2 + gamma * sum_n Psi(W_(n)).
//
// Splitting W = B_n with multipliers A_n gives the augmented Lagrangian
//
//     L = (1/gamma) ||y - I(W)||^2
//         + sum_n [ Psi(B_n(n)) - <A_n, W - B_n> + beta/2 ||W - B_n||^2 ]
//
// and the iteration
//
//     W   <- argmin_W L                      (closed form, I*I is diagonal)
//     B_n <- fold(prox_{Psi/beta}(unfold(W - A_n / beta, n)))
//     A_n <- A_n - beta (W - B_n).

#include "tenscomp/gauge_prox.hpp"
#include "tenscomp/tensor.hpp"

#include <vector>

namespace tenscomp {

struct Observation {
    std::vector<Index> index; // 1-based multi-index
    double value = 0;
};

/// Sampled entries of a tensor. Indices are validated against the shape and
/// must be unique.
class ObservationSet {
public:
    ObservationSet() = default;
    ObservationSet(Shape shape, std::vector<Observation> entries);

    const Shape &shape() const { return shape_; }
    const std::vector<Observation> &entries() const { return entries_; }
    Index size() const { return static_cast<Index>(entries_.size()); }

    /// Flat (zero-based) tensor positions, in entry order.
    const std::vector<Index> &positions() const { return positions_; }
    Eigen::VectorXd values() const;

    /// The observations of `t` at the given flat positions.
    static ObservationSet sample(const DenseTensor &t,
                                 const std::vector<Index> &positions);

    friend bool operator==(const ObservationSet &a, const ObservationSet &b);

private:
    Shape shape_;
    std::vector<Observation> entries_;
    std::vector<Index> positions_;
};

/// I(W): the entries of W at the observed positions, in observation order.
Eigen::VectorXd apply_sampling(const DenseTensor &W, const ObservationSet &obs);

/// I*(v): scatters v back into a zero tensor.
DenseTensor sampling_adjoint(const Eigen::VectorXd &v, const ObservationSet &obs);

struct AdmmConfig {
    double gamma = 1.0;
    double beta = 1.0;
    int max_outer_iters = 500;
    double primal_tol = 1e-5;
    bool track_objective = true; // costs N extra SVDs per iteration
    SubgradConfig subgrad;
    GaugeSpec gauge;

    void validate() const;
};

struct AdmmState {
    DenseTensor W;
    std::vector<DenseTensor> B;
    std::vector<DenseTensor> A;
    int iter = 0;
    double primal_residual = 0;

    static AdmmState zeros(const Shape &shape);
};

struct IterationRecord {
    int iteration = 0;
    double primal_residual = 0; // max_n ||W - B_n|| / max(1, ||W||)
    double dual_residual = 0;   // beta * max_n ||B_n - B_n_prev||
    double objective = 0;       // NaN when not tracked
    double elapsed_ms = 0;
};

struct SolverReport {
    std::vector<IterationRecord> history;
    int iterations = 0;
    bool converged = false;
    double seconds = 0;
    double gamma = 0;
    double beta = 0;
    GaugeSpec gauge;
};

struct Solution {
    DenseTensor W;
    SolverReport report;
};

DenseTensor update_W(const AdmmState &state, const ObservationSet &obs,
                     const AdmmConfig &cfg);
std::vector<DenseTensor> update_B(const AdmmState &state, const AdmmConfig &cfg);
std::vector<DenseTensor> update_A(const AdmmState &state, const AdmmConfig &cfg);

double primal_residual(const DenseTensor &W, const std::vector<DenseTensor> &B);

/// One full W, B, A sweep.
void admm_step(AdmmState &state, const ObservationSet &obs, const AdmmConfig &cfg);

/// The W-dependent part of the augmented Lagrangian (Psi(B_n) omitted).
double lagrangian_smooth(const DenseTensor &W, const AdmmState &state,
                         const ObservationSet &obs, const AdmmConfig &cfg);

/// ||y - I(W)||^2, plus gamma * sum_n ||W_(n)||_tr for the L1 gauge.
double objective_surrogate(const DenseTensor &W, const ObservationSet &obs,
                           const AdmmConfig &cfg);

/// Runs ADMM from the all-zero state until the primal residual reaches
/// primal_tol or max_outer_iters is hit. When `progress` is given the report
/// is accumulated there, so it survives a NumericFailure.
Solution solve(const ObservationSet &obs, const AdmmConfig &cfg,
               SolverReport *progress = nullptr);

} // namespace tenscomp
