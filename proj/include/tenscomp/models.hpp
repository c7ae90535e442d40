#pragma once

// Regularizer values, the alpha estimator, and tensor generators.

#include "tenscomp/admm.hpp"
#include "tenscomp/tensor.hpp"

#include <cstdint>
#include <vector>

namespace tenscomp {

/// (1/N) sum_n ||W_(n)||_tr.
double tensor_trace_norm(const DenseTensor &W);

/// Per-mode numerical ranks; R(W) = total / order.
struct MultilinearRank {
    std::vector<int> ranks;

    int total() const;
    int order() const { return static_cast<int>(ranks.size()); }
    double value() const { return static_cast<double>(total()) / order(); }
};

/// Counts singular values above rank_tol * sigma_max in every mode.
MultilinearRank tensor_rank(const DenseTensor &W, double rank_tol = 1e-8);

/// (1/N) sum_n of the certified lower bound on omega**_alpha(sigma(W_(n))).
double envelope_regularizer_lower_bound(const DenseTensor &W, double alpha,
                                        double k = 1e3);

/// Estimate of ||W||_2 from the observed values w (length m) assuming the
/// P - m unobserved entries follow N(mean(w), var(w)), population variance:
///
///     sqrt(||w||^2 + (mean(w)^2 + var(w)) (P - m)).
double estimate_alpha(const ObservationSet &obs);

/// RMSE of pred against truth over the positions of `mask`.
double rmse(const DenseTensor &pred, const DenseTensor &truth,
            const ObservationSet &mask);

/// RMSE of pred against the values stored in `obs`.
double rmse(const DenseTensor &pred, const ObservationSet &obs);

struct TuckerSpec {
    Shape shape{40, 20, 10};
    std::vector<Index> core_ranks{12, 6, 3};
    double noise_variance = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TuckerSample {
    DenseTensor raw;          // core x_1 M1 ... x_N MN, before standardization
    DenseTensor noiseless;    // standardized to zero mean, unit std
    DenseTensor ground_truth; // noiseless + N(0, noise_variance)
};

/// Core and factors are i.i.d. N(0, 1) drawn from `seed` in that order,
/// followed by the noise.
TuckerSample generate_tucker(const TuckerSpec &spec);

/// Mode-n product T x_n M (M is q x p_n).
DenseTensor mode_product(const DenseTensor &T, const Eigen::MatrixXd &M, int mode);

struct CounterexampleSpec {
    Shape shape{2, 2, 3};
    std::uint64_t seed = 0;

    void validate() const;
};

/// Tensor W with ||W||_2 = sqrt(p_min), every matricization of spectral norm
/// at most 1, and min_n rank(W_(n)) < max_n rank(W_(n)). The trace norm of
/// such a W is strictly below its multilinear rank average.
///
/// Built in sorted mode order (p_1 <= ... <= p_N) on the leading
/// p_1 x ... x p_1 x (p_1 + 1) block, from the mode-N SVD
///
///     W = sum_{k=1}^{p_1+1} sigma u^k (x) v^k,  sigma = sqrt(p_1 / (p_1 + 1)),
///
/// where u^k is a seeded random orthonormal basis of R^{p_1+1}, v^k (k <= p_1)
/// is the indicator of the diagonal multi-index (k, ..., k), and v^{p_1+1}
/// puts 1/sqrt(p_1) on (i, s(i), ..., s(i)) with s(i) = (i mod p_1) + 1.
/// Entries outside the block are zero; modes are then restored to the
/// caller's order.
DenseTensor build_counterexample(const CounterexampleSpec &spec);

/// Closed-form trace norm and rank average of build_counterexample outputs:
/// (p_min (N-1) + sqrt(p_min^2 + p_min)) / N and (p_min N + 1) / N.
double counterexample_trace_norm(const Shape &shape);
double counterexample_rank(const Shape &shape);

} // namespace tenscomp
