#include "tenscomp/models.hpp"

#include "tenscomp/gauge_prox.hpp"
#include "tenscomp/spectral.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace tenscomp {

double tensor_trace_norm(const DenseTensor &W) {
    double sum = 0;
    for (int n = 1; n <= W.order(); ++n)
        sum += svd_thin(unfold(W, n)).sigma.sum();
    return sum / W.order();
}

int MultilinearRank::total() const {
    return std::accumulate(ranks.begin(), ranks.end(), 0);
}

MultilinearRank tensor_rank(const DenseTensor &W, double rank_tol) {
    if (!(rank_tol > 0))
        throw InvalidArgument("tensor_rank: rank_tol must be positive");
    MultilinearRank r;
    for (int n = 1; n <= W.order(); ++n) {
        const Eigen::VectorXd sigma = svd_thin(unfold(W, n)).sigma;
        int rank = 0;
        if (sigma.size() > 0 && sigma[0] > 0) {
            const double cut = rank_tol * sigma[0];
            rank = static_cast<int>((sigma.array() > cut).count());
        }
        r.ranks.push_back(rank);
    }
    return r;
}

double envelope_regularizer_lower_bound(const DenseTensor &W, double alpha,
                                        double k) {
    double sum = 0;
    for (int n = 1; n <= W.order(); ++n)
        sum += envelope_lower_bound(svd_thin(unfold(W, n)).sigma, alpha, k);
    return sum / W.order();
}

double estimate_alpha(const ObservationSet &obs) {
    const Eigen::VectorXd w = obs.values();
    const double m = static_cast<double>(w.size());
    const double total = static_cast<double>(obs.shape().size());
    const double mean = w.mean();
    const double var = (w.array() - mean).square().sum() / m;
    return std::sqrt(w.squaredNorm() + (mean * mean + var) * (total - m));
}

double rmse(const DenseTensor &pred, const DenseTensor &truth,
            const ObservationSet &mask) {
    pred.check_same_shape(truth, "rmse");
    if (!(pred.shape() == mask.shape()))
        throw InvalidArgument("rmse: mask shape mismatch");
    if (mask.size() == 0)
        throw InvalidArgument("rmse: empty mask");
    double sq = 0;
    for (Index pos : mask.positions()) {
        const double d = pred[pos] - truth[pos];
        sq += d * d;
    }
    return std::sqrt(sq / static_cast<double>(mask.size()));
}

double rmse(const DenseTensor &pred, const ObservationSet &obs) {
    if (obs.size() == 0)
        throw InvalidArgument("rmse: empty observation set");
    const Eigen::VectorXd r = apply_sampling(pred, obs) - obs.values();
    return std::sqrt(r.squaredNorm() / static_cast<double>(obs.size()));
}

void TuckerSpec::validate() const {
    if (static_cast<int>(core_ranks.size()) != shape.order())
        throw InvalidArgument("TuckerSpec: need one core rank per mode");
    for (int n = 1; n <= shape.order(); ++n) {
        const Index r = core_ranks[static_cast<std::size_t>(n - 1)];
        if (r < 1 || r > shape.dim(n))
            throw InvalidArgument("TuckerSpec: core rank " + std::to_string(r) +
                                  " invalid for mode " + std::to_string(n));
    }
    if (!(noise_variance >= 0))
        throw InvalidArgument("TuckerSpec: noise variance must be nonnegative");
}

DenseTensor mode_product(const DenseTensor &T, const Eigen::MatrixXd &M, int mode) {
    if (M.cols() != T.shape().dim(mode))
        throw InvalidArgument("mode_product: factor has wrong column count");
    std::vector<Index> dims = T.shape().dims();
    dims[static_cast<std::size_t>(mode - 1)] = M.rows();
    return fold(M * unfold(T, mode), mode, Shape(dims));
}

TuckerSample generate_tucker(const TuckerSpec &spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&] { return normal(rng); };

    DenseTensor W(Shape(spec.core_ranks));
    for (Index i = 0; i < W.size(); ++i)
        W[i] = draw();
    std::vector<Eigen::MatrixXd> factors;
    for (int n = 1; n <= spec.shape.order(); ++n)
        factors.push_back(Eigen::MatrixXd::NullaryExpr(
            spec.shape.dim(n), spec.core_ranks[static_cast<std::size_t>(n - 1)],
            draw));
    for (int n = 1; n <= spec.shape.order(); ++n)
        W = mode_product(W, factors[static_cast<std::size_t>(n - 1)], n);

    TuckerSample out;
    out.raw = W;
    const double mean = W.values().mean();
    const double stddev =
        std::sqrt((W.values().array() - mean).square().mean());
    out.noiseless = DenseTensor(
        W.shape(), ((W.values().array() - mean) / stddev).matrix());

    out.ground_truth = out.noiseless;
    if (spec.noise_variance > 0) {
        std::normal_distribution<double> noise(0.0, std::sqrt(spec.noise_variance));
        for (Index i = 0; i < out.ground_truth.size(); ++i)
            out.ground_truth[i] += noise(rng);
    }
    return out;
}

void CounterexampleSpec::validate() const {
    if (shape.order() < 3)
        throw InvalidArgument("counterexample: order must be at least 3, got " +
                              std::to_string(shape.order()));
    if (shape.min_dim() == shape.max_dim())
        throw InvalidArgument("counterexample: dimensions must not all be equal");
    if (shape.min_dim() < 2)
        throw InvalidArgument("counterexample: dimensions must be at least 2");
}

DenseTensor build_counterexample(const CounterexampleSpec &spec) {
    spec.validate();
    const auto &dims = spec.shape.dims();
    const std::size_t N = dims.size();

    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dims[a] < dims[b]; });
    std::vector<Index> sorted_dims(N);
    for (std::size_t k = 0; k < N; ++k)
        sorted_dims[k] = dims[order[k]];
    const Shape sorted(sorted_dims);

    const Index p = sorted_dims[0];
    const Index K = p + 1;
    const double sigma = std::sqrt(static_cast<double>(p) / static_cast<double>(K));

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const Eigen::MatrixXd G =
        Eigen::MatrixXd::NullaryExpr(K, K, [&] { return normal(rng); });
    const Eigen::MatrixXd U = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();

    DenseTensor Ws(sorted);
    std::vector<Index> idx(N);
    for (Index iN = 0; iN < K; ++iN) {
        idx[N - 1] = iN;
        for (Index k = 0; k < p; ++k) {
            std::fill(idx.begin(), idx.end() - 1, k);
            Ws(idx) += sigma * U(iN, k);
        }
        const double w = sigma * U(iN, p) / std::sqrt(static_cast<double>(p));
        for (Index i1 = 0; i1 < p; ++i1) {
            std::fill(idx.begin() + 1, idx.end() - 1, (i1 + 1) % p);
            idx[0] = i1;
            Ws(idx) += w;
        }
    }

    DenseTensor W(spec.shape);
    std::vector<Index> sidx(N);
    for (Index pos = 0; pos < W.size(); ++pos) {
        const auto oidx = spec.shape.multi_index(pos);
        for (std::size_t k = 0; k < N; ++k)
            sidx[k] = oidx[order[k]];
        W[pos] = Ws(sidx);
    }
    return W;
}

double counterexample_trace_norm(const Shape &shape) {
    const double p = static_cast<double>(shape.min_dim());
    const double N = shape.order();
    return (p * (N - 1) + std::sqrt(p * p + p)) / N;
}

double counterexample_rank(const Shape &shape) {
    const double p = static_cast<double>(shape.min_dim());
    const double N = shape.order();
    return (p * N + 1) / N;
}

} // namespace tenscomp
