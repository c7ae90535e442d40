#include "tenscomp/admm.hpp"

#include "tenscomp/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace tenscomp {

ObservationSet::ObservationSet(Shape shape, std::vector<Observation> entries)
    : shape_(std::move(shape)), entries_(std::move(entries)) {
    if (entries_.empty())
        throw InvalidArgument("ObservationSet: at least one observation required");
    positions_.reserve(entries_.size());
    std::unordered_set<Index> seen;
    std::vector<Index> zero_based(static_cast<std::size_t>(shape_.order()));
    for (std::size_t j = 0; j < entries_.size(); ++j) {
        const auto &idx = entries_[j].index;
        if (static_cast<int>(idx.size()) != shape_.order())
            throw InvalidArgument("ObservationSet: entry " + std::to_string(j + 1) +
                                  " has " + std::to_string(idx.size()) +
                                  " indices, expected " +
                                  std::to_string(shape_.order()));
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (idx[k] < 1 || idx[k] > shape_.dims()[k])
                throw InvalidArgument("ObservationSet: entry " +
                                      std::to_string(j + 1) + " index " +
                                      std::to_string(idx[k]) +
                                      " out of bounds in mode " +
                                      std::to_string(k + 1));
            zero_based[k] = idx[k] - 1;
        }
        const Index pos = shape_.linear_index(zero_based);
        if (!seen.insert(pos).second)
            throw InvalidArgument("ObservationSet: duplicate index at entry " +
                                  std::to_string(j + 1));
        positions_.push_back(pos);
    }
}

Eigen::VectorXd ObservationSet::values() const {
    Eigen::VectorXd v(size());
    for (Index j = 0; j < size(); ++j)
        v[j] = entries_[static_cast<std::size_t>(j)].value;
    return v;
}

ObservationSet ObservationSet::sample(const DenseTensor &t,
                                      const std::vector<Index> &positions) {
    std::vector<Observation> entries;
    entries.reserve(positions.size());
    for (Index pos : positions) {
        Observation o;
        o.index = t.shape().multi_index(pos);
        for (auto &i : o.index)
            ++i;
        o.value = t[pos];
        entries.push_back(std::move(o));
    }
    return ObservationSet(t.shape(), std::move(entries));
}

bool operator==(const ObservationSet &a, const ObservationSet &b) {
    if (!(a.shape_ == b.shape_) || a.entries_.size() != b.entries_.size())
        return false;
    for (std::size_t j = 0; j < a.entries_.size(); ++j)
        if (a.entries_[j].index != b.entries_[j].index ||
            a.entries_[j].value != b.entries_[j].value)
            return false;
    return true;
}

Eigen::VectorXd apply_sampling(const DenseTensor &W, const ObservationSet &obs) {
    if (!(W.shape() == obs.shape()))
        throw InvalidArgument("apply_sampling: shape mismatch");
    Eigen::VectorXd v(obs.size());
    const auto &pos = obs.positions();
    for (Index j = 0; j < obs.size(); ++j)
        v[j] = W[pos[static_cast<std::size_t>(j)]];
    return v;
}

DenseTensor sampling_adjoint(const Eigen::VectorXd &v, const ObservationSet &obs) {
    if (v.size() != obs.size())
        throw InvalidArgument("sampling_adjoint: length mismatch");
    DenseTensor t(obs.shape());
    const auto &pos = obs.positions();
    for (Index j = 0; j < obs.size(); ++j)
        t[pos[static_cast<std::size_t>(j)]] = v[j];
    return t;
}

void AdmmConfig::validate() const {
    if (!(gamma > 0) || !(beta > 0) || !(primal_tol >= 0))
        throw InvalidArgument("AdmmConfig: gamma and beta must be positive, "
                              "primal_tol nonnegative");
    if (max_outer_iters < 1)
        throw InvalidArgument("AdmmConfig: max_outer_iters must be positive");
    subgrad.validate();
    gauge.validate();
}

AdmmState AdmmState::zeros(const Shape &shape) {
    AdmmState s;
    s.W = DenseTensor(shape);
    s.B.assign(static_cast<std::size_t>(shape.order()), DenseTensor(shape));
    s.A.assign(static_cast<std::size_t>(shape.order()), DenseTensor(shape));
    return s;
}

DenseTensor update_W(const AdmmState &state, const ObservationSet &obs,
                     const AdmmConfig &cfg) {
    const int N = state.W.order();
    DenseTensor s(state.W.shape());
    for (int n = 0; n < N; ++n)
        s.values() += cfg.beta * state.B[n].values() + state.A[n].values();

    const double nb = N * cfg.beta;
    const double data_w = 2.0 / cfg.gamma;
    DenseTensor W = (1.0 / nb) * s;
    const auto &pos = obs.positions();
    for (std::size_t j = 0; j < pos.size(); ++j) {
        const Index t = pos[j];
        W[t] = (s[t] + data_w * obs.entries()[j].value) / (nb + data_w);
    }
    return W;
}

std::vector<DenseTensor> update_B(const AdmmState &state, const AdmmConfig &cfg) {
    const Shape &shape = state.W.shape();
    const int N = shape.order();
    std::vector<DenseTensor> B;
    B.reserve(static_cast<std::size_t>(N));
    auto map = [&](const Eigen::VectorXd &sigma) {
        return gauge_prox(cfg.gauge, sigma, cfg.beta, cfg.subgrad);
    };
    for (int n = 1; n <= N; ++n) {
        const DenseTensor X = state.W - (1.0 / cfg.beta) * state.A[n - 1];
        try {
            B.push_back(fold(spectral_prox(unfold(X, n), map), n, shape));
        } catch (const NumericFailure &e) {
            throw NumericFailure("B-step mode " + std::to_string(n) + ": " + e.what());
        }
    }
    return B;
}

std::vector<DenseTensor> update_A(const AdmmState &state, const AdmmConfig &cfg) {
    std::vector<DenseTensor> A;
    A.reserve(state.A.size());
    for (std::size_t n = 0; n < state.A.size(); ++n)
        A.push_back(state.A[n] - cfg.beta * (state.W - state.B[n]));
    return A;
}

double primal_residual(const DenseTensor &W, const std::vector<DenseTensor> &B) {
    double r = 0;
    for (const auto &b : B)
        r = std::max(r, (W.values() - b.values()).norm());
    return r / std::max(1.0, frobenius_norm(W));
}

void admm_step(AdmmState &state, const ObservationSet &obs, const AdmmConfig &cfg) {
    state.W = update_W(state, obs, cfg);
    state.B = update_B(state, cfg);
    state.A = update_A(state, cfg);
    state.primal_residual = primal_residual(state.W, state.B);
    ++state.iter;
}

double lagrangian_smooth(const DenseTensor &W, const AdmmState &state,
                         const ObservationSet &obs, const AdmmConfig &cfg) {
    const Eigen::VectorXd r = obs.values() - apply_sampling(W, obs);
    double L = r.squaredNorm() / cfg.gamma;
    for (std::size_t n = 0; n < state.B.size(); ++n) {
        const DenseTensor D = W - state.B[n];
        L += -inner(state.A[n], D) + 0.5 * cfg.beta * inner(D, D);
    }
    return L;
}

double objective_surrogate(const DenseTensor &W, const ObservationSet &obs,
                           const AdmmConfig &cfg) {
    double value = (obs.values() - apply_sampling(W, obs)).squaredNorm();
    if (cfg.gauge.kind == GaugeSpec::Kind::L1) {
        double penalty = 0;
        for (int n = 1; n <= W.order(); ++n)
            penalty += svd_thin(unfold(W, n)).sigma.sum();
        value += cfg.gamma * penalty;
    }
    return value;
}

Solution solve(const ObservationSet &obs, const AdmmConfig &cfg,
               SolverReport *progress) {
    cfg.validate();
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();

    AdmmState state = AdmmState::zeros(obs.shape());
    SolverReport local;
    SolverReport &report = progress ? *progress : local;
    report = SolverReport{};
    report.gamma = cfg.gamma;
    report.beta = cfg.beta;
    report.gauge = cfg.gauge;

    for (int it = 1; it <= cfg.max_outer_iters; ++it) {
        std::vector<DenseTensor> B_prev = state.B;
        try {
            admm_step(state, obs, cfg);
        } catch (const NumericFailure &e) {
            throw NumericFailure("ADMM iteration " + std::to_string(it) + ": " +
                                 e.what());
        } catch (const InvalidArgument &e) {
            // svd_thin rejects non-finite input
            throw NumericFailure("ADMM iteration " + std::to_string(it) + ": " +
                                 e.what());
        }
        if (!state.W.values().allFinite())
            throw NumericFailure("ADMM iteration " + std::to_string(it) +
                                 ": non-finite iterate");

        IterationRecord rec;
        rec.iteration = it;
        rec.primal_residual = state.primal_residual;
        for (std::size_t n = 0; n < B_prev.size(); ++n)
            rec.dual_residual =
                std::max(rec.dual_residual,
                         cfg.beta * (state.B[n].values() - B_prev[n].values()).norm());
        rec.objective = cfg.track_objective
                            ? objective_surrogate(state.W, obs, cfg)
                            : std::numeric_limits<double>::quiet_NaN();
        rec.elapsed_ms =
            std::chrono::duration<double, std::milli>(Clock::now() - start).count();
        report.history.push_back(rec);
        report.iterations = it;

        if (state.primal_residual <= cfg.primal_tol) {
            report.converged = true;
            break;
        }
    }
    report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return {std::move(state.W), report};
}

} // namespace tenscomp
