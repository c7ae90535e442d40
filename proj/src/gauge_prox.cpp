#include "tenscomp/gauge_prox.hpp"

#include "tenscomp/errors.hpp"
#include "tenscomp/monotone_cone.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace tenscomp {

GaugeSpec GaugeSpec::card_envelope(double alpha) {
    GaugeSpec g{Kind::CardEnvelope, alpha};
    g.validate();
    return g;
}

void GaugeSpec::validate() const {
    if (kind == Kind::CardEnvelope && !(alpha > 0 && std::isfinite(alpha)))
        throw InvalidArgument("GaugeSpec: alpha must be positive and finite, got " +
                              std::to_string(alpha));
}

void SubgradConfig::validate() const {
    if (!(tau0 > 0))
        throw InvalidArgument("SubgradConfig: tau0 must be positive");
    if (stall_limit < 1 || max_iters < 1)
        throw InvalidArgument("SubgradConfig: iteration limits must be positive");
    if (stall_limit > max_iters)
        throw InvalidArgument("SubgradConfig: stall_limit exceeds max_iters");
}

namespace {

// max_r (alpha ||w_{1:r}|| - r) over prefixes of w, with the smallest
// maximizing r.
struct PrefixMax {
    double value = 0;
    int k = 0;
    double norm_k = 0;
};

PrefixMax prefix_max(const Eigen::VectorXd &w, double alpha) {
    PrefixMax best;
    double sq = 0;
    for (Eigen::Index r = 1; r <= w.size(); ++r) {
        sq += w[r - 1] * w[r - 1];
        const double norm = std::sqrt(sq);
        const double val = alpha * norm - static_cast<double>(r);
        if (val > best.value) {
            best.value = val;
            best.k = static_cast<int>(r);
            best.norm_k = norm;
        }
    }
    return best;
}

} // namespace

double omega_star(const Eigen::VectorXd &s, double alpha) {
    Eigen::VectorXd a = s.cwiseAbs();
    std::sort(a.data(), a.data() + a.size(), std::greater<>());
    return prefix_max(a, alpha).value;
}

int argmax_k(const Eigen::VectorXd &w, double alpha) {
    return prefix_max(w, alpha).k;
}

double objective_h(const Eigen::VectorXd &w, const Eigen::VectorXd &y,
                   double alpha, double beta) {
    return 0.5 * (w - y).squaredNorm() + beta * prefix_max(w, alpha).value;
}

Eigen::VectorXd subgradient_h(const Eigen::VectorXd &w,
                              const Eigen::VectorXd &y, double alpha,
                              double beta) {
    Eigen::VectorXd g = w - y;
    const PrefixMax pm = prefix_max(w, alpha);
    // prefix_max never selects a zero prefix (its value -k loses to r = 0),
    // so norm_k > 0 whenever k >= 1.
    if (pm.k >= 1 && pm.norm_k > 0)
        g.head(pm.k) += (alpha * beta / pm.norm_k) * w.head(pm.k);
    return g;
}

ProxResult prox_conjugate(const Eigen::VectorXd &y, double alpha, double beta,
                          const SubgradConfig &cfg) {
    cfg.validate();
    if (!(alpha > 0) || !(beta > 0))
        throw InvalidArgument("prox_conjugate: alpha and beta must be positive");

    Eigen::VectorXd w = approx_project(y);
    ProxResult best{w, objective_h(w, y, alpha, beta), 0};

    int stall = 0;
    int t = 1;
    for (; t <= cfg.max_iters; ++t) {
        const double tau = cfg.tau0 / std::sqrt(static_cast<double>(t));
        w = approx_project(w - tau * subgradient_h(w, y, alpha, beta));
        const double h = objective_h(w, y, alpha, beta);
        if (h < best.objective) {
            best.w = w;
            best.objective = h;
            stall = 0;
        } else if (++stall >= cfg.stall_limit) {
            break;
        }
    }
    best.iterations = std::min(t, cfg.max_iters);
    return best;
}

Eigen::VectorXd prox_envelope(const Eigen::VectorXd &x, double alpha,
                              double beta, const SubgradConfig &cfg) {
    const ProxResult r = prox_conjugate(beta * x, alpha, beta, cfg);
    return x - r.w / beta;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd &sigma, double threshold) {
    if (!(threshold >= 0))
        throw InvalidArgument("soft_threshold: threshold must be nonnegative");
    return (sigma.array() - threshold).cwiseMax(0.0).matrix();
}

double envelope_lower_bound(const Eigen::VectorXd &x, double alpha, double k) {
    const Eigen::VectorXd s = k * x;
    return s.dot(x) - omega_star(s, alpha);
}

Eigen::VectorXd gauge_prox(const GaugeSpec &gauge, const Eigen::VectorXd &sigma,
                           double beta, const SubgradConfig &cfg) {
    switch (gauge.kind) {
    case GaugeSpec::Kind::L1:
        return soft_threshold(sigma, 1.0 / beta);
    case GaugeSpec::Kind::CardEnvelope:
        return prox_envelope(sigma, gauge.alpha, beta, cfg);
    }
    throw InvalidArgument("gauge_prox: unknown gauge kind");
}

} // namespace tenscomp
