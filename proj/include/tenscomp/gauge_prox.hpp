#pragma once

// Gauge-level proximity operators for the two spectral penalties:
//
//  * the l1 norm (trace norm on spectra), whose prox is soft thresholding;
//  * omega**_alpha, the convex envelope of the cardinality function on the
//    l2 ball of radius alpha.
//
// omega**_alpha has no cheap closed form, but its conjugate does:
//
//     omega*_alpha(s) = max_{r = 0..d} ( alpha * ||s_{1:r}||_2 - r ),
//
// with s sorted by decreasing magnitude. The prox of (1/beta) omega**_alpha is
// recovered through the Moreau decomposition and the scaling rules
//
//     prox_{(1/beta) omega**}(x) = x - (1/beta) prox_{beta omega*}(beta x),
//
// and prox_{beta omega*} is computed by a projected subgradient method on the
// monotone nonnegative cone S.

#include <Eigen/Core>

namespace tenscomp {

struct GaugeSpec {
    enum class Kind { L1, CardEnvelope };

    Kind kind = Kind::L1;
    double alpha = 0; // radius of the l2 ball, CardEnvelope only

    static GaugeSpec l1() { return {Kind::L1, 0}; }
    static GaugeSpec card_envelope(double alpha);

    void validate() const;
};

struct SubgradConfig {
    double tau0 = 0.5;       // step schedule tau_t = tau0 / sqrt(t)
    int stall_limit = 1000;  // stop after this many non-improving steps
    int max_iters = 50000;   // hard cap

    void validate() const;
};

struct ProxResult {
    Eigen::VectorXd w;
    double objective = 0; // h(w)
    int iterations = 0;
};

/// omega*_alpha(s). Accepts any s; sorts |s| internally.
double omega_star(const Eigen::VectorXd &s, double alpha);

/// Smallest maximizer of alpha * ||w_{1:r}|| - r over r = 0..d, for w in S.
int argmax_k(const Eigen::VectorXd &w, double alpha);

/// h(w) = 1/2 ||w - y||^2 + beta * max_r (alpha ||w_{1:r}|| - r), w in S.
double objective_h(const Eigen::VectorXd &w, const Eigen::VectorXd &y,
                   double alpha, double beta);

/// A subgradient of h at w in S.
Eigen::VectorXd subgradient_h(const Eigen::VectorXd &w,
                              const Eigen::VectorXd &y, double alpha,
                              double beta);

/// prox_{beta omega*_alpha}(y) = argmin_{w in S} h(w), approximately.
ProxResult prox_conjugate(const Eigen::VectorXd &y, double alpha, double beta,
                          const SubgradConfig &cfg = {});

/// prox_{(1/beta) omega**_alpha}(x) for a sorted nonnegative spectrum x.
Eigen::VectorXd prox_envelope(const Eigen::VectorXd &x, double alpha,
                              double beta, const SubgradConfig &cfg = {});

/// max(sigma_i - threshold, 0).
Eigen::VectorXd soft_threshold(const Eigen::VectorXd &sigma, double threshold);

/// Certified lower bound on omega**_alpha(x) from the Fenchel inequality at
/// s = k x:  k ||x||^2 - omega*_alpha(k x).
double envelope_lower_bound(const Eigen::VectorXd &x, double alpha, double k);

/// The vector map applied to a spectrum by the B-step: soft thresholding at
/// 1/beta for L1, prox_envelope for CardEnvelope.
Eigen::VectorXd gauge_prox(const GaugeSpec &gauge, const Eigen::VectorXd &sigma,
                           double beta, const SubgradConfig &cfg = {});

} // namespace tenscomp
