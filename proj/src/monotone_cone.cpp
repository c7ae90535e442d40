#include "tenscomp/monotone_cone.hpp"

#include "tenscomp/errors.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

namespace tenscomp {

bool in_monotone_cone(const Eigen::VectorXd &v) {
    for (Eigen::Index i = 0; i + 1 < v.size(); ++i)
        if (!(v[i] >= v[i + 1]))
            return false;
    return v.size() == 0 || v[v.size() - 1] >= 0;
}

Eigen::VectorXd project_nonneg(const Eigen::VectorXd &v) {
    return v.cwiseMax(0.0);
}

Eigen::VectorXd approx_project(const Eigen::VectorXd &input) {
    Eigen::VectorXd v = project_nonneg(input);
    const Eigen::Index d = v.size();
    constexpr double inf = std::numeric_limits<double>::infinity();

    for (Eigen::Index i = 0; i + 1 < d; ++i) {
        while (v[i] < v[i + 1]) {
            // Length of the run of exact ties ending at i.
            Eigen::Index j = 1;
            while (j <= i && v[i - j] == v[i])
                ++j;
            const double left = (j <= i) ? v[i - j] : inf;
            const double pooled =
                v[i] + (v[i + 1] - v[i]) / static_cast<double>(j + 1);
            if (left >= pooled) {
                v.segment(i - j + 1, j + 1).setConstant(pooled);
            } else {
                // Raise the tied block to its left neighbour and take the
                // excess out of v[i+1]; the block then merges with the left.
                v[i + 1] -= (left - v[i]) * static_cast<double>(j);
                v.segment(i - j + 1, j).setConstant(left);
            }
        }
    }
    return v;
}

Eigen::VectorXd exact_project(const Eigen::VectorXd &v) {
    // Blocks of (sum, count); block means must be non-increasing.
    std::vector<double> sum;
    std::vector<Eigen::Index> count;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        sum.push_back(v[i]);
        count.push_back(1);
        while (sum.size() > 1) {
            const std::size_t b = sum.size() - 1;
            if (sum[b - 1] / count[b - 1] >= sum[b] / count[b])
                break;
            sum[b - 1] += sum[b];
            count[b - 1] += count[b];
            sum.pop_back();
            count.pop_back();
        }
    }
    Eigen::VectorXd out(v.size());
    Eigen::Index pos = 0;
    for (std::size_t b = 0; b < sum.size(); ++b) {
        out.segment(pos, count[b]).setConstant(std::max(sum[b] / count[b], 0.0));
        pos += count[b];
    }
    return out;
}

bool verify_approx_contract(const Eigen::VectorXd &v, int samples,
                            std::mt19937_64 &rng) {
    if (samples < 1)
        throw InvalidArgument("verify_approx_contract: samples must be >= 1");
    constexpr double tol = 1e-10;
    const Eigen::VectorXd p = approx_project(v);
    if (!in_monotone_cone(p))
        return false;

    auto holds = [&](const Eigen::VectorXd &z) {
        return (p - z).norm() <= (v - z).norm() + tol;
    };
    if (!holds(exact_project(v)) || !holds(Eigen::VectorXd::Zero(v.size())))
        return false;

    const double scale =
        v.size() ? std::max(1.0, v.cwiseAbs().maxCoeff()) : 1.0;
    std::uniform_real_distribution<double> unif(0.0, 2.0 * scale);
    std::uniform_int_distribution<Eigen::Index> tail(0, v.size());
    Eigen::VectorXd z(v.size());
    for (int s = 0; s < samples; ++s) {
        for (Eigen::Index i = 0; i < z.size(); ++i)
            z[i] = unif(rng);
        std::sort(z.data(), z.data() + z.size(), std::greater<>());
        // Put some mass on the faces of S as well: zero tails, tied pairs.
        const Eigen::Index zeros = tail(rng);
        z.tail(zeros).setZero();
        if (s % 2 == 1 && z.size() > 1) {
            const Eigen::Index k = tail(rng) % (z.size() - 1);
            z[k + 1] = z[k];
        }
        if (!holds(z))
            return false;
    }
    return true;
}

} // namespace tenscomp
