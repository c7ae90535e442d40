#include "tenscomp/models.hpp"
#include "tenscomp/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace tenscomp;

namespace {

DenseTensor random_tensor(const Shape &shape, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal;
    DenseTensor t(shape);
    for (Index i = 0; i < t.size(); ++i)
        t[i] = normal(rng);
    return t;
}

DenseTensor outer3(const Eigen::VectorXd &a, const Eigen::VectorXd &b, const Eigen::VectorXd &c) {
    DenseTensor t(Shape{a.size(), b.size(), c.size()});
    for (Index i = 0; i < a.size(); ++i)
        for (Index j = 0; j < b.size(); ++j)
            for (Index k = 0; k < c.size(); ++k)
                t({i, j, k}) = a[i] * b[j] * c[k];
    return t;
}

std::vector<int> ranks_of(const DenseTensor &t) { return tensor_rank(t).ranks; }

} // namespace

TEST_CASE("tensor trace norm") {
    CHECK(tensor_trace_norm(DenseTensor(Shape{2, 3, 4})) == 0);

    std::mt19937_64 rng(50);
    const DenseTensor m = random_tensor(Shape{4, 6}, rng);
    CHECK(tensor_trace_norm(m) ==
          doctest::Approx(svd_thin(unfold(m, 1)).sigma.sum()).epsilon(1e-12));

    // (1/N) sum of nuclear norms, computed here from the Gram eigenvalues.
    const DenseTensor t = random_tensor(Shape{3, 4, 2}, rng);
    double expect = 0;
    for (int n = 1; n <= 3; ++n) {
        const Eigen::MatrixXd X = unfold(t, n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(X * X.transpose());
        expect += eig.eigenvalues().cwiseMax(0).cwiseSqrt().sum();
    }
    CHECK(tensor_trace_norm(t) == doctest::Approx(expect / 3).epsilon(1e-10));
}

TEST_CASE("multilinear rank") {
    CHECK(tensor_rank(DenseTensor(Shape{2, 2, 2})).value() == 0);
    const DenseTensor r1 = outer3(Eigen::VectorXd::Random(3), Eigen::VectorXd::Random(4),
                                  Eigen::VectorXd::Random(2));
    CHECK(ranks_of(r1) == std::vector<int>{1, 1, 1});
    CHECK(tensor_rank(r1).value() == 1);

    std::mt19937_64 rng(51);
    const DenseTensor full = random_tensor(Shape{3, 4, 5}, rng);
    CHECK(ranks_of(full) == std::vector<int>{3, 4, 5});
    const DenseTensor sum = r1 + outer3(Eigen::VectorXd::Random(3), Eigen::VectorXd::Random(4),
                                        Eigen::VectorXd::Random(2));
    CHECK(ranks_of(sum) == std::vector<int>{2, 2, 2});
}

TEST_CASE("alpha estimate") {
    const Shape s{2, 2, 2};
    const ObservationSet equal(s, {{{1, 1, 1}, 3.0}, {{2, 1, 2}, 3.0}, {{1, 2, 2}, 3.0}});
    CHECK(estimate_alpha(equal) == doctest::Approx(3 * std::sqrt(8.0)));

    const ObservationSet pm(s, {{{1, 1, 1}, 1.0}, {{2, 2, 2}, -1.0}});
    CHECK(estimate_alpha(pm) == doctest::Approx(std::sqrt(8.0)));

    std::mt19937_64 rng(52);
    const DenseTensor t = random_tensor(Shape{3, 4, 2}, rng);
    std::vector<Index> all(static_cast<std::size_t>(t.size()));
    std::iota(all.begin(), all.end(), Index{0});
    CHECK(estimate_alpha(ObservationSet::sample(t, all)) == frobenius_norm(t));
}

TEST_CASE("rmse") {
    std::mt19937_64 rng(53);
    const Shape s{4, 3, 2};
    const DenseTensor truth = random_tensor(s, rng);
    const ObservationSet mask = ObservationSet::sample(truth, {0, 3, 7, 11, 20});
    CHECK(rmse(truth, truth, mask) == 0);
    CHECK(rmse(truth + DenseTensor::Constant(s, -0.25), truth, mask) == doctest::Approx(0.25));

    const DenseTensor pred = random_tensor(s, rng);
    double acc = 0;
    for (Index p : mask.positions())
        acc += (pred[p] - truth[p]) * (pred[p] - truth[p]);
    CHECK(std::abs(rmse(pred, truth, mask) - std::sqrt(acc / 5)) <= 1e-12);
    CHECK(rmse(pred, mask) == rmse(pred, truth, mask));
}

TEST_CASE("mode product agrees with the index definition") {
    std::mt19937_64 rng(54);
    const DenseTensor T = random_tensor(Shape{3, 4, 2}, rng);
    const Eigen::MatrixXd M = Eigen::MatrixXd::Random(5, 4);
    const DenseTensor P = mode_product(T, M, 2);
    CHECK(P.shape() == Shape{3, 5, 2});
    for (Index i = 0; i < 3; ++i)
        for (Index q = 0; q < 5; ++q)
            for (Index k = 0; k < 2; ++k) {
                double acc = 0;
                for (Index j = 0; j < 4; ++j)
                    acc += M(q, j) * T({i, j, k});
                CHECK(P({i, q, k}) == doctest::Approx(acc).epsilon(1e-13));
            }
    CHECK_THROWS_AS(mode_product(T, Eigen::MatrixXd::Zero(2, 3), 2), InvalidArgument);
}

TEST_CASE("Tucker generator") {
    TuckerSpec spec;
    spec.seed = 3;
    const TuckerSample a = generate_tucker(spec);
    CHECK(a.ground_truth == a.noiseless);
    CHECK(a.noiseless.shape() == Shape{40, 20, 10});
    CHECK(std::abs(a.noiseless.values().mean()) <= 1e-12);
    const double sd =
        std::sqrt((a.noiseless.values().array() - a.noiseless.values().mean()).square().mean());
    CHECK(sd == doctest::Approx(1).epsilon(1e-12));

    // The contraction has the core ranks; removing the mean adds a constant
    // (rank-one) tensor, which can raise each mode rank by one.
    CHECK(ranks_of(a.raw) == std::vector<int>{12, 6, 3});
    const auto std_ranks = ranks_of(a.noiseless);
    const std::vector<int> core{12, 6, 3};
    for (std::size_t n = 0; n < 3; ++n) {
        CHECK(std_ranks[n] >= core[n]);
        CHECK(std_ranks[n] <= core[n] + 1);
    }

    spec.noise_variance = 1e-2;
    const TuckerSample b = generate_tucker(spec);
    CHECK(b.noiseless == a.noiseless);
    const Eigen::ArrayXd noise = (b.ground_truth - b.noiseless).values().array();
    CHECK(std::sqrt(noise.square().mean()) == doctest::Approx(0.1).epsilon(0.05));

    const TuckerSample again = generate_tucker(spec);
    CHECK(again.ground_truth == b.ground_truth);
    spec.seed = 4;
    CHECK(!(generate_tucker(spec).ground_truth == b.ground_truth));

    spec.core_ranks = {41, 6, 3};
    CHECK_THROWS_AS(generate_tucker(spec), InvalidArgument);
}

TEST_CASE("counterexample on the smallest shape") {
    const double formula = (4 + std::sqrt(6.0)) / 3;
    CHECK(counterexample_trace_norm(Shape{2, 2, 3}) == doctest::Approx(formula).epsilon(1e-15));
    CHECK(counterexample_rank(Shape{2, 2, 3}) == doctest::Approx(7.0 / 3));

    const DenseTensor W = build_counterexample({Shape{2, 2, 3}, 0});
    CHECK(std::abs(frobenius_norm(W) - std::sqrt(2.0)) <= 1e-10);
    for (int n = 1; n <= 3; ++n)
        CHECK(spectral_norm(unfold(W, n)) <= 1 + 1e-10);
    CHECK(ranks_of(W) == std::vector<int>{2, 2, 3});
    CHECK(tensor_rank(W).total() == 7);
    CHECK(std::abs(tensor_trace_norm(W) - formula) <= 1e-6);
    CHECK(tensor_trace_norm(W) < tensor_rank(W).value());

    const Eigen::VectorXd s3 = svd_thin(unfold(W, 3)).sigma;
    CHECK((s3.array() - std::sqrt(2.0 / 3)).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("counterexample seeds give distinct valid tensors") {
    const DenseTensor a = build_counterexample({Shape{2, 2, 3}, 1});
    const DenseTensor b = build_counterexample({Shape{2, 2, 3}, 2});
    CHECK((a - b).values().norm() > 1e-3);
    for (const auto *W : {&a, &b}) {
        CHECK(std::abs(frobenius_norm(*W) - std::sqrt(2.0)) <= 1e-10);
        CHECK(ranks_of(*W) == std::vector<int>{2, 2, 3});
    }
}

TEST_CASE("counterexample on padded and permuted shapes") {
    for (const Shape &s : {Shape{2, 4, 4}, Shape{4, 2, 3}, Shape{3, 3, 5}, Shape{2, 2, 2, 3},
                           Shape{3, 5, 4, 3}}) {
        CAPTURE(s.to_string());
        const DenseTensor W = build_counterexample({s, 7});
        const double p = static_cast<double>(s.min_dim());
        const int N = s.order();
        CHECK(W.shape() == s);
        CHECK(std::abs(frobenius_norm(W) - std::sqrt(p)) <= 1e-10);
        for (int n = 1; n <= N; ++n)
            CHECK(spectral_norm(unfold(W, n)) <= 1 + 1e-10);
        const auto r = tensor_rank(W);
        CHECK(r.total() == static_cast<int>(p) * N + 1);
        CHECK(*std::min_element(r.ranks.begin(), r.ranks.end()) <
              *std::max_element(r.ranks.begin(), r.ranks.end()));
        CHECK(std::abs(tensor_trace_norm(W) - counterexample_trace_norm(s)) <= 1e-6);
        CHECK(tensor_trace_norm(W) < r.value());
    }
}

TEST_CASE("counterexample shape preconditions") {
    CHECK_THROWS_AS(build_counterexample({Shape{3, 3, 3}, 0}), InvalidArgument);
    CHECK_THROWS_AS(build_counterexample({Shape{2, 3}, 0}), InvalidArgument);
    CHECK_THROWS_AS(build_counterexample({Shape{1, 2, 3}, 0}), InvalidArgument);
}

TEST_CASE("envelope bound never exceeds the rank on the alpha-sphere") {
    std::mt19937_64 rng(55);
    for (int rep = 0; rep < 30; ++rep) {
        const Shape s{3, 4, 2};
        DenseTensor W = random_tensor(s, rng);
        if (rep % 3 == 0)
            W = outer3(Eigen::VectorXd::Random(3), Eigen::VectorXd::Random(4),
                       Eigen::VectorXd::Random(2));
        const double alpha = 0.5 + rep * 0.1;
        W = (alpha / frobenius_norm(W)) * W;
        CHECK(envelope_regularizer_lower_bound(W, alpha, 1e3) <= tensor_rank(W).value() + 1e-5);
    }
}

TEST_CASE("on the unit sphere the envelope dominates the l1 norm") {
    // omega**_1(x) = card(x) >= sqrt(card(x)) >= ||x||_1 when ||x||_2 = 1.
    std::mt19937_64 rng(56);
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(5);
        for (int i = 0; i <= rep % 5; ++i)
            x[i] = mag(rng);
        x.normalize();
        CHECK(envelope_lower_bound(x, 1, 1e3) >= x.lpNorm<1>() - 1e-5);
    }
}
