#include "helpers.hpp"

#include "intdiff/error.hpp"
#include "intdiff/fusion.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace intdiff;

namespace {

FusionConfig fixed_config(double eps) {
    FusionConfig cfg;
    cfg.bandwidth = Bandwidth::fixed(eps);
    cfg.mgd.bandwidth = cfg.bandwidth;
    cfg.mgd.tau = 16;
    return cfg;
}

}  // namespace

TEST_CASE("exponent reduction") {
    CHECK(reduce_exponents(4, 6) == std::pair{2, 3});
    CHECK(reduce_exponents(5, 5) == std::pair{1, 1});
    CHECK(reduce_exponents(7, 3) == std::pair{7, 3});
    CHECK_THROWS_AS(reduce_exponents(0, 3), ValidationError);
}

TEST_CASE("reduced exponents are coprime with the same ratio") {
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<int> dist(1, 200);
    for (int i = 0; i < 500; ++i) {
        const int a = dist(gen), b = dist(gen);
        const auto [x, y] = reduce_exponents(a, b);
        CHECK(std::gcd(x, y) == 1);
        CHECK(static_cast<long>(x) * b == static_cast<long>(y) * a);
    }
}

TEST_CASE("alternating diffusion examples") {
    const DiffusionOperator p = testing::random_operator(12, 1);
    const DiffusionOperator q = testing::random_operator(12, 2);

    CHECK(testing::max_abs(alternating(p, p, 1).values - p.values * p.values) < 1e-12);

    DiffusionOperator eye = p;
    eye.values = Eigen::MatrixXd::Identity(12, 12);
    CHECK(testing::max_abs(alternating(eye, q, 3).values - power(q, 3).values) < 1e-12);

    const Eigen::MatrixXd brute = p.values * q.values * p.values * q.values;
    CHECK(testing::max_abs(alternating(p, q, 2).values - brute) < 1e-10);

    const IntegratedOperator swapped = alternating(p, q, 1, FusionOrder::second_then_first);
    CHECK(testing::max_abs(swapped.values - q.values * p.values) < 1e-12);
    CHECK(swapped.order == FusionOrder::second_then_first);
}

TEST_CASE("fused products do not commute") {
    const DiffusionOperator p = testing::random_operator(20, 5);
    const DiffusionOperator q = testing::random_operator(20, 6);
    CHECK(testing::max_abs(p.values * q.values - q.values * p.values) > 0.0);
}

TEST_CASE("alternating rejects misaligned rows") {
    const DiffusionOperator p = testing::random_operator(6, 1);
    DiffusionOperator q = testing::random_operator(6, 2);
    std::swap(q.row_ids[0], q.row_ids[1]);
    CHECK_THROWS_AS(alternating(p, q, 1), AlignmentError);

    const DataMatrix a(testing::gaussian_points(6, 2, 1));
    DataMatrix b(testing::gaussian_points(6, 2, 2));
    b.row_ids[5] = 99;
    CHECK_THROWS_AS(integrated(a, b, FusionConfig{}), AlignmentError);
}

TEST_CASE("identical modalities fuse to the squared operator") {
    const DataMatrix x(testing::two_blobs(40, 5.0, 8));
    FusionConfig cfg;
    cfg.mgd.tau = 16;
    FusionWorkspace ws(x, x, cfg);
    const IntegratedOperator j = ws.fuse(FusionStrategy::integrated);
    CHECK(j.exponents == std::pair{1, 1});
    CHECK(j.source_elbows.first == j.source_elbows.second);
    CHECK_NOTHROW(j.validate());
    const Eigen::MatrixXd& p = ws.modality_operator(0, true).values;
    CHECK(testing::max_abs(j.values - p * p) < 1e-12);
}

TEST_CASE("equal elbows make integrated equal alternating_local") {
    const DataMatrix x(testing::gaussian_points(50, 3, 4));
    FusionConfig cfg;
    cfg.mgd.tau = 16;
    FusionWorkspace ws(x, x, cfg);
    const IntegratedOperator j = ws.fuse(FusionStrategy::integrated);
    const IntegratedOperator a = ws.fuse(FusionStrategy::alternating_local);
    CHECK(testing::max_abs(j.values - a.values) < 1e-12);
}

TEST_CASE("integrated exponents follow the reduced elbows") {
    const DataMatrix a(testing::gaussian_points(60, 3, 1));
    const DataMatrix b(testing::gaussian_points(60, 10, 2));
    FusionConfig cfg;
    cfg.mgd.tau = 16;
    FusionWorkspace ws(a, b, cfg);
    const IntegratedOperator j = ws.fuse(FusionStrategy::integrated);
    const int k1 = ws.entropy_curve(0, true).elbow;
    const int k2 = ws.entropy_curve(1, true).elbow;
    CHECK(j.source_elbows == std::pair{k1, k2});
    CHECK(j.exponents == reduce_exponents(k1, k2));
    const Eigen::MatrixXd expected = power(ws.modality_operator(0, true), j.exponents.first).values *
                                     power(ws.modality_operator(1, true), j.exponents.second).values;
    CHECK(testing::max_abs(j.values - expected) < 1e-10);
    CHECK(j.entropy_curves.size() == 2);
}

TEST_CASE("affinity product with an all-ones kernel") {
    const DataMatrix x(testing::gaussian_points(15, 3, 3));
    const DataMatrix flat(Eigen::MatrixXd::Constant(15, 2, 4.0));
    const FusionConfig cfg = fixed_config(2.0);
    const IntegratedOperator j = fuse_baseline(x, flat, FusionStrategy::affinity_product, cfg);
    const DiffusionOperator p = diffusion_operator(gaussian_kernel(x, cfg.bandwidth));
    CHECK(testing::max_abs(j.values - p.values) < 1e-15);
}

TEST_CASE("distance sum with a constant second view") {
    const DataMatrix x(testing::gaussian_points(15, 3, 3));
    const DataMatrix flat(Eigen::MatrixXd::Constant(15, 2, 4.0));
    const FusionConfig cfg = fixed_config(2.0);
    const IntegratedOperator j = fuse_baseline(x, flat, FusionStrategy::distance_sum, cfg);
    const DiffusionOperator p = diffusion_operator(gaussian_kernel(x, cfg.bandwidth));
    CHECK(testing::max_abs(j.values - p.values) < 1e-15);
}

TEST_CASE("affinity sum of equal kernels") {
    const DataMatrix x(testing::gaussian_points(15, 3, 4));
    const FusionConfig cfg = fixed_config(1.5);
    const IntegratedOperator j = fuse_baseline(x, x, FusionStrategy::affinity_sum, cfg);
    const DiffusionOperator p = diffusion_operator(gaussian_kernel(x, cfg.bandwidth));
    CHECK(testing::max_abs(j.values - p.values) < 1e-15);
}

TEST_CASE("concatenating a view with itself doubles the bandwidth") {
    const DataMatrix x(testing::gaussian_points(20, 4, 5, 3.0));
    const FusionConfig cfg = fixed_config(2.0);
    const IntegratedOperator j = fuse_baseline(x, x, FusionStrategy::concatenation, cfg);
    const DiffusionOperator p = diffusion_operator(gaussian_kernel(zscore_columns(x), Bandwidth::fixed(1.0)));
    CHECK(testing::max_abs(j.values - p.values) < 1e-9);
}

TEST_CASE("z-scored columns") {
    Eigen::MatrixXd m(4, 2);
    m << 1, 5, 2, 5, 3, 5, 4, 5;
    const DataMatrix z = zscore_columns(DataMatrix(m));
    CHECK(z.values.col(0).mean() == doctest::Approx(0.0));
    CHECK(z.values.col(0).squaredNorm() / 4 == doctest::Approx(1.0));
    CHECK(z.values.col(1).isZero(0.0));
}

TEST_CASE("every strategy yields a row-stochastic operator") {
    const DataMatrix a(testing::two_blobs(30, 6.0, 1));
    const DataMatrix b(testing::gaussian_points(60, 5, 2));
    FusionConfig cfg;
    cfg.mgd.tau = 16;
    FusionWorkspace ws(a, b, cfg);
    for (FusionStrategy s : kAllStrategies) {
        const IntegratedOperator j = ws.fuse(s);
        CAPTURE(to_string(s));
        CHECK(j.strategy == s);
        CHECK(j.values.minCoeff() >= 0.0);
        CHECK(row_sum_error(j.values) < 1e-9);
        CHECK(j.row_ids == a.row_ids);
        CHECK(parse_strategy(to_string(s)) == s);
    }
    CHECK_THROWS_AS(parse_strategy("fancy"), ConfigError);
}
