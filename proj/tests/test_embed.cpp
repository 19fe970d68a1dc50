#include "helpers.hpp"

#include "intdiff/embed.hpp"
#include "intdiff/error.hpp"
#include "intdiff/fusion.hpp"

#include <doctest.h>

#include <sstream>

using namespace intdiff;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

Eigen::MatrixXd pairwise(const Eigen::MatrixXd& coords) { return squared_distances(coords).cwiseSqrt(); }

}  // namespace

TEST_CASE("general and symmetric routes agree") {
    const DiffusionOperator p = testing::random_operator(30, 3);
    const Embedding sym = diffusion_map(p, 6, 2);
    const Embedding gen = diffusion_map(p.values, 6, 2);
    CHECK_FALSE(gen.complex_pairs);
    CHECK_FALSE(gen.svd_fallback);
    // Both routes normalise and sign columns the same way.
    CHECK(testing::max_abs(sym.coords - gen.coords) < 1e-6);
    for (Index j = 0; j < 6; ++j) {
        CHECK(std::abs(sym.eigenvalues_used(j) - gen.eigenvalues_used(j)) < 1e-9);
    }
}

TEST_CASE("columns are ordered by magnitude and signed by their largest entry") {
    const DiffusionOperator p = testing::random_operator(25, 4);
    const Embedding e = diffusion_map(p.values, 10);
    for (Index j = 1; j < e.dims(); ++j) {
        CHECK(std::abs(e.eigenvalues_used(j)) <= std::abs(e.eigenvalues_used(j - 1)) + 1e-12);
    }
    for (Index j = 0; j < e.dims(); ++j) {
        Index arg = 0;
        e.coords.col(j).cwiseAbs().maxCoeff(&arg);
        CHECK(e.coords(arg, j) > 0.0);
    }
}

TEST_CASE("two disconnected blocks get opposite signs") {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(6, 6);
    p.topLeftCorner(3, 3).setConstant(1.0 / 3.0);
    p.bottomRightCorner(3, 3) << 0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5;
    const Embedding e = diffusion_map(p, 2);
    const auto first = e.coords.col(0);
    CHECK(std::abs(first(0)) > 1e-6);
    for (Index i = 0; i < 3; ++i) {
        CHECK(first(i) * first(0) > 0.0);
        CHECK(first(i + 3) * first(0) < 0.0);
    }
}

TEST_CASE("full basis reconstructs the powered operator") {
    const DataMatrix x(testing::gaussian_points(10, 2, 6));
    const DiffusionOperator op = diffusion_operator(gaussian_kernel(x, Bandwidth::median_knn(2, 0.5)));
    for (int t : {1, 2}) {
        const Embedding e = diffusion_map(op.values, 9, t);
        Eigen::MatrixXd scaled(10, 10), basis(10, 10);
        scaled.col(0) = e.trivial_vector;
        basis.col(0) = e.trivial_vector;
        for (Index j = 0; j < 9; ++j) {
            const double lt = std::pow(e.eigenvalues_used(j).real(), t);
            scaled.col(j + 1) = e.coords.col(j);
            basis.col(j + 1) = e.coords.col(j) / lt;
        }
        const Eigen::MatrixXd rebuilt = scaled * basis.inverse();
        CHECK(testing::max_abs(rebuilt - power(op, t).values) < 1e-6);
    }
}

TEST_CASE("non-symmetric products may embed with complex pairs") {
    // A directed 3-cycle mixed with the identity has eigenvalues 1 and a conjugate pair.
    Eigen::MatrixXd p(3, 3);
    p << 0.5, 0.5, 0, 0, 0.5, 0.5, 0.5, 0, 0.5;
    const Embedding e = diffusion_map(p, 2);
    CHECK(e.complex_pairs);
    CHECK(e.eigenvalues_used(0) == e.eigenvalues_used(1));
    CHECK(e.eigenvalues_used(0).imag() > 0.0);
    CHECK(e.coords.allFinite());
}

TEST_CASE("embedding distances follow row permutations") {
    const Eigen::MatrixXd x = testing::gaussian_points(20, 3, 9);
    const auto perm = testing::random_permutation(20, 1);
    const Eigen::MatrixXd pi = testing::permutation_matrix(perm);
    const Embedding a = diffusion_map(diffusion_operator(gaussian_kernel(DataMatrix(x))), 5, 1);
    const Embedding b = diffusion_map(diffusion_operator(gaussian_kernel(DataMatrix(pi * x))), 5, 1);
    const Eigen::MatrixXd da = pairwise(a.coords);
    const Eigen::MatrixXd db = pairwise(b.coords);
    CHECK(testing::max_abs(db - pi * da * pi.transpose()) < 1e-8);
}

TEST_CASE("fused operator embedding picks the route from degrees") {
    const DataMatrix a(testing::gaussian_points(25, 3, 1));
    const DataMatrix b(testing::gaussian_points(25, 4, 2));
    FusionConfig cfg;
    const IntegratedOperator sum = fuse_baseline(a, b, FusionStrategy::affinity_sum, cfg);
    REQUIRE(sum.degrees.has_value());
    const Embedding reversible = diffusion_map(sum, 4);
    const Embedding general = diffusion_map(sum.values, 4);
    CHECK(testing::max_abs(reversible.coords - general.coords) < 1e-6);
}

TEST_CASE("embedding request checks") {
    const DiffusionOperator p = testing::random_operator(5, 1);
    CHECK_THROWS_AS(diffusion_map(p, 5), SizeError);
    CHECK_THROWS_AS(diffusion_map(p.values, 0), ValidationError);
}

TEST_CASE("embedding csv") {
    const Embedding e = diffusion_map(testing::random_operator(4, 2), 2);
    std::ostringstream out;
    write_embedding_csv(out, e);
    const std::string text = out.str();
    CHECK(text.rfind("row_id,dim1,dim2\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("scatter plot elements") {
    Embedding e;
    e.coords.resize(3, 2);
    e.coords << 0, 0, 1, 2, -1, 0.5;
    e.row_ids = default_row_ids(3);
    const std::string plain = scatter_2d(e);
    CHECK(count_of(plain, "<circle") == 3);
    CHECK(count_of(plain, "legend-entry") == 0);

    const std::vector<int> labels = {4, 1, 4};
    const std::string labelled = scatter_2d(e, std::span<const int>(labels));
    CHECK(count_of(labelled, "legend-entry") == 2);
    CHECK(scatter_2d(e) == plain);

    Embedding empty;
    CHECK_THROWS_AS(scatter_2d(empty), ValidationError);
}
