#include "helpers.hpp"

#include "intdiff/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace intdiff;

namespace {

DiffusionOperator two_point() {
    DiffusionOperator p;
    p.values.resize(2, 2);
    p.values << 2.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3;
    p.degrees = Eigen::VectorXd::Constant(2, 1.5);
    p.row_ids = {0, 1};
    return p;
}

DiffusionOperator identity_operator(int n) {
    DiffusionOperator p;
    p.values = Eigen::MatrixXd::Identity(n, n);
    p.degrees = Eigen::VectorXd::Ones(n);
    p.row_ids = default_row_ids(n);
    return p;
}

// -sum psi log psi written out for two eigenvalues.
double two_value_entropy(double a, double b) {
    const double pa = a / (a + b), pb = b / (a + b);
    return -(pa * std::log(pa) + pb * std::log(pb));
}

}  // namespace

TEST_CASE("two-point eigenvalues") {
    const EigenSystem eig = eigendecompose(two_point());
    REQUIRE(eig.size() == 2);
    CHECK(eig.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(eig.eigenvalues(1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("identity operator decomposes to unit eigenvalues") {
    const DiffusionOperator p = identity_operator(5);
    const EigenSystem eig = eigendecompose(p);
    CHECK((eig.eigenvalues.array() - 1.0).abs().maxCoeff() < 1e-12);
    const Eigen::MatrixXd rebuilt = eig.ortho_vectors * eig.eigenvalues.asDiagonal() * eig.ortho_vectors.transpose();
    CHECK(testing::max_abs(rebuilt - p.values) < 1e-12);
}

TEST_CASE("eigen system invariants on random operators") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DiffusionOperator p = testing::random_operator(15, seed);
        const EigenSystem eig = eigendecompose(p);
        const Eigen::MatrixXd m = symmetric_conjugate(p);
        const Eigen::MatrixXd& v = eig.ortho_vectors;
        CHECK(testing::max_abs(v * eig.eigenvalues.asDiagonal() * v.transpose() - m) < 1e-9);
        CHECK(testing::max_abs(v.transpose() * v - Eigen::MatrixXd::Identity(15, 15)) < 1e-8);
        CHECK(eig.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(eig.eigenvalues.cwiseAbs().maxCoeff() <= 1.0 + 1e-8);
        for (Index i = 1; i < eig.size(); ++i) {
            CHECK(eig.eigenvalues(i) <= eig.eigenvalues(i - 1));
        }
        const Eigen::MatrixXd& phi = eig.right_vectors;
        CHECK(testing::max_abs(p.values * phi - phi * eig.eigenvalues.asDiagonal()) < 1e-6);

        // Similar matrices share a spectrum; compare against P's own eigenvalues.
        Eigen::EigenSolver<Eigen::MatrixXd> direct(p.values);
        std::vector<double> lp;
        for (Index i = 0; i < direct.eigenvalues().size(); ++i) {
            lp.push_back(direct.eigenvalues()(i).real());
        }
        std::sort(lp.rbegin(), lp.rend());
        for (std::size_t i = 0; i < lp.size(); ++i) {
            CHECK(std::abs(lp[i] - eig.eigenvalues(static_cast<Index>(i))) < 1e-9);
        }
    }
}

TEST_CASE("graph filter responses") {
    const DiffusionOperator p = testing::random_operator(20, 11);
    const DataMatrix f(testing::gaussian_points(20, 4, 12));
    const EigenSystem eig = eigendecompose(p);

    const DataMatrix same = graph_filter(eig, f, [](double) { return 1.0; });
    CHECK(testing::max_abs(same.values - f.values) < 1e-9);

    const DataMatrix zero = graph_filter(eig, f, [](double) { return 0.0; });
    CHECK(testing::max_abs(zero.values) < 1e-9);

    for (int t : {1, 2, 5}) {
        const DataMatrix filtered = graph_filter(eig, f, [t](double l) { return std::pow(l, t); });
        CHECK(testing::max_abs(filtered.values - power(p, t).values * f.values) < 1e-8);
    }
    CHECK(same.row_ids == f.row_ids);
}

TEST_CASE("entropy examples") {
    const std::vector<double> pair = {1.0, 1.0 / 3.0};
    CHECK(spectral_entropy(pair, 1) == doctest::Approx(two_value_entropy(1.0, 1.0 / 3.0)).epsilon(1e-14));
    CHECK(spectral_entropy(pair, 1) == doctest::Approx(0.562335).epsilon(1e-6));
    CHECK(spectral_entropy(pair, 3) == doctest::Approx(two_value_entropy(1.0, 1.0 / 27.0)).epsilon(1e-14));

    const std::vector<double> point = {1.0, 0.0, 0.0};
    CHECK(spectral_entropy(point, 1) == 0.0);

    const EigenSystem eye = eigendecompose(identity_operator(7));
    for (int t : {1, 4, 64}) {
        CHECK(spectral_entropy(eye, t) == doctest::Approx(std::log(7.0)).epsilon(1e-12));
    }

    const std::vector<double> signed_values = {1.0, -0.5};
    CHECK(spectral_entropy(signed_values, 1) == doctest::Approx(two_value_entropy(1.0, 0.5)));
}

TEST_CASE("entropy top-k truncation keeps the largest magnitudes") {
    const std::vector<double> values = {1.0, 0.5, -0.6, 0.1};
    CHECK(spectral_entropy(values, 1, Index{2}) == doctest::Approx(two_value_entropy(1.0, 0.6)));
}

TEST_CASE("entropy decreases and vanishes on connected operators") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const EigenSystem eig = eigendecompose(testing::random_operator(25, seed + 40));
        double previous = spectral_entropy(eig, 1);
        for (int t = 2; t <= 64; ++t) {
            const double s = spectral_entropy(eig, t);
            CHECK(s <= previous + 1e-12);
            previous = s;
        }
        CHECK(spectral_entropy(eig, 256) < 0.01);
    }
}

TEST_CASE("elbow of a linear curve is the first point") {
    CHECK(elbow_index(std::vector<double>{5, 4, 3, 2, 1}) == 0);
    CHECK(elbow_index(std::vector<double>{0, 0, 0, 0}) == 0);
}

TEST_CASE("elbow of the listed curve") {
    const std::vector<double> curve = {5.0, 2.0, 1.9, 1.8, 1.7};
    CHECK(testing::brute_force_elbow(curve) == 1);
    CHECK(elbow_index(curve) == 1);
}

TEST_CASE("elbow matches the chord oracle on random curves") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(u(gen) * 60);
        std::vector<double> curve(static_cast<std::size_t>(n));
        double v = 10.0 * u(gen);
        for (auto& c : curve) {
            c = v;
            v -= u(gen) * u(gen);
        }
        CHECK(elbow_index(curve) == testing::brute_force_elbow(curve));
    }
}

TEST_CASE("timescale selection on a synthesized spectrum") {
    std::vector<double> values = {1.0, 0.9, 0.89, 0.88};
    for (int i = 0; i < 30; ++i) {
        values.push_back(0.05 - 0.001 * i);
    }
    const EntropyCurve curve = select_timescale(values, 64);
    REQUIRE(curve.timescales.size() == 64);
    std::vector<double> oracle_input;
    for (int t = 1; t <= 64; ++t) {
        double total = 0.0;
        for (double l : values) {
            total += std::pow(std::abs(l), t);
        }
        double s = 0.0;
        for (double l : values) {
            const double psi = std::pow(std::abs(l), t) / total;
            if (psi > 0.0) {
                s -= psi * std::log(psi);
            }
        }
        oracle_input.push_back(s);
    }
    CHECK(curve.elbow == static_cast<int>(testing::brute_force_elbow(oracle_input)) + 1);
    CHECK(curve.elbow > 1);
}

TEST_CASE("entropy curve csv") {
    const EntropyCurve curve = select_timescale(std::vector<double>{1.0, 1.0 / 3.0}, 3);
    std::ostringstream out;
    write_entropy_csv(out, curve);
    const std::string text = out.str();
    CHECK(text.rfind("t,entropy,is_elbow\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    CHECK(text.find(",1\n") != std::string::npos);
}
