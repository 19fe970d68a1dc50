#include "helpers.hpp"

#include "intdiff/error.hpp"
#include "intdiff/eval.hpp"
#include "intdiff/synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace intdiff;

namespace {

std::vector<double> uniform_sample(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) {
        x = u(gen);
    }
    return v;
}

std::vector<double> column(const DataMatrix& m, Index j) {
    return {m.values.col(j).data(), m.values.col(j).data() + m.rows()};
}

}  // namespace

TEST_CASE("stratified split keeps every class on both sides") {
    std::vector<int> labels;
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < 10 + 5 * c; ++i) {
            labels.push_back(c);
        }
    }
    const Split s = stratified_split(labels, 0.8, 4);
    CHECK(s.train.size() + s.test.size() == labels.size());
    CHECK(s.test.size() == 2 + 3 + 4);
    CHECK_THROWS_AS(stratified_split(std::vector<int>{0, 0, 1}, 0.8, 1), ValidationError);
}

TEST_CASE("knn on separated blobs is perfect") {
    std::vector<int> labels;
    const Eigen::MatrixXd x = testing::two_blobs(50, 100.0, 1, &labels);
    CHECK(knn_accuracy(x, labels, 5, 3) == 1.0);
}

TEST_CASE("knn on random labels is near chance") {
    const Eigen::MatrixXd x = testing::gaussian_points(500, 2, 2);
    std::mt19937_64 gen(5);
    std::vector<int> labels(500);
    for (auto& l : labels) {
        l = static_cast<int>(gen() & 1U);
    }
    const double acc = knn_accuracy(x, labels, 5, 6);
    CHECK(acc >= 0.4);
    CHECK(acc <= 0.6);
}

TEST_CASE("k = 1 recovers duplicated training points") {
    const Eigen::MatrixXd train = testing::gaussian_points(30, 3, 3);
    std::vector<int> labels(30);
    for (int i = 0; i < 30; ++i) {
        labels[static_cast<std::size_t>(i)] = i % 4;
    }
    CHECK(knn_accuracy(train, labels, train, labels, 1) == 1.0);
}

TEST_CASE("knn ties go to the closest label") {
    Eigen::MatrixXd train(4, 1), test(1, 1);
    train << 0.9, 1.2, -1.0, -1.3;
    test << 0.0;
    const std::vector<int> labels = {7, 7, 3, 3};
    CHECK(knn_classify(train, labels, test, 4) == std::vector<int>{7});
}

TEST_CASE("knn is invariant to orthogonal maps") {
    const Eigen::MatrixXd x = testing::gaussian_points(120, 4, 8);
    std::vector<int> labels(120);
    for (int i = 0; i < 120; ++i) {
        labels[static_cast<std::size_t>(i)] = x(i, 0) + 0.3 * x(i, 1) > 0 ? 1 : 0;
    }
    const Eigen::MatrixXd q = random_orthogonal(4, 3);
    CHECK(knn_accuracy(x, labels, 5, 2) == knn_accuracy(x * q, labels, 5, 2));
}

TEST_CASE("demap of a line parameterisation") {
    const int n = 30;
    Eigen::MatrixXd geo(n, n), coords(n, 1);
    for (int i = 0; i < n; ++i) {
        coords(i, 0) = 0.5 * i;
        for (int j = 0; j < n; ++j) {
            geo(i, j) = std::abs(i - j);
        }
    }
    CHECK(demap(coords, geo) == doctest::Approx(1.0));
}

TEST_CASE("demap ignores monotone distortion") {
    const Eigen::MatrixXd pts = testing::gaussian_points(40, 3, 4);
    const Eigen::MatrixXd geo = squared_distances(pts).cwiseSqrt();
    // An embedding whose distances are an increasing function of the geodesics.
    CHECK(demap(pts * 3.0, geo) == doctest::Approx(1.0));
    CHECK(demap(pts, geo.array().pow(3.0).matrix()) == doctest::Approx(1.0));
}

TEST_CASE("demap of an unrelated embedding is near zero") {
    const Eigen::MatrixXd geo = squared_distances(testing::gaussian_points(200, 3, 1)).cwiseSqrt();
    const Eigen::MatrixXd random = testing::gaussian_points(200, 3, 2);
    CHECK(std::abs(demap(random, geo)) < 0.1);
}

TEST_CASE("demap input checks") {
    const Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(5, 2);
    const Eigen::MatrixXd geo = squared_distances(testing::gaussian_points(5, 2, 1)).cwiseSqrt();
    CHECK_THROWS_AS(demap(coords, geo), ValidationError);
    Eigen::MatrixXd asym = geo;
    asym(0, 1) += 1.0;
    CHECK_THROWS_AS(demap(testing::gaussian_points(5, 2, 2), asym), ValidationError);
}

TEST_CASE("spearman uses average ranks") {
    const std::vector<double> a = {1, 2, 2, 3};
    const std::vector<double> b = {10, 20, 20, 30};
    CHECK(spearman(a, b) == doctest::Approx(1.0));
    const std::vector<double> c = {4, 3, 2, 1};
    CHECK(spearman(std::vector<double>{1, 2, 3, 4}, c) == doctest::Approx(-1.0));
}

TEST_CASE("mutual information of a variable with itself") {
    const std::vector<double> a = uniform_sample(10000, 1);
    const double mi = mutual_information(a, a, 8).nats;
    CHECK(std::abs(mi - std::log(8.0)) < 0.05 * std::log(8.0));
}

TEST_CASE("mutual information of independent variables") {
    const std::vector<double> a = uniform_sample(10000, 2);
    const std::vector<double> b = uniform_sample(10000, 3);
    CHECK(mutual_information(a, b).nats < 0.02);
}

TEST_CASE("mutual information symmetries") {
    const std::vector<double> a = uniform_sample(2000, 4);
    std::vector<double> b = uniform_sample(2000, 5);
    for (std::size_t i = 0; i < b.size(); ++i) {
        b[i] = 0.6 * a[i] + 0.4 * b[i];
    }
    std::vector<double> neg(a.size());
    std::transform(a.begin(), a.end(), neg.begin(), [](double v) { return -v; });
    CHECK(mutual_information(a, neg).nats == doctest::Approx(mutual_information(a, a).nats).epsilon(1e-12));
    CHECK(mutual_information(a, b).nats == mutual_information(b, a).nats);
}

TEST_CASE("mutual information edge cases") {
    const std::vector<double> a = uniform_sample(100, 6);
    const std::vector<double> flat(100, 2.0);
    const MutualInformation mi = mutual_information(a, flat);
    CHECK(mi.zero_variance);
    CHECK(mi.nats == 0.0);
    CHECK_THROWS_AS(mutual_information(std::vector<double>(10, 1.0), std::vector<double>(10, 1.0)), SizeError);
}

TEST_CASE("mi recovery on noiseless coupled data") {
    CoupledSpec spec;
    spec.dropout = 0.0;
    spec.measurement_noise = 0.0;
    spec.seed = 5;
    const MultimodalSet set = make_coupled(spec);
    double clean = 0.0;
    for (const auto& [i, j] : set.coupled_pairs) {
        clean += mutual_information(column(set.modality1, i), column(set.modality2, j)).nats;
    }
    clean /= static_cast<double>(set.coupled_pairs.size());

    const std::vector<DenoiseStrategy> all = {DenoiseStrategy::none, DenoiseStrategy::modality_specific,
                                              DenoiseStrategy::alternating, DenoiseStrategy::integrated};
    const EvalReport report = mi_recovery_benchmark(set, all, FusionConfig{});
    CHECK(report.metric == "mutual_information");
    CHECK(report.table.size() == 4);
    for (const auto& [name, value] : report.table) {
        CAPTURE(name);
        CHECK(std::abs(value - clean) < 0.05 * clean);
    }
}

TEST_CASE("sparse views hide planted dependence") {
    CoupledSpec spec;
    spec.seed = 1;
    const MultimodalSet set = make_coupled(spec);
    const std::vector<DenoiseStrategy> none = {DenoiseStrategy::none};
    CHECK(mi_recovery_benchmark(set, none, FusionConfig{}).value < 0.05);
}

TEST_CASE("denoise strategy names") {
    for (auto s : {DenoiseStrategy::none, DenoiseStrategy::modality_specific, DenoiseStrategy::alternating,
                   DenoiseStrategy::integrated}) {
        CHECK(parse_denoise_strategy(to_string(s)) == s);
    }
    CHECK_THROWS_AS(parse_denoise_strategy("magic"), ConfigError);
}

TEST_CASE("report json") {
    EvalReport r;
    r.metric = "demap";
    r.value = 0.5;
    r.table["integrated"] = 0.5;
    r.n_points = 10;
    const nlohmann::json j = r.to_json();
    CHECK(j.at("metric") == "demap");
    CHECK(j.at("n_points") == 10);
    CHECK(j.at("table").at("integrated") == 0.5);
}
