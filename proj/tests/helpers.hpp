#pragma once

#include "intdiff/data_matrix.hpp"
#include "intdiff/operator.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace testing {

inline Eigen::MatrixXd gaussian_points(int n, int d, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, sd);
    Eigen::MatrixXd m(n, d);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = dist(gen);
        }
    }
    return m;
}

inline intdiff::DiffusionOperator random_operator(int n, std::uint64_t seed, int d = 3) {
    const intdiff::DataMatrix data(gaussian_points(n, d, seed));
    return intdiff::diffusion_operator(intdiff::gaussian_kernel(data, intdiff::Bandwidth::median_knn(5, 2.0)));
}

/// Two blobs `gap` apart along the first axis; labels are blob ids.
inline Eigen::MatrixXd two_blobs(int per_blob, double gap, std::uint64_t seed, std::vector<int>* labels = nullptr) {
    Eigen::MatrixXd m = gaussian_points(2 * per_blob, 2, seed);
    for (int i = per_blob; i < 2 * per_blob; ++i) {
        m(i, 0) += gap;
    }
    if (labels) {
        labels->assign(static_cast<std::size_t>(2 * per_blob), 0);
        for (int i = per_blob; i < 2 * per_blob; ++i) {
            (*labels)[static_cast<std::size_t>(i)] = 1;
        }
    }
    return m;
}

inline Eigen::MatrixXd permutation_matrix(const std::vector<Eigen::Index>& perm) {
    const auto n = static_cast<Eigen::Index>(perm.size());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        p(i, perm[static_cast<std::size_t>(i)]) = 1.0;
    }
    return p;
}

inline std::vector<Eigen::Index> random_permutation(int n, std::uint64_t seed) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        perm[static_cast<std::size_t>(i)] = i;
    }
    std::mt19937_64 gen(seed);
    std::shuffle(perm.begin(), perm.end(), gen);
    return perm;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

/// Max distance to the chord through the first and last points, smallest index on ties.
inline std::size_t brute_force_elbow(const std::vector<double>& y) {
    const double x0 = 1.0, y0 = y.front();
    const double x1 = static_cast<double>(y.size()), y1 = y.back();
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double x = static_cast<double>(i + 1);
        const double d = std::abs((y1 - y0) * x - (x1 - x0) * y[i] + x1 * y0 - y1 * x0) /
                         std::hypot(y1 - y0, x1 - x0);
        if (d > best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

}  // namespace testing
