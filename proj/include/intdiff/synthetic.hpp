#pragma once

#include "intdiff/data_matrix.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace intdiff {

struct NoiseSpec {
    double nu1 = 0.0;
    double nu2 = 0.0;
    std::vector<double> branch_noise1;
    std::vector<double> branch_noise2;
    double dropout = 0.0;
};

/// Two aligned views of one system plus whatever ground truth the generator knows.
struct MultimodalSet {
    DataMatrix modality1;
    DataMatrix modality2;
    std::vector<int> labels;
    std::optional<DataMatrix> ground_truth;
    /// Exact geodesic distances of the noiseless data (trees only).
    std::optional<Eigen::MatrixXd> geodesics;
    /// Orthogonal maps taking ground truth coordinates to each modality (trees only).
    std::vector<Eigen::MatrixXd> modality_maps;
    /// (column in modality1, column in modality2) pairs with planted dependence.
    std::vector<std::pair<Index, Index>> coupled_pairs;
    NoiseSpec noise;
    std::uint64_t seed = 0;

    Index size() const { return modality1.rows(); }
    /// Throws AlignmentError/SizeError if the parts disagree on N or row ids.
    void validate() const;
};

/// modality_k = base + N(0, nu_k^2) elementwise; no clamping.
MultimodalSet make_noisy_pair(const DataMatrix& base, double nu1, double nu2, std::uint64_t seed,
                              std::vector<int> labels = {});

struct TreeSpec {
    int branches = 5;
    int points_per_branch = 100;
    int ambient_dim = 60;
    double branch_length = 10.0;
    /// Per-branch noise for modality 1 (missing entries are 0).
    std::vector<double> branch_noise;
    /// Per-branch noise for modality 2; empty means "same as branch_noise".
    std::vector<double> branch_noise2;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Straight-segment branching tree. Branch 0 leaves the origin along a random
/// unit direction; branch b > 0 starts at a uniform point of a random earlier
/// branch. Each modality is an independent random rotation of the tree plus
/// per-branch Gaussian noise. Labels are branch ids; geodesics are exact.
MultimodalSet make_tree(const TreeSpec& spec);

struct CoupledSpec {
    int points = 600;
    int pairs = 20;
    int extra_features = 80;
    int branches = 5;
    int latent_dim = 10;
    double bump_width = 0.35;
    /// Gaussian measurement noise added before dropout, clamped at 0.
    double measurement_noise = 0.2;
    double dropout = 0.7;
    std::uint64_t seed = 0;
};

/// Expression-like / accessibility-like views of a latent tree. Planted pair j
/// is a localized bump g_j over the tree in modality 1 and sqrt(g_j) in
/// modality 2; extra features are independent bumps. Both views get clamped
/// Gaussian measurement noise, then every entry is zeroed with probability
/// `dropout`. ground_truth holds clean modality 1.
MultimodalSet make_coupled(const CoupledSpec& spec);

/// Zero each entry independently with probability p.
DataMatrix sparsify(const DataMatrix& data, double p, std::uint64_t seed);

/// Haar-random orthogonal matrix.
Eigen::MatrixXd random_orthogonal(int n, std::uint64_t seed);

}  // namespace intdiff
