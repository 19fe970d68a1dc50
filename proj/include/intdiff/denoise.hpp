#pragma once

#include "intdiff/data_matrix.hpp"
#include "intdiff/operator.hpp"

#include <cstdint>
#include <vector>

namespace intdiff {

/// Parameters of multiscale graph denoising.
struct MgdConfig {
    int t = 3;          // local diffusion steps per level
    int tau = 32;       // inputs smaller than this are returned unchanged
    int c = 2;          // clusters per level
    int max_depth = 4;  // recursion cap
    Bandwidth bandwidth;

    void validate() const;
};

/// P^t X by repeated application of P (no eigendecomposition).
DataMatrix diffusion_denoise(const DiffusionOperator& op, const DataMatrix& data, int t);

/// A^t X for any square operator, e.g. a fused one.
DataMatrix apply_operator(const Eigen::MatrixXd& op, const DataMatrix& data, int t = 1);

using Partition = std::vector<std::vector<Index>>;

/// Lloyd's k-means with k-means++ seeding; returns a label per row. Empty
/// clusters are refilled with the point farthest from its centroid.
std::vector<int> kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int max_iterations = 100);

/// k-means on the unit-normalised rows of the top-c eigenvectors of the
/// symmetric conjugate. Groups are disjoint, cover 0..N-1, are listed by
/// their smallest member, and empty groups are dropped.
Partition spectral_cluster(const DiffusionOperator& op, int c, std::uint64_t seed);

/// Lexicographic row order; identical content gives identical order
/// regardless of how the rows were permuted.
std::vector<Index> canonical_order(const Eigen::MatrixXd& x);

/// FNV-1a over the raw bytes of the matrix.
std::uint64_t content_hash(const Eigen::MatrixXd& x);

struct MgdResult {
    DataMatrix output;
    /// Frobenius norm of (level output - level input) summed over every branch
    /// at that depth; index 0 is the top level.
    std::vector<double> level_corrections;
    /// Branches where clustering returned a single group.
    int degenerate_stops = 0;
};

DataMatrix mgd(const DataMatrix& data, const MgdConfig& config);
MgdResult mgd_detailed(const DataMatrix& data, const MgdConfig& config);

}  // namespace intdiff
