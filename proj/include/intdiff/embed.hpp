#pragma once

#include "intdiff/data_matrix.hpp"
#include "intdiff/operator.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace intdiff {

struct IntegratedOperator;

/// Diffusion-map coordinates lambda_i^t phi_i, columns ordered by |lambda|.
///
/// Eigenvectors are scaled to unit Euclidean norm and each column is signed so
/// that its largest-magnitude entry is positive. A complex pair contributes
/// two columns (real and imaginary part of lambda^t phi); both record the
/// eigenvalue with positive imaginary part.
struct Embedding {
    Eigen::MatrixXd coords;
    Eigen::VectorXcd eigenvalues_used;
    Eigen::VectorXd trivial_vector;  // unit-norm constant eigenvector that was dropped
    std::vector<RowId> row_ids;
    int diffusion_time = 1;
    bool trivial_dropped = true;
    bool complex_pairs = false;
    bool svd_fallback = false;

    Index dims() const { return coords.cols(); }
};

/// General (non-symmetric) route; works for any row-stochastic matrix.
/// Falls back to a singular-vector embedding (flagged) if the eigensolver fails.
Embedding diffusion_map(const Eigen::MatrixXd& op, int m, int t = 1, std::vector<RowId> row_ids = {});

/// Reversible route through the symmetric conjugate.
Embedding diffusion_map(const DiffusionOperator& op, int m, int t = 1);

/// Uses the reversible route when the fused operator carries degrees.
Embedding diffusion_map(const IntegratedOperator& op, int m, int t = 1);

/// Columns: row_id,dim1..dimm
void write_embedding_csv(std::ostream& out, const Embedding& embedding);

/// Scatter of the first two coordinates, coloured by label with one legend
/// entry per distinct label.
std::string scatter_2d(const Embedding& embedding, std::optional<std::span<const int>> labels = std::nullopt);

}  // namespace intdiff
