#pragma once

#include "intdiff/data_matrix.hpp"
#include "intdiff/operator.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace intdiff {

/// Eigen-decomposition of a reversible diffusion operator through its
/// symmetric conjugate M = D^1/2 P D^-1/2. Eigenvalues are descending.
struct EigenSystem {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd right_vectors;  // Phi = D^-1/2 V, right eigenvectors of P
    Eigen::MatrixXd ortho_vectors;  // V, orthonormal eigenvectors of M
    Eigen::VectorXd sqrt_degrees;

    Index size() const { return eigenvalues.size(); }
};

/// Spectral response h(lambda) of a graph filter.
using SpectralResponse = std::function<double(double)>;

/// D^1/2 P D^-1/2, symmetrised to remove round-off asymmetry.
Eigen::MatrixXd symmetric_conjugate(const DiffusionOperator& op);

EigenSystem eigendecompose(const DiffusionOperator& op);

/// Eigenvalues only (descending); cheaper than a full decomposition.
Eigen::VectorXd operator_eigenvalues(const DiffusionOperator& op);

/// D^-1/2 V h(Lambda) V^T D^1/2 f. With h(l) = l^t this equals P^t f.
DataMatrix graph_filter(const EigenSystem& eig, const DataMatrix& signal, const SpectralResponse& h);
DataMatrix graph_filter(const DiffusionOperator& op, const DataMatrix& signal, const SpectralResponse& h);

/// Shannon entropy (nats) of psi_i = |l_i|^t / sum_j |l_j|^t. `top_k` keeps
/// only the k largest |l| before normalising.
double spectral_entropy(std::span<const double> eigenvalues, int t, std::optional<Index> top_k = std::nullopt);
double spectral_entropy(const EigenSystem& eig, int t, std::optional<Index> top_k = std::nullopt);

struct EntropyCurve {
    std::vector<int> timescales;  // 1..t_max
    std::vector<double> entropies;
    int elbow = 1;
};

/// Index of the point farthest from the chord joining the first and last
/// points of (1, v0), (2, v1), ...; ties go to the smallest index.
std::size_t elbow_index(std::span<const double> curve);

EntropyCurve select_timescale(std::span<const double> eigenvalues, int t_max = 64,
                              std::optional<Index> top_k = std::nullopt);
EntropyCurve select_timescale(const EigenSystem& eig, int t_max = 64, std::optional<Index> top_k = std::nullopt);

/// Columns: t,entropy,is_elbow
void write_entropy_csv(std::ostream& out, const EntropyCurve& curve);

}  // namespace intdiff
