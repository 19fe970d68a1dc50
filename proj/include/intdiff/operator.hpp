#pragma once

#include "intdiff/data_matrix.hpp"

#include <Eigen/Dense>

namespace intdiff {

/// Kernel bandwidth policy. `epsilon` is in squared-distance units.
struct Bandwidth {
    enum class Kind { fixed, median_knn };

    Kind kind = Kind::median_knn;
    double epsilon = 0.0;
    int knn = 5;
    double scale = 1.0;  // multiplier on the median k-NN estimate

    static Bandwidth fixed(double epsilon);
    /// epsilon = scale * (median over points of the distance to the k-th nearest neighbour)^2
    static Bandwidth median_knn(int k = 5, double scale = 1.0);
};

/// Symmetric Gaussian affinity with unit diagonal.
struct Kernel {
    Eigen::MatrixXd values;
    double bandwidth = 0.0;
    std::vector<RowId> row_ids;

    Index size() const { return values.rows(); }
};

/// Row-stochastic P = D^-1 K. `degrees` are the row sums of the kernel that
/// produced P; powers of P share them, which keeps the symmetric conjugate
/// D^1/2 P^t D^-1/2 available downstream.
struct DiffusionOperator {
    Eigen::MatrixXd values;
    Eigen::VectorXd degrees;
    std::vector<RowId> row_ids;

    Index size() const { return values.rows(); }
    /// Checks row sums (1e-10), nonnegativity and positive degrees.
    void validate(double tolerance = 1e-10) const;
};

/// Pairwise squared Euclidean distances via |a|^2 + |b|^2 - 2ab, clamped at 0.
/// Exactly symmetric with a zero diagonal.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& points);

/// Resolves a policy against a squared-distance matrix.
double resolve_bandwidth(const Eigen::MatrixXd& squared, const Bandwidth& policy);

Kernel gaussian_kernel(const DataMatrix& data, const Bandwidth& policy = {});
Kernel gaussian_kernel_from_distances(const Eigen::MatrixXd& squared, const Bandwidth& policy,
                                      std::vector<RowId> row_ids);

DiffusionOperator diffusion_operator(const Kernel& kernel);

/// P^t by repeated squaring; rows are renormalised once at the end.
DiffusionOperator power(const DiffusionOperator& op, int t);

/// Same for an arbitrary row-stochastic matrix.
Eigen::MatrixXd stochastic_power(const Eigen::MatrixXd& p, int t);

void normalize_rows(Eigen::MatrixXd& m);

/// Largest |row sum - 1|.
double row_sum_error(const Eigen::MatrixXd& m);

}  // namespace intdiff
