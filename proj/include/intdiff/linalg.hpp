#pragma once

// Thin wrappers over LAPACK eigensolvers used by the spectral and embedding code.

#include <Eigen/Dense>

namespace intdiff::linalg {

struct SymmetricEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // orthonormal columns, empty when not requested
};

/// Full decomposition of a symmetric matrix (upper triangle is read).
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a, bool with_vectors = true);

/// The `count` algebraically largest eigenpairs, still in ascending order.
SymmetricEigen symmetric_eigen_top(const Eigen::MatrixXd& a, Eigen::Index count);

struct GeneralEigen {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;  // right eigenvectors, unit 2-norm columns
};

/// Eigen-decomposition of a general real square matrix (LAPACK dgeev).
GeneralEigen general_eigen(const Eigen::MatrixXd& a);

}  // namespace intdiff::linalg
