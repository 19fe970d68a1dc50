#include "intdiff/operator.hpp"

#include "intdiff/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace intdiff {

Bandwidth Bandwidth::fixed(double epsilon) {
    Bandwidth b;
    b.kind = Kind::fixed;
    b.epsilon = epsilon;
    return b;
}

Bandwidth Bandwidth::median_knn(int k, double scale) {
    Bandwidth b;
    b.kind = Kind::median_knn;
    b.knn = k;
    b.scale = scale;
    return b;
}

void DiffusionOperator::validate(double tolerance) const {
    if (values.rows() != values.cols() || degrees.size() != values.rows() ||
        static_cast<Index>(row_ids.size()) != values.rows()) {
        throw SizeError("diffusion operator has inconsistent dimensions");
    }
    if (!values.allFinite() || (values.array() < 0.0).any()) {
        throw NumericalError("diffusion operator has negative or non-finite entries");
    }
    if ((degrees.array() <= 0.0).any()) {
        throw NumericalError("diffusion operator has a non-positive degree");
    }
    if (const double err = row_sum_error(values); err > tolerance) {
        throw NumericalError("diffusion operator rows deviate from 1 by " + std::to_string(err));
    }
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& points) {
    const Index n = points.rows();
    const Eigen::MatrixXd gram = points * points.transpose();
    const Eigen::VectorXd norms = points.rowwise().squaredNorm();
    Eigen::MatrixXd out(n, n);
    for (Index j = 0; j < n; ++j) {
        out(j, j) = 0.0;
        for (Index i = 0; i < j; ++i) {
            const double d = std::max(0.0, norms(i) + norms(j) - 2.0 * gram(i, j));
            out(i, j) = d;
            out(j, i) = d;
        }
    }
    return out;
}

double resolve_bandwidth(const Eigen::MatrixXd& squared, const Bandwidth& policy) {
    if (policy.kind == Bandwidth::Kind::fixed) {
        if (!(policy.epsilon > 0.0) || !std::isfinite(policy.epsilon)) {
            throw ValidationError("explicit bandwidth must be positive and finite");
        }
        return policy.epsilon;
    }
    const Index n = squared.rows();
    if (policy.knn < 1) {
        throw ValidationError("median k-NN bandwidth needs k >= 1");
    }
    if (!(policy.scale > 0.0) || !std::isfinite(policy.scale)) {
        throw ValidationError("bandwidth scale must be positive and finite");
    }
    const Index k = std::min<Index>(policy.knn, n - 1);
    std::vector<double> kth(static_cast<std::size_t>(n));
    std::vector<double> row(static_cast<std::size_t>(n - 1));
    for (Index i = 0; i < n; ++i) {
        std::size_t w = 0;
        for (Index j = 0; j < n; ++j) {
            if (j != i) {
                row[w++] = squared(i, j);
            }
        }
        std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
        kth[static_cast<std::size_t>(i)] = std::sqrt(row[static_cast<std::size_t>(k - 1)]);
    }
    const std::size_t mid = kth.size() / 2;
    std::nth_element(kth.begin(), kth.begin() + static_cast<std::ptrdiff_t>(mid), kth.end());
    double median = kth[mid];
    if (kth.size() % 2 == 0) {
        median = 0.5 * (median + *std::max_element(kth.begin(), kth.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    if (const double eps = policy.scale * median * median; eps > 0.0) {
        return eps;
    }
    // Mostly duplicated points: fall back to the mean positive squared distance.
    double sum = 0.0;
    Index count = 0;
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < j; ++i) {
            if (squared(i, j) > 0.0) {
                sum += squared(i, j);
                ++count;
            }
        }
    }
    return policy.scale * (count > 0 ? sum / static_cast<double>(count) : 1.0);
}

Kernel gaussian_kernel_from_distances(const Eigen::MatrixXd& squared, const Bandwidth& policy,
                                      std::vector<RowId> row_ids) {
    const Index n = squared.rows();
    if (n < 2) {
        throw SizeError("a kernel needs at least 2 points, got " + std::to_string(n));
    }
    if (squared.cols() != n || static_cast<Index>(row_ids.size()) != n) {
        throw SizeError("distance matrix and row ids disagree in size");
    }
    if (!squared.allFinite()) {
        throw ValidationError("non-finite distances");
    }
    Kernel k;
    k.bandwidth = resolve_bandwidth(squared, policy);
    k.row_ids = std::move(row_ids);
    k.values.resize(n, n);
    for (Index j = 0; j < n; ++j) {
        k.values(j, j) = 1.0;
        for (Index i = 0; i < j; ++i) {
            const double v = std::exp(-squared(i, j) / k.bandwidth);
            k.values(i, j) = v;
            k.values(j, i) = v;
        }
    }
    return k;
}

Kernel gaussian_kernel(const DataMatrix& data, const Bandwidth& policy) {
    data.validate();
    if (data.rows() < 2) {
        throw SizeError("a kernel needs at least 2 points, got " + std::to_string(data.rows()));
    }
    return gaussian_kernel_from_distances(squared_distances(data.values), policy, data.row_ids);
}

DiffusionOperator diffusion_operator(const Kernel& kernel) {
    DiffusionOperator op;
    op.degrees = kernel.values.rowwise().sum();
    if (!(op.degrees.array() > 0.0).all()) {
        throw NumericalError("kernel has a zero row sum");
    }
    op.values = op.degrees.cwiseInverse().asDiagonal() * kernel.values;
    op.row_ids = kernel.row_ids;
    return op;
}

void normalize_rows(Eigen::MatrixXd& m) {
    const Eigen::VectorXd sums = m.rowwise().sum();
    m = sums.cwiseInverse().asDiagonal() * m;
}

double row_sum_error(const Eigen::MatrixXd& m) {
    return (m.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

Eigen::MatrixXd stochastic_power(const Eigen::MatrixXd& p, int t) {
    if (t < 0) {
        throw ValidationError("matrix power needs t >= 0");
    }
    if (p.rows() != p.cols()) {
        throw SizeError("matrix power needs a square matrix");
    }
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(p.rows(), p.cols());
    if (t == 0) {
        return result;
    }
    Eigen::MatrixXd base = p;
    bool first = true;
    for (int e = t;;) {
        if (e & 1) {
            if (first) {
                result = base;
                first = false;
            } else {
                result = result * base;
            }
        }
        e >>= 1;
        if (e == 0) {
            break;
        }
        base = base * base;
    }
    normalize_rows(result);
    return result;
}

DiffusionOperator power(const DiffusionOperator& op, int t) {
    DiffusionOperator out;
    out.values = stochastic_power(op.values, t);
    out.degrees = op.degrees;
    out.row_ids = op.row_ids;
    return out;
}

}  // namespace intdiff
