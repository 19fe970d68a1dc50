#include "intdiff/embed.hpp"

#include "intdiff/error.hpp"
#include "intdiff/format.hpp"
#include "intdiff/fusion.hpp"
#include "intdiff/linalg.hpp"
#include "intdiff/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace intdiff {
namespace {

constexpr double kUnitTolerance = 1e-8;
constexpr double kImagTolerance = 1e-10;

void apply_sign_convention(Eigen::Ref<Eigen::VectorXd> col) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < col.size(); ++i) {
        if (std::abs(col(i)) > best) {
            best = std::abs(col(i));
            arg = i;
        }
    }
    if (col(arg) < 0.0) {
        col = -col;
    }
}

/// Splits the eigenspace of lambda ~ 1 into the constant direction and an
/// orthonormal remainder (nonempty only for disconnected graphs).
Eigen::MatrixXd strip_constant(const Eigen::MatrixXd& unit_space) {
    const Index n = unit_space.rows();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(unit_space);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, unit_space.cols());
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    // Gram-Schmidt against the constant vector first.
    Eigen::MatrixXd basis(n, unit_space.cols());
    basis.col(0) = ones;
    Index filled = 1;
    for (Index j = 0; j < q.cols() && filled < unit_space.cols(); ++j) {
        Eigen::VectorXd v = q.col(j);
        for (Index k = 0; k < filled; ++k) {
            v -= basis.col(k).dot(v) * basis.col(k);
        }
        if (v.norm() > 1e-6) {
            basis.col(filled++) = v.normalized();
        }
    }
    return basis.middleCols(1, filled - 1);
}

Embedding svd_embedding(const Eigen::MatrixXd& op, int m, int t, std::vector<RowId> row_ids) {
    const Eigen::MatrixXd powered = stochastic_power(op, t);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(powered, Eigen::ComputeThinU);
    Embedding e;
    e.svd_fallback = true;
    e.diffusion_time = t;
    e.row_ids = std::move(row_ids);
    e.trivial_vector = svd.matrixU().col(0);
    e.coords.resize(op.rows(), m);
    e.eigenvalues_used.resize(m);
    for (int j = 0; j < m; ++j) {
        e.coords.col(j) = svd.matrixU().col(j + 1) * svd.singularValues()(j + 1);
        e.eigenvalues_used(j) = svd.singularValues()(j + 1);
        apply_sign_convention(e.coords.col(j));
    }
    return e;
}

void check_request(Index n, int m, int t) {
    if (m < 1) {
        throw ValidationError("embedding needs m >= 1");
    }
    if (m > n - 1) {
        throw SizeError("embedding dimension " + std::to_string(m) + " exceeds N-1 = " + std::to_string(n - 1));
    }
    if (t < 0) {
        throw ValidationError("embedding needs t >= 0");
    }
}

}  // namespace

Embedding diffusion_map(const Eigen::MatrixXd& op, int m, int t, std::vector<RowId> row_ids) {
    const Index n = op.rows();
    if (n != op.cols()) {
        throw SizeError("diffusion_map needs a square operator");
    }
    check_request(n, m, t);
    if (row_ids.empty()) {
        row_ids = default_row_ids(n);
    }

    linalg::GeneralEigen eig;
    try {
        eig = linalg::general_eigen(op);
    } catch (const NumericalError&) {
        return svd_embedding(op, m, t, std::move(row_ids));
    }
    if (!eig.vectors.allFinite()) {
        return svd_embedding(op, m, t, std::move(row_ids));
    }

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        const auto la = eig.values(a), lb = eig.values(b);
        if (std::abs(la) != std::abs(lb)) {
            return std::abs(la) > std::abs(lb);
        }
        if (la.real() != lb.real()) {
            return la.real() > lb.real();
        }
        return la.imag() > lb.imag();
    });
    if (std::abs(eig.values(order[0]) - 1.0) > 1e-6) {
        throw NumericalError("leading eigenvalue is not 1; operator is not row-stochastic");
    }

    // Group of eigenvalues at 1 (more than one when the graph is disconnected).
    std::size_t unit_count = 0;
    while (unit_count < order.size() && std::abs(eig.values(order[unit_count]) - 1.0) < kUnitTolerance) {
        ++unit_count;
    }
    Eigen::MatrixXd unit_space(n, static_cast<Index>(unit_count));
    for (std::size_t j = 0; j < unit_count; ++j) {
        unit_space.col(static_cast<Index>(j)) = eig.vectors.col(order[j]).real();
    }

    Embedding e;
    e.diffusion_time = t;
    e.row_ids = std::move(row_ids);
    e.trivial_vector = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    e.coords.resize(n, m);
    e.eigenvalues_used.resize(m);
    Index filled = 0;
    const Eigen::MatrixXd extra_unit = strip_constant(unit_space);
    for (Index j = 0; j < extra_unit.cols() && filled < m; ++j, ++filled) {
        e.coords.col(filled) = extra_unit.col(j);
        e.eigenvalues_used(filled) = 1.0;
    }
    for (std::size_t k = unit_count; k < order.size() && filled < m; ++k) {
        const std::complex<double> lambda = eig.values(order[k]);
        const std::complex<double> scale = std::pow(lambda, t);
        if (std::abs(lambda.imag()) <= kImagTolerance) {
            Eigen::VectorXd v = eig.vectors.col(order[k]).real();
            v.normalize();
            e.coords.col(filled) = scale.real() * v;
            e.eigenvalues_used(filled++) = lambda.real();
            continue;
        }
        // Conjugate pair: the partner is the next entry in sorted order.
        e.complex_pairs = true;
        const Eigen::VectorXcd v = eig.vectors.col(order[k]).normalized() * scale;
        const std::complex<double> upper(lambda.real(), std::abs(lambda.imag()));
        e.coords.col(filled) = v.real();
        e.eigenvalues_used(filled++) = upper;
        if (filled < m) {
            e.coords.col(filled) = lambda.imag() > 0 ? Eigen::VectorXd(v.imag()) : Eigen::VectorXd(-v.imag());
            e.eigenvalues_used(filled++) = upper;
        }
        ++k;
    }
    for (Index j = 0; j < m; ++j) {
        apply_sign_convention(e.coords.col(j));
    }
    if (!e.coords.allFinite()) {
        return svd_embedding(op, m, t, std::move(e.row_ids));
    }
    return e;
}

Embedding diffusion_map(const DiffusionOperator& op, int m, int t) {
    const Index n = op.size();
    check_request(n, m, t);
    const EigenSystem eig = eigendecompose(op);
    Index unit_count = 0;
    while (unit_count < n && std::abs(eig.eigenvalues(unit_count) - 1.0) < kUnitTolerance) {
        ++unit_count;
    }
    Embedding e;
    e.diffusion_time = t;
    e.row_ids = op.row_ids;
    e.trivial_vector = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    e.coords.resize(n, m);
    e.eigenvalues_used.resize(m);
    Index filled = 0;
    const Eigen::MatrixXd extra_unit = strip_constant(eig.right_vectors.leftCols(std::max<Index>(unit_count, 1)));
    for (Index j = 0; j < extra_unit.cols() && filled < m; ++j, ++filled) {
        e.coords.col(filled) = extra_unit.col(j);
        e.eigenvalues_used(filled) = 1.0;
    }
    for (Index k = std::max<Index>(unit_count, 1); k < n && filled < m; ++k, ++filled) {
        const double lambda = eig.eigenvalues(k);
        e.coords.col(filled) = std::pow(lambda, t) * eig.right_vectors.col(k).normalized();
        e.eigenvalues_used(filled) = lambda;
    }
    for (Index j = 0; j < m; ++j) {
        apply_sign_convention(e.coords.col(j));
    }
    return e;
}

Embedding diffusion_map(const IntegratedOperator& op, int m, int t) {
    if (op.degrees) {
        return diffusion_map(op.as_diffusion_operator(), m, t);
    }
    return diffusion_map(op.values, m, t, op.row_ids);
}

void write_embedding_csv(std::ostream& out, const Embedding& embedding) {
    out << "row_id";
    for (Index j = 0; j < embedding.dims(); ++j) {
        out << ",dim" << (j + 1);
    }
    out << '\n';
    for (Index i = 0; i < embedding.coords.rows(); ++i) {
        out << embedding.row_ids[static_cast<std::size_t>(i)];
        for (Index j = 0; j < embedding.dims(); ++j) {
            out << ',' << to_chars(embedding.coords(i, j));
        }
        out << '\n';
    }
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string scatter_2d(const Embedding& embedding, std::optional<std::span<const int>> labels) {
    const Index n = embedding.coords.rows();
    if (n == 0 || embedding.dims() < 2) {
        throw ValidationError("scatter_2d needs a non-empty embedding with at least 2 columns");
    }
    if (labels && static_cast<Index>(labels->size()) != n) {
        throw SizeError("scatter_2d: label count does not match point count");
    }
    constexpr double width = 640, height = 480, margin = 40, legend = 110;
    const Eigen::VectorXd xs = embedding.coords.col(0);
    const Eigen::VectorXd ys = embedding.coords.col(1);
    const double xmin = xs.minCoeff(), xmax = xs.maxCoeff();
    const double ymin = ys.minCoeff(), ymax = ys.maxCoeff();
    const double xspan = xmax > xmin ? xmax - xmin : 1.0;
    const double yspan = ymax > ymin ? ymax - ymin : 1.0;
    const double plot_w = width - 2 * margin - legend, plot_h = height - 2 * margin;

    std::map<int, std::size_t> colour;
    if (labels) {
        for (int l : *labels) {
            colour.emplace(l, 0);
        }
        std::size_t next = 0;
        for (auto& [label, idx] : colour) {
            idx = next++ % std::size(kPalette);
        }
    }

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<g class=\"points\">\n";
    for (Index i = 0; i < n; ++i) {
        const double px = margin + (xs(i) - xmin) / xspan * plot_w;
        const double py = height - margin - (ys(i) - ymin) / yspan * plot_h;
        const char* fill = labels ? kPalette[colour.at((*labels)[static_cast<std::size_t>(i)])] : kPalette[0];
        svg << "<circle cx=\"" << fixed2(px) << "\" cy=\"" << fixed2(py) << "\" r=\"3\" fill=\"" << fill
            << "\" fill-opacity=\"0.8\"/>\n";
    }
    svg << "</g>\n";
    if (labels) {
        svg << "<g class=\"legend\">\n";
        double y = margin;
        for (const auto& [label, idx] : colour) {
            svg << "<g class=\"legend-entry\"><rect x=\"" << fixed2(width - legend) << "\" y=\"" << fixed2(y)
                << "\" width=\"10\" height=\"10\" fill=\"" << kPalette[idx] << "\"/><text x=\""
                << fixed2(width - legend + 16) << "\" y=\"" << fixed2(y + 9)
                << "\" font-size=\"12\" font-family=\"sans-serif\">" << label << "</text></g>\n";
            y += 16;
        }
        svg << "</g>\n";
    }
    svg << "<text x=\"" << fixed2(margin) << "\" y=\"" << fixed2(height - 10)
        << "\" font-size=\"12\" font-family=\"sans-serif\">dim1</text>\n";
    svg << "<text x=\"10\" y=\"" << fixed2(margin - 10) << "\" font-size=\"12\" font-family=\"sans-serif\">dim2</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace intdiff
