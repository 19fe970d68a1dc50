#include "intdiff/spectral.hpp"

#include "intdiff/error.hpp"
#include "intdiff/format.hpp"
#include "intdiff/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace intdiff {

Eigen::MatrixXd symmetric_conjugate(const DiffusionOperator& op) {
    const Eigen::VectorXd s = op.degrees.cwiseSqrt();
    Eigen::MatrixXd m = s.asDiagonal() * op.values * s.cwiseInverse().asDiagonal();
    return 0.5 * (m + m.transpose());
}

EigenSystem eigendecompose(const DiffusionOperator& op) {
    if (op.size() == 0 || op.degrees.size() != op.size()) {
        throw SizeError("eigendecompose: operator and degree vector disagree");
    }
    const auto sym = linalg::symmetric_eigen(symmetric_conjugate(op));
    const Index n = op.size();
    EigenSystem out;
    out.sqrt_degrees = op.degrees.cwiseSqrt();
    out.eigenvalues = sym.values.reverse();
    out.ortho_vectors = sym.vectors.rowwise().reverse();
    out.right_vectors = out.sqrt_degrees.cwiseInverse().asDiagonal() * out.ortho_vectors;
    if (std::abs(out.eigenvalues(0) - 1.0) > 1e-8 || out.eigenvalues.cwiseAbs().maxCoeff() > 1.0 + 1e-8) {
        throw NumericalError("operator spectrum is not that of a stochastic matrix (lambda_0 = " +
                             to_chars(out.eigenvalues(0)) + ", n = " + std::to_string(n) + ")");
    }
    return out;
}

Eigen::VectorXd operator_eigenvalues(const DiffusionOperator& op) {
    return linalg::symmetric_eigen(symmetric_conjugate(op), false).values.reverse();
}

DataMatrix graph_filter(const EigenSystem& eig, const DataMatrix& signal, const SpectralResponse& h) {
    if (signal.rows() != eig.size()) {
        throw SizeError("graph_filter: signal has " + std::to_string(signal.rows()) + " rows, operator has " +
                        std::to_string(eig.size()));
    }
    Eigen::VectorXd response(eig.size());
    for (Index i = 0; i < eig.size(); ++i) {
        response(i) = h(eig.eigenvalues(i));
    }
    const Eigen::MatrixXd coeffs = eig.ortho_vectors.transpose() * (eig.sqrt_degrees.asDiagonal() * signal.values);
    Eigen::MatrixXd out = eig.sqrt_degrees.cwiseInverse().asDiagonal() *
                          (eig.ortho_vectors * (response.asDiagonal() * coeffs));
    return signal.with_values(std::move(out));
}

DataMatrix graph_filter(const DiffusionOperator& op, const DataMatrix& signal, const SpectralResponse& h) {
    return graph_filter(eigendecompose(op), signal, h);
}

double spectral_entropy(std::span<const double> eigenvalues, int t, std::optional<Index> top_k) {
    if (t < 1) {
        throw ValidationError("spectral entropy needs t >= 1");
    }
    std::vector<double> mags(eigenvalues.size());
    std::transform(eigenvalues.begin(), eigenvalues.end(), mags.begin(), [](double l) { return std::abs(l); });
    if (top_k && *top_k > 0 && static_cast<std::size_t>(*top_k) < mags.size()) {
        std::partial_sort(mags.begin(), mags.begin() + *top_k, mags.end(), std::greater<>());
        mags.resize(static_cast<std::size_t>(*top_k));
    }
    // S = log(sum w) - sum(w log w) / sum w with w = |l|^t; exact for equal weights.
    double total = 0.0;
    double weighted_log = 0.0;
    for (double m : mags) {
        if (m <= 0.0) {
            continue;
        }
        const double log_w = t * std::log(m);
        const double w = std::exp(log_w);
        if (w == 0.0) {
            continue;
        }
        total += w;
        weighted_log += w * log_w;
    }
    if (total == 0.0) {
        return 0.0;
    }
    return std::max(0.0, std::log(total) - weighted_log / total);
}

double spectral_entropy(const EigenSystem& eig, int t, std::optional<Index> top_k) {
    return spectral_entropy(std::span<const double>(eig.eigenvalues.data(), static_cast<std::size_t>(eig.size())), t,
                            top_k);
}

std::size_t elbow_index(std::span<const double> curve) {
    const std::size_t n = curve.size();
    if (n < 3) {
        return 0;
    }
    const double x1 = 1.0, y1 = curve.front();
    const double x2 = static_cast<double>(n), y2 = curve.back();
    std::vector<double> dist(n);
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i + 1);
        // |cross product| is proportional to the perpendicular distance.
        dist[i] = std::abs((x2 - x1) * (y1 - curve[i]) - (x1 - x) * (y2 - y1));
        best = std::max(best, dist[i]);
    }
    const double tolerance = 1e-12 * (1.0 + best);
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i] >= best - tolerance) {
            return i;
        }
    }
    return 0;
}

EntropyCurve select_timescale(std::span<const double> eigenvalues, int t_max, std::optional<Index> top_k) {
    if (t_max < 3) {
        throw ValidationError("select_timescale needs t_max >= 3");
    }
    EntropyCurve curve;
    curve.timescales.reserve(static_cast<std::size_t>(t_max));
    curve.entropies.reserve(static_cast<std::size_t>(t_max));
    for (int t = 1; t <= t_max; ++t) {
        curve.timescales.push_back(t);
        curve.entropies.push_back(spectral_entropy(eigenvalues, t, top_k));
    }
    curve.elbow = curve.timescales[elbow_index(curve.entropies)];
    return curve;
}

EntropyCurve select_timescale(const EigenSystem& eig, int t_max, std::optional<Index> top_k) {
    return select_timescale(std::span<const double>(eig.eigenvalues.data(), static_cast<std::size_t>(eig.size())),
                            t_max, top_k);
}

void write_entropy_csv(std::ostream& out, const EntropyCurve& curve) {
    out << "t,entropy,is_elbow\n";
    for (std::size_t i = 0; i < curve.timescales.size(); ++i) {
        out << curve.timescales[i] << ',' << to_chars(curve.entropies[i]) << ','
            << (curve.timescales[i] == curve.elbow ? 1 : 0) << '\n';
    }
}

}  // namespace intdiff
