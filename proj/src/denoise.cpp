#include "intdiff/denoise.hpp"

#include "intdiff/error.hpp"
#include "intdiff/linalg.hpp"
#include "intdiff/spectral.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace intdiff {

void MgdConfig::validate() const {
    if (t < 1) {
        throw ValidationError("MGD needs t >= 1");
    }
    if (c < 2) {
        throw ValidationError("MGD needs c >= 2 clusters per level");
    }
    if (tau < c) {
        throw ValidationError("MGD needs tau >= c");
    }
    if (max_depth < 1) {
        throw ValidationError("MGD needs max_depth >= 1");
    }
}

DataMatrix apply_operator(const Eigen::MatrixXd& op, const DataMatrix& data, int t) {
    if (op.rows() != op.cols() || op.cols() != data.rows()) {
        throw SizeError("operator is " + std::to_string(op.rows()) + "x" + std::to_string(op.cols()) +
                        " but data has " + std::to_string(data.rows()) + " rows");
    }
    if (t < 0) {
        throw ValidationError("denoising needs t >= 0");
    }
    Eigen::MatrixXd x = data.values;
    for (int i = 0; i < t; ++i) {
        x = op * x;
    }
    return data.with_values(std::move(x));
}

DataMatrix diffusion_denoise(const DiffusionOperator& op, const DataMatrix& data, int t) {
    if (op.size() != data.rows()) {
        throw SizeError("diffusion_denoise: operator is " + std::to_string(op.size()) + " but data has " +
                        std::to_string(data.rows()) + " rows");
    }
    require_aligned(op.row_ids, data.row_ids, "diffusion_denoise");
    if (t < 1) {
        throw ValidationError("diffusion_denoise needs t >= 1");
    }
    return apply_operator(op.values, data, t);
}

std::vector<int> kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int max_iterations) {
    const Index n = points.rows();
    if (k < 1 || k > n) {
        throw SizeError("k-means needs 1 <= k <= N");
    }
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd centers(k, points.cols());

    // k-means++ seeding
    std::uniform_int_distribution<Index> first(0, n - 1);
    centers.row(0) = points.row(first(rng));
    Eigen::VectorXd nearest = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = nearest.sum();
        Index pick = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(rng);
            for (pick = 0; pick < n - 1; ++pick) {
                target -= nearest(pick);
                if (target <= 0.0) {
                    break;
                }
            }
        } else {
            pick = first(rng);
        }
        centers.row(c) = points.row(pick);
        nearest = nearest.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }

    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    for (int iter = 0; iter < max_iterations; ++iter) {
        bool changed = false;
        Eigen::VectorXd dist(n);
        for (Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = (points.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            dist(i) = best_d;
            if (labels[static_cast<std::size_t>(i)] != best) {
                labels[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        std::vector<Index> counts(static_cast<std::size_t>(k), 0);
        for (int l : labels) {
            ++counts[static_cast<std::size_t>(l)];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                continue;
            }
            // Refill an empty cluster with the worst-fitting point of a cluster that can spare it.
            Index worst = -1;
            for (Index i = 0; i < n; ++i) {
                if (counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] > 1 &&
                    (worst < 0 || dist(i) > dist(worst))) {
                    worst = i;
                }
            }
            if (worst < 0 || dist(worst) == 0.0) {
                break;
            }
            --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(worst)])];
            labels[static_cast<std::size_t>(worst)] = c;
            counts[static_cast<std::size_t>(c)] = 1;
            dist(worst) = 0.0;
            changed = true;
        }
        if (!changed && iter > 0) {
            break;
        }
        centers.setZero();
        for (Index i = 0; i < n; ++i) {
            centers.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                centers.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
            }
        }
    }
    return labels;
}

Partition spectral_cluster(const DiffusionOperator& op, int c, std::uint64_t seed) {
    const Index n = op.size();
    if (c < 2) {
        throw ValidationError("spectral clustering needs c >= 2");
    }
    if (c > n) {
        throw SizeError("spectral clustering asked for " + std::to_string(c) + " clusters of " + std::to_string(n) +
                        " points");
    }
    Partition groups;
    if (c == n) {
        for (Index i = 0; i < n; ++i) {
            groups.push_back({i});
        }
        return groups;
    }
    // Top c eigenvectors of M, stationary direction included. Row normalisation
    // and k-means only see distances, so any basis of a repeated eigenvalue
    // (e.g. 1 on a disconnected graph) gives the same partition.
    const auto top = linalg::symmetric_eigen_top(symmetric_conjugate(op), c);
    Eigen::MatrixXd embedding = top.vectors.rowwise().reverse();
    for (Index i = 0; i < n; ++i) {
        const double norm = embedding.row(i).norm();
        if (norm > 0.0) {
            embedding.row(i) /= norm;
        }
    }
    const std::vector<int> labels = kmeans(embedding, c, seed);
    groups.assign(static_cast<std::size_t>(c), {});
    for (Index i = 0; i < n; ++i) {
        groups[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])].push_back(i);
    }
    std::erase_if(groups, [](const auto& g) { return g.empty(); });
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return groups;
}

std::vector<Index> canonical_order(const Eigen::MatrixXd& x) {
    std::vector<Index> order(static_cast<std::size_t>(x.rows()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&x](Index a, Index b) {
        for (Index j = 0; j < x.cols(); ++j) {
            if (x(a, j) != x(b, j)) {
                return x(a, j) < x(b, j);
            }
        }
        return false;
    });
    return order;
}

std::uint64_t content_hash(const Eigen::MatrixXd& x) {
    std::uint64_t h = 14695981039346656037ULL;
    auto mix = [&h](const void* p, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    };
    const std::int64_t dims[2] = {x.rows(), x.cols()};
    mix(dims, sizeof dims);
    mix(x.data(), static_cast<std::size_t>(x.size()) * sizeof(double));
    return h;
}

namespace {

struct MgdStats {
    std::vector<double> squared_corrections;
    int degenerate = 0;
};

Eigen::MatrixXd mgd_level(const Eigen::MatrixXd& x, int depth, const MgdConfig& cfg, MgdStats& stats) {
    const Index n = x.rows();
    if (n < cfg.tau || depth >= cfg.max_depth) {
        return x;
    }
    // Work in content order so the result does not depend on row order.
    const std::vector<Index> order = canonical_order(x);
    Eigen::MatrixXd xc(n, x.cols());
    for (Index i = 0; i < n; ++i) {
        xc.row(i) = x.row(order[static_cast<std::size_t>(i)]);
    }
    const DataMatrix local(xc);
    const DiffusionOperator op = diffusion_operator(gaussian_kernel(local, cfg.bandwidth));
    const Eigen::MatrixXd denoised = diffusion_denoise(op, local, cfg.t).values;
    const Partition parts = spectral_cluster(op, cfg.c, content_hash(xc));

    Eigen::MatrixXd merged(n, x.cols());
    if (parts.size() <= 1) {
        ++stats.degenerate;
        merged = denoised;
    } else {
        for (const auto& part : parts) {
            Eigen::MatrixXd sub(static_cast<Index>(part.size()), x.cols());
            for (std::size_t i = 0; i < part.size(); ++i) {
                sub.row(static_cast<Index>(i)) = denoised.row(part[i]);
            }
            const Eigen::MatrixXd sub_out = mgd_level(sub, depth + 1, cfg, stats);
            for (std::size_t i = 0; i < part.size(); ++i) {
                merged.row(part[i]) = sub_out.row(static_cast<Index>(i));
            }
        }
    }
    const Eigen::MatrixXd level = 0.5 * (xc + merged);
    if (stats.squared_corrections.size() <= static_cast<std::size_t>(depth)) {
        stats.squared_corrections.resize(static_cast<std::size_t>(depth) + 1, 0.0);
    }
    stats.squared_corrections[static_cast<std::size_t>(depth)] += (level - xc).squaredNorm();

    Eigen::MatrixXd out(n, x.cols());
    for (Index i = 0; i < n; ++i) {
        out.row(order[static_cast<std::size_t>(i)]) = level.row(i);
    }
    return out;
}

}  // namespace

MgdResult mgd_detailed(const DataMatrix& data, const MgdConfig& config) {
    config.validate();
    data.validate();
    MgdStats stats;
    MgdResult result;
    result.output = data.with_values(mgd_level(data.values, 0, config, stats));
    result.level_corrections.reserve(stats.squared_corrections.size());
    for (double s : stats.squared_corrections) {
        result.level_corrections.push_back(std::sqrt(s));
    }
    result.degenerate_stops = stats.degenerate;
    return result;
}

DataMatrix mgd(const DataMatrix& data, const MgdConfig& config) {
    return mgd_detailed(data, config).output;
}

}  // namespace intdiff
