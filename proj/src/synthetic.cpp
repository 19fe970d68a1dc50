#include "intdiff/synthetic.hpp"

#include "intdiff/error.hpp"
#include "intdiff/rng.hpp"

#include <cmath>
#include <random>
#include <string>

namespace intdiff {

void MultimodalSet::validate() const {
    modality1.validate();
    modality2.validate();
    require_aligned(modality1.row_ids, modality2.row_ids, "multimodal set");
    if (!labels.empty() && static_cast<Index>(labels.size()) != size()) {
        throw SizeError("multimodal set labels do not match N");
    }
    if (ground_truth) {
        require_aligned(modality1.row_ids, ground_truth->row_ids, "multimodal set ground truth");
    }
    if (geodesics && (geodesics->rows() != size() || geodesics->cols() != size())) {
        throw SizeError("multimodal set geodesics do not match N");
    }
}

namespace {

Eigen::MatrixXd gaussian_matrix(Index rows, Index cols, double sd, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    // Fill row-major so the draw order does not depend on storage order.
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            m(i, j) = sd * normal(rng);
        }
    }
    return m;
}

Eigen::VectorXd random_unit(int dim, std::mt19937_64& rng) {
    Eigen::VectorXd v = gaussian_matrix(dim, 1, 1.0, rng);
    return v / v.norm();
}

struct TreeSkeleton {
    Eigen::MatrixXd points;
    std::vector<int> branch;         // branch id per point
    std::vector<double> arclength;   // position along its branch
    std::vector<int> parent;         // parent branch (-1 for the root)
    std::vector<double> attach;      // arclength on the parent where the branch starts
};

TreeSkeleton build_skeleton(int branches, int per_branch, int dim, double length, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TreeSkeleton t;
    std::vector<Eigen::VectorXd> origin(static_cast<std::size_t>(branches));
    std::vector<Eigen::VectorXd> direction(static_cast<std::size_t>(branches));
    t.parent.assign(static_cast<std::size_t>(branches), -1);
    t.attach.assign(static_cast<std::size_t>(branches), 0.0);
    for (int b = 0; b < branches; ++b) {
        direction[static_cast<std::size_t>(b)] = random_unit(dim, rng);
        if (b == 0) {
            origin[0] = Eigen::VectorXd::Zero(dim);
        } else {
            std::uniform_int_distribution<int> pick(0, b - 1);
            const int p = pick(rng);
            const double a = unit(rng) * length;
            t.parent[static_cast<std::size_t>(b)] = p;
            t.attach[static_cast<std::size_t>(b)] = a;
            origin[static_cast<std::size_t>(b)] =
                origin[static_cast<std::size_t>(p)] + a * direction[static_cast<std::size_t>(p)];
        }
    }
    const Index n = static_cast<Index>(branches) * per_branch;
    t.points.resize(n, dim);
    for (int b = 0; b < branches; ++b) {
        for (int i = 0; i < per_branch; ++i) {
            const double s = unit(rng) * length;
            const Index row = static_cast<Index>(b) * per_branch + i;
            t.points.row(row) =
                (origin[static_cast<std::size_t>(b)] + s * direction[static_cast<std::size_t>(b)]).transpose();
            t.branch.push_back(b);
            t.arclength.push_back(s);
        }
    }
    return t;
}

/// Exact path lengths through the tree. Each branch is a line of stations
/// (its points, child attachment points and its start); consecutive stations
/// are joined by their arclength gap and a child's start is glued to its
/// attachment station on the parent.
Eigen::MatrixXd tree_geodesics(const TreeSkeleton& t) {
    const int branches = static_cast<int>(t.parent.size());
    const Index n = t.points.rows();
    struct Station {
        double s;
        Index node;
    };
    std::vector<std::vector<Station>> lines(static_cast<std::size_t>(branches));
    Index nodes = n;
    std::vector<Index> start_node(static_cast<std::size_t>(branches));
    for (int b = 0; b < branches; ++b) {
        start_node[static_cast<std::size_t>(b)] = nodes++;
        lines[static_cast<std::size_t>(b)].push_back({0.0, start_node[static_cast<std::size_t>(b)]});
    }
    for (Index i = 0; i < n; ++i) {
        lines[static_cast<std::size_t>(t.branch[static_cast<std::size_t>(i)])].push_back(
            {t.arclength[static_cast<std::size_t>(i)], i});
    }
    for (int b = 1; b < branches; ++b) {
        lines[static_cast<std::size_t>(t.parent[static_cast<std::size_t>(b)])].push_back(
            {t.attach[static_cast<std::size_t>(b)], start_node[static_cast<std::size_t>(b)]});
    }
    std::vector<std::vector<std::pair<Index, double>>> adj(static_cast<std::size_t>(nodes));
    for (auto& line : lines) {
        std::stable_sort(line.begin(), line.end(), [](const Station& a, const Station& b) { return a.s < b.s; });
        for (std::size_t k = 1; k < line.size(); ++k) {
            const double w = line[k].s - line[k - 1].s;
            adj[static_cast<std::size_t>(line[k].node)].push_back({line[k - 1].node, w});
            adj[static_cast<std::size_t>(line[k - 1].node)].push_back({line[k].node, w});
        }
    }
    // The graph is a tree, so one traversal per source gives exact distances.
    Eigen::MatrixXd geo(n, n);
    std::vector<double> dist(static_cast<std::size_t>(nodes));
    std::vector<Index> stack;
    for (Index src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), -1.0);
        dist[static_cast<std::size_t>(src)] = 0.0;
        stack.assign(1, src);
        while (!stack.empty()) {
            const Index u = stack.back();
            stack.pop_back();
            for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
                if (dist[static_cast<std::size_t>(v)] < 0.0) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + w;
                    stack.push_back(v);
                }
            }
        }
        for (Index j = 0; j < n; ++j) {
            geo(src, j) = dist[static_cast<std::size_t>(j)];
        }
    }
    return 0.5 * (geo + geo.transpose());
}

}  // namespace

Eigen::MatrixXd random_orthogonal(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Eigen::MatrixXd g = gaussian_matrix(n, n, 1.0, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
        if (r(j, j) < 0.0) {
            q.col(j) = -q.col(j);
        }
    }
    return q;
}

MultimodalSet make_noisy_pair(const DataMatrix& base, double nu1, double nu2, std::uint64_t seed,
                              std::vector<int> labels) {
    base.validate();
    if (!(nu1 >= 0.0) || !(nu2 >= 0.0)) {
        throw ValidationError("noise levels must be nonnegative");
    }
    std::mt19937_64 rng1(derive_seed(seed, "modality1"));
    std::mt19937_64 rng2(derive_seed(seed, "modality2"));
    MultimodalSet set;
    set.modality1 = base.with_values(base.values + gaussian_matrix(base.rows(), base.cols(), nu1, rng1));
    set.modality2 = base.with_values(base.values + gaussian_matrix(base.rows(), base.cols(), nu2, rng2));
    set.ground_truth = base;
    set.labels = std::move(labels);
    set.noise.nu1 = nu1;
    set.noise.nu2 = nu2;
    set.seed = seed;
    set.validate();
    return set;
}

void TreeSpec::validate() const {
    if (branches < 1) {
        throw ValidationError("tree needs at least one branch");
    }
    if (ambient_dim < 2) {
        throw ValidationError("tree needs ambient_dim >= 2");
    }
    if (points_per_branch < 1) {
        throw ValidationError("tree needs at least one point per branch");
    }
    if (!(branch_length > 0.0)) {
        throw ValidationError("tree branch length must be positive");
    }
    for (const auto* noise : {&branch_noise, &branch_noise2}) {
        for (double v : *noise) {
            if (!(v >= 0.0)) {
                throw ValidationError("branch noise must be nonnegative");
            }
        }
    }
}

MultimodalSet make_tree(const TreeSpec& spec) {
    spec.validate();
    const TreeSkeleton skeleton = build_skeleton(spec.branches, spec.points_per_branch, spec.ambient_dim,
                                                 spec.branch_length, derive_seed(spec.seed, "skeleton"));
    const Index n = skeleton.points.rows();
    MultimodalSet set;
    set.seed = spec.seed;
    set.labels = skeleton.branch;
    set.ground_truth = DataMatrix(skeleton.points);
    set.geodesics = tree_geodesics(skeleton);
    set.noise.branch_noise1 = spec.branch_noise;
    set.noise.branch_noise2 = spec.branch_noise2.empty() ? spec.branch_noise : spec.branch_noise2;

    for (int k = 0; k < 2; ++k) {
        const std::string tag = "modality" + std::to_string(k + 1);
        const Eigen::MatrixXd rotation = random_orthogonal(spec.ambient_dim, derive_seed(spec.seed, tag + "/rotation"));
        std::mt19937_64 rng(derive_seed(spec.seed, tag + "/noise"));
        const auto& noise = k == 0 ? set.noise.branch_noise1 : set.noise.branch_noise2;
        Eigen::MatrixXd values = skeleton.points * rotation;
        for (Index i = 0; i < n; ++i) {
            const auto b = static_cast<std::size_t>(skeleton.branch[static_cast<std::size_t>(i)]);
            const double sd = b < noise.size() ? noise[b] : 0.0;
            const Eigen::MatrixXd draw = gaussian_matrix(1, spec.ambient_dim, 1.0, rng);
            if (sd > 0.0) {
                values.row(i) += sd * draw;
            }
        }
        (k == 0 ? set.modality1 : set.modality2) = DataMatrix(std::move(values));
        set.modality_maps.push_back(rotation);
    }
    set.validate();
    return set;
}

DataMatrix sparsify(const DataMatrix& data, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("dropout probability must lie in [0, 1]");
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution drop(p);
    Eigen::MatrixXd v = data.values;
    for (Index i = 0; i < v.rows(); ++i) {
        for (Index j = 0; j < v.cols(); ++j) {
            if (drop(rng)) {
                v(i, j) = 0.0;
            }
        }
    }
    return data.with_values(std::move(v));
}

MultimodalSet make_coupled(const CoupledSpec& spec) {
    if (spec.points < 2 || spec.pairs < 1 || spec.extra_features < 0 || spec.branches < 1 || spec.latent_dim < 2 ||
        !(spec.bump_width > 0.0) || !(spec.measurement_noise >= 0.0)) {
        throw ValidationError("invalid coupled-feature spec");
    }
    const int per_branch = std::max(1, spec.points / spec.branches);
    const TreeSkeleton latent =
        build_skeleton(spec.branches, per_branch, spec.latent_dim, 1.0, derive_seed(spec.seed, "latent"));
    const Index n = latent.points.rows();
    std::mt19937_64 rng(derive_seed(spec.seed, "features"));
    std::uniform_int_distribution<Index> pick(0, n - 1);
    const double width = spec.bump_width;

    auto bump = [&](Index centre) {
        Eigen::VectorXd f(n);
        for (Index i = 0; i < n; ++i) {
            f(i) = std::exp(-(latent.points.row(i) - latent.points.row(centre)).squaredNorm() / (2 * width * width));
        }
        return f;
    };

    const Index cols = spec.pairs + spec.extra_features;
    Eigen::MatrixXd expr(n, cols), access(n, cols);
    for (Index j = 0; j < spec.pairs; ++j) {
        const Eigen::VectorXd g = bump(pick(rng));
        expr.col(j) = g;
        access.col(j) = g.cwiseSqrt();
    }
    for (Index j = spec.pairs; j < cols; ++j) {
        expr.col(j) = bump(pick(rng));
        access.col(j) = bump(pick(rng)).cwiseSqrt();
    }

    MultimodalSet set;
    set.seed = spec.seed;
    set.labels = latent.branch;
    set.ground_truth = DataMatrix(expr);
    if (spec.measurement_noise > 0.0) {
        std::mt19937_64 noise_rng(derive_seed(spec.seed, "measurement"));
        expr = (expr + gaussian_matrix(n, cols, spec.measurement_noise, noise_rng)).cwiseMax(0.0);
        access = (access + gaussian_matrix(n, cols, spec.measurement_noise, noise_rng)).cwiseMax(0.0);
    }
    set.modality1 = sparsify(DataMatrix(expr), spec.dropout, derive_seed(spec.seed, "dropout1"));
    set.modality2 = sparsify(DataMatrix(access), spec.dropout, derive_seed(spec.seed, "dropout2"));
    set.noise.dropout = spec.dropout;
    for (Index j = 0; j < spec.pairs; ++j) {
        set.coupled_pairs.emplace_back(j, j);
    }
    set.validate();
    return set;
}

}  // namespace intdiff
