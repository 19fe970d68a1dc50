#include "intdiff/eval.hpp"

#include "intdiff/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace intdiff {

Split stratified_split(std::span<const int> labels, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ValidationError("train fraction must lie in (0, 1)");
    }
    std::map<int, std::vector<Index>> classes;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        classes[labels[i]].push_back(static_cast<Index>(i));
    }
    if (classes.size() < 2) {
        throw ValidationError("classification needs at least two classes");
    }
    std::mt19937_64 rng(seed);
    Split split;
    for (auto& [label, members] : classes) {
        if (members.size() < 2) {
            throw ValidationError("class " + std::to_string(label) + " has a single member; cannot stratify");
        }
        std::shuffle(members.begin(), members.end(), rng);
        const auto n = static_cast<long>(members.size());
        const long n_train = std::clamp(std::lround(train_fraction * static_cast<double>(n)), 1L, n - 1);
        split.train.insert(split.train.end(), members.begin(), members.begin() + n_train);
        split.test.insert(split.test.end(), members.begin() + n_train, members.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

std::vector<int> knn_classify(const Eigen::MatrixXd& train, std::span<const int> train_labels,
                              const Eigen::MatrixXd& test, int k) {
    if (static_cast<Index>(train_labels.size()) != train.rows()) {
        throw SizeError("training labels do not match training rows");
    }
    if (train.cols() != test.cols()) {
        throw SizeError("train and test have different dimensions");
    }
    if (k < 1 || k > train.rows()) {
        throw SizeError("k must lie in [1, train size]");
    }
    std::vector<int> predictions;
    predictions.reserve(static_cast<std::size_t>(test.rows()));
    std::vector<std::pair<double, Index>> dist(static_cast<std::size_t>(train.rows()));
    for (Index q = 0; q < test.rows(); ++q) {
        for (Index i = 0; i < train.rows(); ++i) {
            dist[static_cast<std::size_t>(i)] = {(train.row(i) - test.row(q)).squaredNorm(), i};
        }
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
        std::map<int, int> votes;
        int top = 0;
        for (int j = 0; j < k; ++j) {
            top = std::max(top, ++votes[train_labels[static_cast<std::size_t>(dist[static_cast<std::size_t>(j)].second)]]);
        }
        // Neighbours are in distance order, so the first label reaching the
        // top vote count belongs to the closest tied class.
        for (int j = 0; j < k; ++j) {
            const int label = train_labels[static_cast<std::size_t>(dist[static_cast<std::size_t>(j)].second)];
            if (votes[label] == top) {
                predictions.push_back(label);
                break;
            }
        }
    }
    return predictions;
}

double knn_accuracy(const Eigen::MatrixXd& train, std::span<const int> train_labels, const Eigen::MatrixXd& test,
                    std::span<const int> test_labels, int k) {
    if (static_cast<Index>(test_labels.size()) != test.rows() || test.rows() == 0) {
        throw SizeError("test labels do not match test rows");
    }
    const std::vector<int> predicted = knn_classify(train, train_labels, test, k);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        correct += predicted[i] == test_labels[i];
    }
    return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

double knn_accuracy(const Eigen::MatrixXd& points, std::span<const int> labels, int k, std::uint64_t seed,
                    double train_fraction) {
    if (static_cast<Index>(labels.size()) != points.rows()) {
        throw SizeError("label count does not match point count");
    }
    const Split split = stratified_split(labels, train_fraction, seed);
    Eigen::MatrixXd train(static_cast<Index>(split.train.size()), points.cols());
    Eigen::MatrixXd test(static_cast<Index>(split.test.size()), points.cols());
    std::vector<int> train_labels, test_labels;
    for (std::size_t i = 0; i < split.train.size(); ++i) {
        train.row(static_cast<Index>(i)) = points.row(split.train[i]);
        train_labels.push_back(labels[static_cast<std::size_t>(split.train[i])]);
    }
    for (std::size_t i = 0; i < split.test.size(); ++i) {
        test.row(static_cast<Index>(i)) = points.row(split.test[i]);
        test_labels.push_back(labels[static_cast<std::size_t>(split.test[i])]);
    }
    return knn_accuracy(train, train_labels, test, test_labels, std::min<int>(k, static_cast<int>(train.rows())));
}

double knn_accuracy(const Embedding& embedding, std::span<const int> labels, int k, std::uint64_t seed,
                    double train_fraction) {
    return knn_accuracy(embedding.coords, labels, k, seed, train_fraction);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) {
            ++j;
        }
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw SizeError("spearman needs two equal-length vectors with at least 2 entries");
    }
    const std::vector<double> ra = average_ranks(a);
    const std::vector<double> rb = average_ranks(b);
    const double mean = 0.5 * static_cast<double>(a.size() + 1);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        const double da = ra[i] - mean, db = rb[i] - mean;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) {
        throw ValidationError("rank correlation is undefined for a constant distance vector");
    }
    return sab / std::sqrt(saa * sbb);
}

double demap(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& geodesics) {
    const Index n = coords.rows();
    if (geodesics.rows() != n || geodesics.cols() != n) {
        throw SizeError("geodesic matrix does not match the embedding");
    }
    if ((geodesics - geodesics.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + geodesics.cwiseAbs().maxCoeff()) ||
        geodesics.diagonal().cwiseAbs().maxCoeff() != 0.0) {
        throw ValidationError("geodesic matrix must be symmetric with a zero diagonal");
    }
    std::vector<double> geo, emb;
    geo.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    emb.reserve(geo.capacity());
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < j; ++i) {
            geo.push_back(geodesics(i, j));
            emb.push_back((coords.row(i) - coords.row(j)).norm());
        }
    }
    return spearman(geo, emb);
}

double demap(const Embedding& embedding, const Eigen::MatrixXd& geodesics) {
    return demap(embedding.coords, geodesics);
}

MutualInformation mutual_information(std::span<const double> a, std::span<const double> b, int bins) {
    if (bins < 2) {
        throw ValidationError("mutual information needs at least 2 bins");
    }
    if (a.size() != b.size()) {
        throw SizeError("mutual information needs equal-length inputs");
    }
    if (a.size() < static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins)) {
        throw SizeError("mutual information needs at least bins^2 samples");
    }
    const auto [amin, amax] = std::minmax_element(a.begin(), a.end());
    const auto [bmin, bmax] = std::minmax_element(b.begin(), b.end());
    if (*amin == *amax || *bmin == *bmax) {
        return {0.0, true};
    }
    auto bin_of = [bins](double v, double lo, double hi) {
        const int k = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
        return std::clamp(k, 0, bins - 1);
    };
    const auto nb = static_cast<std::size_t>(bins);
    std::vector<double> joint(nb * nb, 0.0), pa(nb, 0.0), pb(nb, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto x = static_cast<std::size_t>(bin_of(a[i], *amin, *amax));
        const auto y = static_cast<std::size_t>(bin_of(b[i], *bmin, *bmax));
        joint[x * nb + y] += 1.0;
        pa[x] += 1.0;
        pb[y] += 1.0;
    }
    const double n = static_cast<double>(a.size());
    std::vector<double> terms;
    for (std::size_t x = 0; x < nb; ++x) {
        for (std::size_t y = 0; y < nb; ++y) {
            const double c = joint[x * nb + y];
            if (c > 0.0) {
                terms.push_back(c / n * std::log(c * n / (pa[x] * pb[y])));
            }
        }
    }
    // Summing in sorted order makes MI(a, b) and MI(b, a) bit-identical.
    std::sort(terms.begin(), terms.end());
    const double mi = std::accumulate(terms.begin(), terms.end(), 0.0);
    return {std::max(0.0, mi), false};
}

std::string_view to_string(DenoiseStrategy s) {
    switch (s) {
    case DenoiseStrategy::none:
        return "none";
    case DenoiseStrategy::modality_specific:
        return "modality_specific";
    case DenoiseStrategy::alternating:
        return "alternating";
    case DenoiseStrategy::integrated:
        return "integrated";
    }
    return "unknown";
}

DenoiseStrategy parse_denoise_strategy(std::string_view name) {
    for (auto s : {DenoiseStrategy::none, DenoiseStrategy::modality_specific, DenoiseStrategy::alternating,
                   DenoiseStrategy::integrated}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw ConfigError("unknown denoising strategy '" + std::string(name) + "'");
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json j;
    j["metric"] = metric;
    j["value"] = value;
    j["table"] = table;
    j["config"] = config;
    j["n_points"] = n_points;
    return j;
}

EvalReport mi_recovery_benchmark(const MultimodalSet& set, std::span<const DenoiseStrategy> strategies,
                                 const FusionConfig& config, int bins) {
    set.validate();
    if (set.coupled_pairs.empty()) {
        throw ValidationError("MI recovery needs planted feature pairs");
    }
    FusionWorkspace ws(set.modality1, set.modality2, config);
    EvalReport report;
    report.metric = "mutual_information";
    report.n_points = set.size();
    report.config["bins"] = bins;
    report.config["pairs"] = set.coupled_pairs.size();
    report.config["dropout"] = set.noise.dropout;
    report.config["seed"] = set.seed;

    for (DenoiseStrategy s : strategies) {
        Eigen::MatrixXd x1, x2;
        switch (s) {
        case DenoiseStrategy::none:
            x1 = set.modality1.values;
            x2 = set.modality2.values;
            break;
        case DenoiseStrategy::modality_specific: {
            const int t1 = ws.entropy_curve(0, false).elbow;
            const int t2 = ws.entropy_curve(1, false).elbow;
            x1 = diffusion_denoise(ws.modality_operator(0, false), set.modality1, t1).values;
            x2 = diffusion_denoise(ws.modality_operator(1, false), set.modality2, t2).values;
            report.config["modality_specific_t"] = {t1, t2};
            break;
        }
        case DenoiseStrategy::alternating:
        case DenoiseStrategy::integrated: {
            const IntegratedOperator op =
                ws.fuse(s == DenoiseStrategy::integrated ? FusionStrategy::integrated : FusionStrategy::alternating);
            x1 = op.values * set.modality1.values;
            x2 = op.values * set.modality2.values;
            report.config[std::string(to_string(s)) + "_exponents"] = {op.exponents.first, op.exponents.second};
            break;
        }
        }
        double total = 0.0;
        for (const auto& [c1, c2] : set.coupled_pairs) {
            const Eigen::VectorXd a = x1.col(c1);
            const Eigen::VectorXd b = x2.col(c2);
            total += mutual_information(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())),
                                        std::span<const double>(b.data(), static_cast<std::size_t>(b.size())), bins)
                         .nats;
        }
        report.table[std::string(to_string(s))] = total / static_cast<double>(set.coupled_pairs.size());
    }
    if (!strategies.empty()) {
        report.value = report.table.at(std::string(to_string(strategies.back())));
    }
    return report;
}

}  // namespace intdiff
