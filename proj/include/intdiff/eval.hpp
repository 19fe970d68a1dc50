#pragma once

#include "intdiff/data_matrix.hpp"
#include "intdiff/embed.hpp"
#include "intdiff/fusion.hpp"
#include "intdiff/synthetic.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace intdiff {

struct Split {
    std::vector<Index> train;
    std::vector<Index> test;
};

/// Per-class shuffle, then round(fraction * n_c) to train, clamped so every
/// class keeps at least one point on each side. Classes need >= 2 members.
Split stratified_split(std::span<const int> labels, double train_fraction, std::uint64_t seed);

/// Majority vote over the k nearest training rows (Euclidean). Ties go to the
/// tied label whose nearest member is closest.
std::vector<int> knn_classify(const Eigen::MatrixXd& train, std::span<const int> train_labels,
                              const Eigen::MatrixXd& test, int k);

double knn_accuracy(const Eigen::MatrixXd& train, std::span<const int> train_labels, const Eigen::MatrixXd& test,
                    std::span<const int> test_labels, int k);

/// Stratified split of `points`, then test accuracy.
double knn_accuracy(const Eigen::MatrixXd& points, std::span<const int> labels, int k = 5, std::uint64_t seed = 0,
                    double train_fraction = 0.8);
double knn_accuracy(const Embedding& embedding, std::span<const int> labels, int k = 5, std::uint64_t seed = 0,
                    double train_fraction = 0.8);

/// Spearman rank correlation with average ranks for ties. Throws
/// ValidationError when either input is constant.
double spearman(std::span<const double> a, std::span<const double> b);

/// Spearman correlation of upper-triangle geodesic and embedding distances.
double demap(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& geodesics);
double demap(const Embedding& embedding, const Eigen::MatrixXd& geodesics);

struct MutualInformation {
    double nats = 0.0;
    bool zero_variance = false;
};

/// Plug-in estimate over equal-width bins spanning each variable's range.
MutualInformation mutual_information(std::span<const double> a, std::span<const double> b, int bins = 8);

/// How both modalities are denoised before measuring planted-pair MI.
enum class DenoiseStrategy { none, modality_specific, alternating, integrated };

std::string_view to_string(DenoiseStrategy s);
DenoiseStrategy parse_denoise_strategy(std::string_view name);

struct EvalReport {
    std::string metric;  // knn_accuracy | demap | mutual_information
    double value = 0.0;
    std::map<std::string, double> table;  // per-strategy or per-feature values
    nlohmann::json config = nlohmann::json::object();
    Index n_points = 0;

    nlohmann::json to_json() const;
};

/// Denoises both views with each strategy's operator (A X) and reports the
/// mean MI over the planted pairs, per strategy.
EvalReport mi_recovery_benchmark(const MultimodalSet& set, std::span<const DenoiseStrategy> strategies,
                                 const FusionConfig& config, int bins = 8);

}  // namespace intdiff
