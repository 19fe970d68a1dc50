#pragma once

#include "intdiff/eval.hpp"
#include "intdiff/fusion.hpp"
#include "intdiff/operator.hpp"
#include "intdiff/synthetic.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace intdiff {

enum class Protocol {
    digits_knn,      // kNN accuracy of fused embeddings, global pixel noise
    tree_demap,      // DeMAP of fused embeddings, branch-local noise
    digits_denoise,  // kNN accuracy on the noisier view after A X
    mi_recovery,     // planted-pair MI after denoising sparse views
};

std::string_view to_string(Protocol p);
Protocol parse_protocol(std::string_view name);

/// Digit images with Gaussian pixel noise: view 1 at nu1, view 2 at each nu2.
struct DigitsProtocol {
    std::string images = "data/digits8x8-images.idx3-ubyte";
    std::string labels = "data/digits8x8-labels.idx1-ubyte";
    int subset = 1000;
    /// Pixels are loaded on [0, 1] and multiplied by this before noising.
    double intensity_scale = 8.0;
    double nu1 = 1.0;
    std::vector<double> nu2 = {0, 1, 2, 3, 4, 5, 6, 7, 8};
    Bandwidth bandwidth = Bandwidth::median_knn(5, 0.3);
    int embed_t = 1;
};

/// Tree whose two views are noised on different branches. Every branch gets
/// base_noise; the noisy branch of each view gets base_noise + unit * level.
struct TreeProtocol {
    TreeSpec tree;  // noise fields are set per level
    double base_noise = 0.5;
    double noise_unit = 0.4;
    int noisy_branch1 = 1;
    int noisy_branch2 = 3;
    std::vector<double> levels = {0, 1, 2, 3, 4, 5};
    Bandwidth bandwidth = Bandwidth::median_knn(5, 1.0);
    int embed_t = 4;
};

/// Coupled sparse views; the noise column is the dropout probability.
struct MiProtocol {
    CoupledSpec coupled;
    std::vector<double> dropout = {0.7};
    Bandwidth bandwidth = Bandwidth::median_knn(5, 1.0);
    int bins = 8;
};

struct BenchmarkConfig {
    std::vector<Protocol> protocols = {Protocol::digits_knn, Protocol::tree_demap, Protocol::digits_denoise,
                                       Protocol::mi_recovery};
    std::vector<FusionStrategy> strategies{kAllStrategies.begin(), kAllStrategies.end()};
    std::vector<DenoiseStrategy> mi_strategies = {DenoiseStrategy::none, DenoiseStrategy::modality_specific,
                                                  DenoiseStrategy::alternating, DenoiseStrategy::integrated};
    int seeds = 5;
    std::uint64_t seed = 0;  // root seed
    int embed_dims = 20;
    int knn = 5;
    double train_fraction = 0.8;
    /// MGD, entropy and ordering settings; each protocol supplies the bandwidth.
    FusionConfig fusion;
    DigitsProtocol digits;
    TreeProtocol tree;
    MiProtocol mi;
    int threads = 0;  // 0 means one per hardware thread

    void validate() const;
};

void to_json(nlohmann::json& j, const BenchmarkConfig& c);
/// Overrides the keys present; unknown keys raise ConfigError.
void from_json(const nlohmann::json& j, BenchmarkConfig& c);

struct BenchmarkRow {
    Protocol protocol;
    std::string strategy;
    double noise = 0.0;
    int seed = 0;
    std::string metric;
    double value = 0.0;
};

struct BenchmarkResult {
    std::vector<BenchmarkRow> rows;

    /// Mean over seeds; NaN when no row matches.
    double mean(Protocol p, std::string_view strategy, double noise) const;
    std::vector<double> noise_levels(Protocol p) const;
    /// Strategies in first-seen order.
    std::vector<std::string> strategies(Protocol p) const;
};

/// Called after each finished cell with (done, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// Runs every requested protocol. Rows are ordered by protocol, noise level,
/// seed and strategy regardless of thread count.
BenchmarkResult run_benchmark(const BenchmarkConfig& config, const ProgressFn& progress = {});

/// Columns: protocol,strategy,noise,seed,metric,value
void write_benchmark_csv(std::ostream& out, const BenchmarkResult& result);
BenchmarkResult read_benchmark_csv(std::istream& in);

/// Seed-mean metric against noise level with one polyline per strategy.
std::string line_plot_svg(const BenchmarkResult& result, Protocol p);

}  // namespace intdiff
