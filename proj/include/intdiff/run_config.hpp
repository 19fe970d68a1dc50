#pragma once

#include "intdiff/benchmark.hpp"
#include "intdiff/fusion.hpp"
#include "intdiff/synthetic.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace intdiff {

/// Settings for the `generate` command.
struct GenerateSettings {
    std::string kind = "tree";  // tree | digits | coupled
    TreeSpec tree;
    CoupledSpec coupled;
    std::string images = "data/digits8x8-images.idx3-ubyte";
    std::string labels = "data/digits8x8-labels.idx1-ubyte";
    int subset = 1000;
    double intensity_scale = 8.0;
    double nu1 = 1.0;
    double nu2 = 1.0;
};

/// Every command reads the same document; each uses the sections it needs.
/// Child seeds for generators and splits derive from `seed`.
struct RunConfig {
    std::string output = "out";
    std::uint64_t seed = 0;

    std::string input;   // mgd, entropy, denoise
    std::string input1;  // fuse
    std::string input2;  // fuse
    std::string operator_path;
    std::string labels;
    std::string geodesics;
    std::string pairs;
    std::string embedding;

    GenerateSettings generate;
    FusionConfig fusion;
    std::string strategy = "integrated";
    int dims = 20;
    int embed_t = 1;
    int denoise_t = 1;

    std::string metric = "knn";  // knn | demap | mi
    int knn = 5;
    double train_fraction = 0.8;
    int bins = 8;

    BenchmarkConfig benchmark;
};

void to_json(nlohmann::json& j, const GenerateSettings& g);
void from_json(const nlohmann::json& j, GenerateSettings& g);
void to_json(nlohmann::json& j, const RunConfig& c);
/// Overrides the keys present; unknown keys raise ConfigError.
void from_json(const nlohmann::json& j, RunConfig& c);

}  // namespace intdiff
