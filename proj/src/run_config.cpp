#include "intdiff/run_config.hpp"

#include "intdiff/config.hpp"
#include "intdiff/error.hpp"

namespace intdiff {

using detail::read_key;

void to_json(nlohmann::json& j, const GenerateSettings& g) {
    j = {{"kind", g.kind},       {"tree", g.tree},     {"coupled", g.coupled},
         {"images", g.images},   {"labels", g.labels}, {"subset", g.subset},
         {"intensity_scale", g.intensity_scale}, {"nu1", g.nu1}, {"nu2", g.nu2}};
}

void from_json(const nlohmann::json& j, GenerateSettings& g) {
    require_known_keys(j, {"kind", "tree", "coupled", "images", "labels", "subset", "intensity_scale", "nu1", "nu2"},
                       "generate");
    read_key(j, "kind", g.kind);
    read_key(j, "tree", g.tree);
    read_key(j, "coupled", g.coupled);
    read_key(j, "images", g.images);
    read_key(j, "labels", g.labels);
    read_key(j, "subset", g.subset);
    read_key(j, "intensity_scale", g.intensity_scale);
    read_key(j, "nu1", g.nu1);
    read_key(j, "nu2", g.nu2);
    if (g.kind != "tree" && g.kind != "digits" && g.kind != "coupled") {
        throw ConfigError("unknown generator '" + g.kind + "'");
    }
}

void to_json(nlohmann::json& j, const RunConfig& c) {
    j = {{"output", c.output},
         {"seed", c.seed},
         {"input", c.input},
         {"input1", c.input1},
         {"input2", c.input2},
         {"operator", c.operator_path},
         {"labels", c.labels},
         {"geodesics", c.geodesics},
         {"pairs", c.pairs},
         {"embedding", c.embedding},
         {"generate", c.generate},
         {"fusion", c.fusion},
         {"strategy", c.strategy},
         {"dims", c.dims},
         {"embed_t", c.embed_t},
         {"denoise_t", c.denoise_t},
         {"metric", c.metric},
         {"knn", c.knn},
         {"train_fraction", c.train_fraction},
         {"bins", c.bins},
         {"benchmark", c.benchmark}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
    require_known_keys(j,
                       {"command", "output", "seed", "input", "input1", "input2", "operator", "labels", "geodesics",
                        "pairs", "embedding", "generate", "fusion", "strategy", "dims", "embed_t", "denoise_t",
                        "metric", "knn", "train_fraction", "bins", "benchmark"},
                       "run config");
    read_key(j, "output", c.output);
    read_key(j, "seed", c.seed);
    read_key(j, "input", c.input);
    read_key(j, "input1", c.input1);
    read_key(j, "input2", c.input2);
    read_key(j, "operator", c.operator_path);
    read_key(j, "labels", c.labels);
    read_key(j, "geodesics", c.geodesics);
    read_key(j, "pairs", c.pairs);
    read_key(j, "embedding", c.embedding);
    read_key(j, "generate", c.generate);
    read_key(j, "fusion", c.fusion);
    read_key(j, "strategy", c.strategy);
    read_key(j, "dims", c.dims);
    read_key(j, "embed_t", c.embed_t);
    read_key(j, "denoise_t", c.denoise_t);
    read_key(j, "metric", c.metric);
    read_key(j, "knn", c.knn);
    read_key(j, "train_fraction", c.train_fraction);
    read_key(j, "bins", c.bins);
    read_key(j, "benchmark", c.benchmark);
}

}  // namespace intdiff
