#include "intdiff/config.hpp"

#include "intdiff/error.hpp"

#include <algorithm>
#include <string>

namespace intdiff {

namespace detail {

void throw_config_type_error(std::string_view key, std::string_view what) {
    throw ConfigError("bad value for '" + std::string(key) + "': " + std::string(what));
}

}  // namespace detail

using detail::read_key;

void require_known_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                        std::string_view context) {
    if (!j.is_object()) {
        throw ConfigError(std::string(context) + " must be a JSON object");
    }
    for (const auto& item : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw ConfigError("unknown key '" + item.key() + "' in " + std::string(context));
        }
    }
}

nlohmann::json parse_json_config(std::string_view text, std::string_view context) {
    try {
        return nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string(context) + ": " + e.what());
    }
}

std::string dump_config(const nlohmann::json& j) {
    return j.dump(2) + "\n";
}

void to_json(nlohmann::json& j, const Bandwidth& b) {
    if (b.kind == Bandwidth::Kind::fixed) {
        j = {{"kind", "fixed"}, {"epsilon", b.epsilon}};
    } else {
        j = {{"kind", "median_knn"}, {"knn", b.knn}, {"scale", b.scale}};
    }
}

void from_json(const nlohmann::json& j, Bandwidth& b) {
    require_known_keys(j, {"kind", "epsilon", "knn", "scale"}, "bandwidth");
    std::string kind = b.kind == Bandwidth::Kind::fixed ? "fixed" : "median_knn";
    read_key(j, "kind", kind);
    if (kind == "fixed") {
        b.kind = Bandwidth::Kind::fixed;
    } else if (kind == "median_knn") {
        b.kind = Bandwidth::Kind::median_knn;
    } else {
        throw ConfigError("unknown bandwidth kind '" + kind + "'");
    }
    read_key(j, "epsilon", b.epsilon);
    read_key(j, "knn", b.knn);
    read_key(j, "scale", b.scale);
    if (b.kind == Bandwidth::Kind::fixed && !(b.epsilon > 0.0)) {
        throw ConfigError("fixed bandwidth needs epsilon > 0");
    }
    if (b.kind == Bandwidth::Kind::median_knn && (b.knn < 1 || !(b.scale > 0.0))) {
        throw ConfigError("median_knn bandwidth needs knn >= 1 and scale > 0");
    }
}

void to_json(nlohmann::json& j, const MgdConfig& c) {
    j = {{"t", c.t}, {"tau", c.tau}, {"c", c.c}, {"max_depth", c.max_depth}, {"bandwidth", c.bandwidth}};
}

void from_json(const nlohmann::json& j, MgdConfig& c) {
    require_known_keys(j, {"t", "tau", "c", "max_depth", "bandwidth"}, "mgd");
    read_key(j, "t", c.t);
    read_key(j, "tau", c.tau);
    read_key(j, "c", c.c);
    read_key(j, "max_depth", c.max_depth);
    read_key(j, "bandwidth", c.bandwidth);
    try {
        c.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
}

void to_json(nlohmann::json& j, const FusionConfig& c) {
    j = {{"bandwidth", c.bandwidth},
         {"mgd", c.mgd},
         {"t_max", c.t_max},
         {"entropy_top_k", c.entropy_top_k ? nlohmann::json(*c.entropy_top_k) : nlohmann::json(nullptr)},
         {"order", std::string(to_string(c.order))},
         {"alternating_t", c.alternating_t}};
}

void from_json(const nlohmann::json& j, FusionConfig& c) {
    require_known_keys(j, {"bandwidth", "mgd", "t_max", "entropy_top_k", "order", "alternating_t"}, "fusion");
    read_key(j, "bandwidth", c.bandwidth);
    read_key(j, "mgd", c.mgd);
    read_key(j, "t_max", c.t_max);
    if (j.contains("entropy_top_k")) {
        if (j["entropy_top_k"].is_null()) {
            c.entropy_top_k.reset();
        } else {
            Index k = 0;
            read_key(j, "entropy_top_k", k);
            if (k < 1) {
                throw ConfigError("entropy_top_k must be positive or null");
            }
            c.entropy_top_k = k;
        }
    }
    if (j.contains("order")) {
        std::string order;
        read_key(j, "order", order);
        c.order = parse_order(order);
    }
    read_key(j, "alternating_t", c.alternating_t);
    if (c.t_max < 3) {
        throw ConfigError("t_max must be at least 3");
    }
    if (c.alternating_t < 1) {
        throw ConfigError("alternating_t must be positive");
    }
}

void to_json(nlohmann::json& j, const TreeSpec& s) {
    j = {{"branches", s.branches},
         {"points_per_branch", s.points_per_branch},
         {"ambient_dim", s.ambient_dim},
         {"branch_length", s.branch_length},
         {"branch_noise", s.branch_noise},
         {"branch_noise2", s.branch_noise2},
         {"seed", s.seed}};
}

void from_json(const nlohmann::json& j, TreeSpec& s) {
    require_known_keys(j,
                       {"branches", "points_per_branch", "ambient_dim", "branch_length", "branch_noise",
                        "branch_noise2", "seed"},
                       "tree");
    read_key(j, "branches", s.branches);
    read_key(j, "points_per_branch", s.points_per_branch);
    read_key(j, "ambient_dim", s.ambient_dim);
    read_key(j, "branch_length", s.branch_length);
    read_key(j, "branch_noise", s.branch_noise);
    read_key(j, "branch_noise2", s.branch_noise2);
    read_key(j, "seed", s.seed);
    try {
        s.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
}

void to_json(nlohmann::json& j, const CoupledSpec& s) {
    j = {{"points", s.points},
         {"pairs", s.pairs},
         {"extra_features", s.extra_features},
         {"branches", s.branches},
         {"latent_dim", s.latent_dim},
         {"bump_width", s.bump_width},
         {"measurement_noise", s.measurement_noise},
         {"dropout", s.dropout},
         {"seed", s.seed}};
}

void from_json(const nlohmann::json& j, CoupledSpec& s) {
    require_known_keys(j,
                       {"points", "pairs", "extra_features", "branches", "latent_dim", "bump_width",
                        "measurement_noise", "dropout", "seed"},
                       "coupled");
    read_key(j, "points", s.points);
    read_key(j, "pairs", s.pairs);
    read_key(j, "extra_features", s.extra_features);
    read_key(j, "branches", s.branches);
    read_key(j, "latent_dim", s.latent_dim);
    read_key(j, "bump_width", s.bump_width);
    read_key(j, "measurement_noise", s.measurement_noise);
    read_key(j, "dropout", s.dropout);
    read_key(j, "seed", s.seed);
    if (!(s.dropout >= 0.0 && s.dropout <= 1.0)) {
        throw ConfigError("dropout must lie in [0, 1]");
    }
}

void to_json(nlohmann::json& j, const IntegratedOperator& op) {
    j = {{"strategy", std::string(to_string(op.strategy))},
         {"order", std::string(to_string(op.order))},
         {"exponents", {op.exponents.first, op.exponents.second}},
         {"source_elbows", {op.source_elbows.first, op.source_elbows.second}},
         {"bandwidths", op.bandwidths},
         {"reversible", op.degrees.has_value()},
         {"n_points", op.size()}};
}

}  // namespace intdiff
