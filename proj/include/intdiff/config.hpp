#pragma once

#include "intdiff/denoise.hpp"
#include "intdiff/fusion.hpp"
#include "intdiff/operator.hpp"
#include "intdiff/synthetic.hpp"

#include <nlohmann/json.hpp>

#include <initializer_list>
#include <string>
#include <string_view>

namespace intdiff {

// JSON forms of the library's parameter structs. Reading starts from the
// struct's current values and overrides only the keys present; unknown keys
// and wrongly typed values raise ConfigError.

void to_json(nlohmann::json& j, const Bandwidth& b);
void from_json(const nlohmann::json& j, Bandwidth& b);

void to_json(nlohmann::json& j, const MgdConfig& c);
void from_json(const nlohmann::json& j, MgdConfig& c);

void to_json(nlohmann::json& j, const FusionConfig& c);
void from_json(const nlohmann::json& j, FusionConfig& c);

void to_json(nlohmann::json& j, const TreeSpec& s);
void from_json(const nlohmann::json& j, TreeSpec& s);

void to_json(nlohmann::json& j, const CoupledSpec& s);
void from_json(const nlohmann::json& j, CoupledSpec& s);

void to_json(nlohmann::json& j, const IntegratedOperator& op);

/// Throws ConfigError naming the first key of `j` not in `allowed`.
void require_known_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                        std::string_view context);

/// Parses JSON text, mapping syntax errors to ConfigError.
nlohmann::json parse_json_config(std::string_view text, std::string_view context);

/// Pretty-printed with a trailing newline; stable key order.
std::string dump_config(const nlohmann::json& j);

namespace detail {

[[noreturn]] void throw_config_type_error(std::string_view key, std::string_view what);

template <class T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) {
        return;
    }
    try {
        j.at(key).get_to(out);
    } catch (const nlohmann::json::exception& e) {
        throw_config_type_error(key, e.what());
    }
}

}  // namespace detail

}  // namespace intdiff
