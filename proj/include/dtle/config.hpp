#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dtle/network.hpp"

namespace dtle {

/// Minimal TOML subset: [sections], key = value, strings, integers, floats,
/// booleans, and (nested) arrays. Enough for experiment configs; errors carry
/// the offending line number.
struct TomlValue {
    std::variant<std::string, std::int64_t, double, bool, std::vector<TomlValue>> v;

    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_array() const { return std::holds_alternative<std::vector<TomlValue>>(v); }

    const std::string& as_string(const std::string& key) const;
    std::int64_t as_int(const std::string& key) const;
    double as_double(const std::string& key) const;  // accepts integers too
    bool as_bool(const std::string& key) const;
    const std::vector<TomlValue>& as_array(const std::string& key) const;
};

using TomlTable = std::map<std::string, TomlValue>;  // keys are "section.key"

TomlTable parse_toml(const std::string& text);
TomlTable parse_toml_file(const std::string& path);

/// One entry of the schedule's graph list: a named generator or an explicit
/// edge list (1-based node pairs in the file, 0-based here).
struct GraphSpec {
    std::string name;  // "ring" | "star" | "path" | "complete" | "random"
    EdgeSet edges;
    bool is_named = false;
};

struct RandomProblemSpec {
    std::size_t n = 4;
    double rho = 0.5;
    std::uint64_t seed = 1;
};

struct ExperimentConfig {
    // problem source (exactly one)
    std::string fixture;
    std::string a_file, q_file;
    std::optional<RandomProblemSpec> random;

    // partition
    std::size_t m = 1;
    std::optional<std::vector<std::size_t>> sizes;

    // steps
    double safety = 0.5;
    double scale = 1.0;  // global multiplier on the default steps (sp/2 -> 0.5)
    std::optional<std::vector<double>> alphas;

    // schedule
    std::string family = "finite-connected";
    std::vector<GraphSpec> graphs;
    std::size_t B = 1;
    std::uint64_t schedule_seed = 0;

    // run
    long max_iters = 6000;
    double tol = 1e-8;
    long stride = 10;
    std::string init = "zeros";
    double init_scale = 1.0;
    std::uint64_t init_seed = 0;
    bool trace_elements = false;

    std::string out_dir = "out";

    static ExperimentConfig from_table(const TomlTable& t);
    static ExperimentConfig from_file(const std::string& path);
};

}  // namespace dtle
