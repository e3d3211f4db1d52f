#include "dtle/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dtle {

const std::string& TomlValue::as_string(const std::string& key) const {
    if (!is_string()) throw ConfigError("key '" + key + "' is not a string");
    return std::get<std::string>(v);
}

std::int64_t TomlValue::as_int(const std::string& key) const {
    if (!std::holds_alternative<std::int64_t>(v))
        throw ConfigError("key '" + key + "' is not an integer");
    return std::get<std::int64_t>(v);
}

double TomlValue::as_double(const std::string& key) const {
    if (std::holds_alternative<double>(v)) return std::get<double>(v);
    if (std::holds_alternative<std::int64_t>(v))
        return static_cast<double>(std::get<std::int64_t>(v));
    throw ConfigError("key '" + key + "' is not a number");
}

bool TomlValue::as_bool(const std::string& key) const {
    if (!std::holds_alternative<bool>(v)) throw ConfigError("key '" + key + "' is not a boolean");
    return std::get<bool>(v);
}

const std::vector<TomlValue>& TomlValue::as_array(const std::string& key) const {
    if (!is_array()) throw ConfigError("key '" + key + "' is not an array");
    return std::get<std::vector<TomlValue>>(v);
}

namespace {

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;
    int line;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n')) ++pos;
    }
    bool done() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }
};

TomlValue parse_value(Cursor& c);

TomlValue parse_array(Cursor& c) {
    ++c.pos;  // consume '['
    std::vector<TomlValue> items;
    for (;;) {
        c.skip_ws();
        if (c.done()) throw ConfigError(c.line, "unterminated array");
        if (c.peek() == ']') {
            ++c.pos;
            break;
        }
        items.push_back(parse_value(c));
        c.skip_ws();
        if (c.done()) throw ConfigError(c.line, "unterminated array");
        if (c.peek() == ',') {
            ++c.pos;
        } else if (c.peek() != ']') {
            throw ConfigError(c.line, "expected ',' or ']' in array");
        }
    }
    return TomlValue{std::move(items)};
}

TomlValue parse_value(Cursor& c) {
    c.skip_ws();
    if (c.done()) throw ConfigError(c.line, "missing value");
    const char ch = c.peek();
    if (ch == '[') return parse_array(c);
    if (ch == '"') {
        ++c.pos;
        std::string out;
        while (!c.done() && c.peek() != '"') {
            out.push_back(c.peek());
            ++c.pos;
        }
        if (c.done()) throw ConfigError(c.line, "unterminated string");
        ++c.pos;
        return TomlValue{std::move(out)};
    }
    // bare token: bool or number
    std::size_t start = c.pos;
    while (!c.done() && c.peek() != ',' && c.peek() != ']' && c.peek() != ' ' &&
           c.peek() != '\t' && c.peek() != '\n')
        ++c.pos;
    std::string tok = c.s.substr(start, c.pos - start);
    if (tok == "true") return TomlValue{true};
    if (tok == "false") return TomlValue{false};
    if (tok.empty()) throw ConfigError(c.line, "missing value");
    const bool looks_int = tok.find_first_of(".eE") == std::string::npos &&
                           tok.find("inf") == std::string::npos &&
                           tok.find("nan") == std::string::npos;
    char* end = nullptr;
    if (looks_int) {
        const long long i = std::strtoll(tok.c_str(), &end, 10);
        if (end && *end == '\0') return TomlValue{static_cast<std::int64_t>(i)};
    }
    const double d = std::strtod(tok.c_str(), &end);
    if (!end || *end != '\0') throw ConfigError(c.line, "cannot parse value '" + tok + "'");
    return TomlValue{d};
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

int brace_balance(const std::string& s) {
    int bal = 0;
    bool in_string = false;
    for (char ch : s) {
        if (ch == '"') in_string = !in_string;
        if (in_string) continue;
        if (ch == '[') ++bal;
        if (ch == ']') --bal;
    }
    return bal;
}

}  // namespace

TomlTable parse_toml(const std::string& text) {
    TomlTable table;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const int start_line = lineno;
        std::string stmt = trim(strip_comment(line));
        if (stmt.empty()) continue;
        if (stmt.front() == '[') {
            if (stmt.back() != ']') throw ConfigError(lineno, "malformed section header");
            section = trim(stmt.substr(1, stmt.size() - 2));
            if (section.empty()) throw ConfigError(lineno, "empty section name");
            continue;
        }
        const std::size_t eq = stmt.find('=');
        if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value'");
        const std::string key = trim(stmt.substr(0, eq));
        if (key.empty()) throw ConfigError(lineno, "empty key");
        std::string value_text = stmt.substr(eq + 1);
        // multi-line arrays: keep reading until brackets balance
        while (brace_balance(value_text) > 0) {
            std::string more;
            if (!std::getline(is, more))
                throw ConfigError(start_line, "unterminated array for key '" + key + "'");
            ++lineno;
            value_text += '\n';
            value_text += strip_comment(more);
        }
        Cursor c{value_text, 0, start_line};
        TomlValue v = parse_value(c);
        c.skip_ws();
        if (!c.done()) throw ConfigError(start_line, "trailing garbage after value of '" + key + "'");
        const std::string full = section.empty() ? key : section + "." + key;
        if (table.count(full)) throw ConfigError(start_line, "duplicate key '" + full + "'");
        table.emplace(full, std::move(v));
    }
    return table;
}

TomlTable parse_toml_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_toml(ss.str());
}

namespace {

template <typename T, typename F>
std::optional<T> get_opt(const TomlTable& t, const std::string& key, F conv) {
    auto it = t.find(key);
    if (it == t.end()) return std::nullopt;
    return conv(it->second);
}

EdgeSet edges_from_value(const TomlValue& v, const std::string& key) {
    EdgeSet edges;
    for (const TomlValue& e : v.as_array(key)) {
        const auto& pair = e.as_array(key);
        if (pair.size() != 2) throw ConfigError("edge in '" + key + "' must be a pair");
        const std::int64_t a = pair[0].as_int(key);
        const std::int64_t b = pair[1].as_int(key);
        if (a < 1 || b < 1 || a == b)
            throw ConfigError("edge in '" + key + "' must be two distinct 1-based nodes");
        const std::size_t i = static_cast<std::size_t>(a - 1);
        const std::size_t j = static_cast<std::size_t>(b - 1);
        edges.insert({std::min(i, j), std::max(i, j)});
    }
    return edges;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_table(const TomlTable& t) {
    ExperimentConfig cfg;
    auto str = [&](const std::string& k) {
        return get_opt<std::string>(t, k, [&](const TomlValue& v) { return v.as_string(k); });
    };
    auto num = [&](const std::string& k) {
        return get_opt<double>(t, k, [&](const TomlValue& v) { return v.as_double(k); });
    };
    auto integer = [&](const std::string& k) {
        return get_opt<std::int64_t>(t, k, [&](const TomlValue& v) { return v.as_int(k); });
    };
    auto boolean = [&](const std::string& k) {
        return get_opt<bool>(t, k, [&](const TomlValue& v) { return v.as_bool(k); });
    };

    if (auto v = str("problem.fixture")) cfg.fixture = *v;
    if (auto v = str("problem.a_file")) cfg.a_file = *v;
    if (auto v = str("problem.q_file")) cfg.q_file = *v;
    if (auto v = integer("problem.random_n")) {
        RandomProblemSpec r;
        r.n = static_cast<std::size_t>(*v);
        if (auto rho = num("problem.random_rho")) r.rho = *rho;
        if (auto seed = integer("problem.random_seed")) r.seed = static_cast<std::uint64_t>(*seed);
        cfg.random = r;
    }
    int sources = (!cfg.fixture.empty() ? 1 : 0) + (!cfg.a_file.empty() ? 1 : 0) +
                  (cfg.random ? 1 : 0);
    if (sources != 1)
        throw ConfigError("exactly one problem source required (fixture, a_file/q_file, or random_n)");
    if (!cfg.a_file.empty() && cfg.q_file.empty())
        throw ConfigError("a_file given without q_file");

    if (auto v = integer("partition.m")) cfg.m = static_cast<std::size_t>(*v);
    if (auto it = t.find("partition.sizes"); it != t.end()) {
        std::vector<std::size_t> sizes;
        for (const TomlValue& s : it->second.as_array("partition.sizes"))
            sizes.push_back(static_cast<std::size_t>(s.as_int("partition.sizes")));
        cfg.sizes = std::move(sizes);
    }

    if (auto v = num("steps.safety")) cfg.safety = *v;
    if (auto v = num("steps.scale")) cfg.scale = *v;
    if (auto it = t.find("steps.alphas"); it != t.end()) {
        std::vector<double> a;
        for (const TomlValue& x : it->second.as_array("steps.alphas"))
            a.push_back(x.as_double("steps.alphas"));
        cfg.alphas = std::move(a);
    }
    if (!(cfg.safety > 0.0 && cfg.safety < 1.0))
        throw ConfigError("steps.safety must be in (0,1)");
    if (!(cfg.scale > 0.0)) throw ConfigError("steps.scale must be positive");

    if (auto v = str("schedule.family")) cfg.family = *v;
    if (cfg.family != "finite-connected" && cfg.family != "uniformly-connected")
        throw ConfigError("schedule.family must be 'finite-connected' or 'uniformly-connected'");
    if (auto v = integer("schedule.B")) cfg.B = static_cast<std::size_t>(*v);
    if (cfg.B < 1) throw ConfigError("schedule.B must be >= 1");
    if (auto v = integer("schedule.seed")) cfg.schedule_seed = static_cast<std::uint64_t>(*v);
    if (auto it = t.find("schedule.graphs"); it != t.end()) {
        for (const TomlValue& g : it->second.as_array("schedule.graphs")) {
            GraphSpec spec;
            if (g.is_string()) {
                spec.name = g.as_string("schedule.graphs");
                spec.is_named = true;
            } else {
                spec.edges = edges_from_value(g, "schedule.graphs");
            }
            cfg.graphs.push_back(std::move(spec));
        }
    }
    if (cfg.family == "finite-connected" && cfg.graphs.empty())
        throw ConfigError("finite-connected schedule needs a nonempty schedule.graphs list");

    if (auto v = integer("run.max_iters")) cfg.max_iters = static_cast<long>(*v);
    if (cfg.max_iters < 0) throw ConfigError("run.max_iters must be >= 0");
    if (auto v = num("run.tol")) cfg.tol = *v;
    if (cfg.tol < 0.0) throw ConfigError("run.tol must be >= 0");
    if (auto v = integer("run.stride")) cfg.stride = static_cast<long>(*v);
    if (cfg.stride < 1) throw ConfigError("run.stride must be >= 1");
    if (auto v = str("run.init")) cfg.init = *v;
    if (cfg.init != "zeros" && cfg.init != "random")
        throw ConfigError("run.init must be 'zeros' or 'random'");
    if (auto v = num("run.init_scale")) cfg.init_scale = *v;
    if (auto v = integer("run.init_seed")) cfg.init_seed = static_cast<std::uint64_t>(*v);
    if (auto v = boolean("run.trace_elements")) cfg.trace_elements = *v;

    if (auto v = str("output.dir")) cfg.out_dir = *v;
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    return from_table(parse_toml_file(path));
}

}  // namespace dtle
