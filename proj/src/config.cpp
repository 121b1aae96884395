#include "pfscale/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace pfscale {

namespace {

enum class Type { Real, PositiveReal, Count, NonNegInt, Bool, Choice, RealList, RealPair };

struct Key {
    const char* name;
    Type type;
    const char* def;  // nullptr: required; "": optional without default
    std::vector<std::string> choices;
    const char* help;
};

const std::vector<Key>& schema(Command c) {
    static const std::vector<Key> constant{
        {"which", Type::Choice, nullptr, {"m", "sigma", "c_under", "c_over", "c_delta"}, "constant to estimate"},
        {"wells", Type::RealPair, "-1,1", {}, "potential wells lo,hi"},
        {"scale", Type::PositiveReal, "1", {}, "potential prefactor"},
        {"R", Type::PositiveReal, "5", {}, "truncation radius"},
        {"n", Type::Count, "256", {}, "cells"},
        {"z", Type::Real, "", {}, "sigma: far-field value (default: lower well)"},
        {"xi", Type::Real, "", {}, "sigma: value at the wall (default: upper well)"},
        {"delta", Type::PositiveReal, "0.1", {}, "c_delta: endpoint offset"},
        {"extrapolate", Type::Bool, "true", {}, "Richardson extrapolation over n, n/2"},
        {"select_R", Type::Bool, "false", {}, "grow R from the given value until the estimate settles"},
    };
    static const std::vector<Key> lift{
        {"trace", Type::Choice, "smoothstep", {"smoothstep", "quadratic", "random"}, "boundary trace g"},
        {"n", Type::Count, "256", {}, "cells along the trace (even)"},
        {"R", Type::PositiveReal, "1", {}, "trace interval length"},
        {"method", Type::Choice, "both", {"explicit", "zeta", "both"}, "lifting estimate"},
        {"tol", Type::PositiveReal, "1e-10", {}, "relative residual for the quadratic minimum"},
        {"write_field", Type::Bool, "false", {}, "write the explicit extension as a point cloud"},
    };
    static const std::vector<Key> sweep{
        {"kind", Type::Choice, nullptr, {"f1d", "g1d", "full2d"}, "energy to sweep"},
        {"eps", Type::RealList, nullptr, {}, "strictly decreasing eps values"},
        {"L", Type::PositiveReal, "1", {}, "eps lambda^{2/3}"},
        {"wells", Type::RealPair, "-1,1", {}, "bulk potential wells"},
        {"bwells", Type::RealPair, "-1,1", {}, "boundary potential wells"},
        {"n", Type::Count, "256", {}, "cells (along x in 2-D)"},
        {"max_n", Type::Count, "4096", {}, "1-D cap when cells_per_layer raises n"},
        {"cells_per_layer", Type::NonNegInt, "16", {}, "1-D: minimum cells across the layer (0 keeps n)"},
        {"width", Type::PositiveReal, "2", {}, "2-D rectangle width"},
        {"height", Type::PositiveReal, "1", {}, "2-D rectangle height"},
        {"init", Type::Choice, "profile", {"linear", "profile", "boundary"}, "initializer"},
        {"mass", Type::Bool, "true", {}, "impose the mass constraint (area average in 2-D)"},
        {"bmass", Type::Bool, "true", {}, "2-D: impose the bottom-edge average"},
    };
    static const std::vector<Key> check{
        {"suite", Type::Choice, "inequalities", {"inequalities", "hardy", "seminorm", "lifting"}, "suite to run"},
        {"count", Type::Count, "50", {}, "random inputs for the Hardy and seminorm suites"},
        {"n", Type::Count, "256", {}, "cells for the Hardy and seminorm suites"},
        {"lift_count", Type::Count, "10", {}, "random traces for the lifting suite"},
        {"lift_n", Type::Count, "128", {}, "cells for the lifting suite (even)"},
    };
    switch (c) {
        case Command::Constant: return constant;
        case Command::Lift: return lift;
        case Command::Sweep: return sweep;
        case Command::Check: return check;
    }
    return constant;
}

const Key* find_key(Command c, const std::string& name) {
    for (const auto& k : schema(c)) {
        if (name == k.name) return &k;
    }
    return nullptr;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> to_real(const std::string& s) {
    double v = 0.0;
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    const char* first = t.data();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

template <typename Int>
std::optional<Int> to_int(const std::string& s) {
    Int v = 0;
    const std::string t = trim(s);
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

std::optional<bool> to_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    return std::nullopt;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) out.push_back(trim(cur));
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
}

// Empty string when the value is acceptable.
std::string type_problem(const Key& k, const std::string& v) {
    switch (k.type) {
        case Type::Real:
            return to_real(v) ? "" : "expected a real number";
        case Type::PositiveReal: {
            const auto r = to_real(v);
            return r && *r > 0.0 ? "" : "expected a positive real number";
        }
        case Type::Count: {
            const auto i = to_int<int>(v);
            return i && *i > 0 ? "" : "expected a positive integer";
        }
        case Type::NonNegInt: {
            const auto i = to_int<int>(v);
            return i && *i >= 0 ? "" : "expected a nonnegative integer";
        }
        case Type::Bool:
            return to_bool(v) ? "" : "expected true or false";
        case Type::Choice: {
            if (std::find(k.choices.begin(), k.choices.end(), v) != k.choices.end()) return "";
            std::string s = "expected one of";
            for (const auto& c : k.choices) s += " " + c;
            return s;
        }
        case Type::RealList: {
            const auto parts = split_list(v);
            if (parts.empty()) return "expected a comma-separated list of reals";
            for (const auto& p : parts) {
                if (!to_real(p)) return "expected a comma-separated list of reals";
            }
            return "";
        }
        case Type::RealPair: {
            const auto parts = split_list(v);
            if (parts.size() != 2 || !to_real(parts[0]) || !to_real(parts[1])) {
                return "expected two reals 'lo,hi'";
            }
            return "";
        }
    }
    return "";
}

std::string where_line(int line) { return "line " + std::to_string(line); }

void set_top(RunConfig& cfg, const std::string& key, const std::string& value, int line,
             const std::string& where) {
    auto fail = [&](const std::string& msg) { throw ConfigError(line, where + ": " + msg); };
    if (key == "command") {
        const auto c = parse_command(value);
        if (!c) fail("command: expected one of constant lift sweep check");
        cfg.command = *c;
    } else if (key == "out") {
        if (value.empty()) fail("out: expected a directory");
        cfg.output_dir = value;
    } else if (key == "seed") {
        const auto s = to_int<std::uint64_t>(value);
        if (!s) fail("seed: expected a nonnegative integer");
        cfg.seed = *s;
    } else if (key == "threads") {
        const auto t = to_int<int>(value);
        if (!t || *t < 1) fail("threads: expected a positive integer");
        cfg.threads = *t;
    } else {
        fail("unknown key '" + key + "'");
    }
}

bool is_top(const std::string& key) {
    return key == "command" || key == "out" || key == "seed" || key == "threads";
}

void set_param(RunConfig& cfg, Command section, const std::string& key, const std::string& value,
               int line, const std::string& where) {
    const Key* k = find_key(section, key);
    if (!k) {
        throw ConfigError(line, where + ": unknown key '" + key + "' in [" + to_string(section) + "]");
    }
    const std::string problem = type_problem(*k, value);
    if (!problem.empty()) throw ConfigError(line, where + ": " + key + ": " + problem);
    if (section == cfg.command) cfg.params[key] = value;
}

std::string param_or_default(const RunConfig& cfg, const std::string& key) {
    const Key* k = find_key(cfg.command, key);
    if (!k) throw ConfigError(0, "no key '" + key + "' for command " + to_string(cfg.command));
    const auto it = cfg.params.find(key);
    if (it != cfg.params.end()) return it->second;
    return k->def ? k->def : "";
}

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::Constant: return "constant";
        case Command::Lift: return "lift";
        case Command::Sweep: return "sweep";
        case Command::Check: return "check";
    }
    return "constant";
}

std::optional<Command> parse_command(const std::string& name) {
    for (Command c : {Command::Constant, Command::Lift, Command::Sweep, Command::Check}) {
        if (to_string(c) == name) return c;
    }
    return std::nullopt;
}

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(message), line_(line) {}

RunConfig parse_config(const std::string& text, const ParseOptions& opt) {
    struct Entry {
        std::optional<Command> section;
        std::string key;
        std::string value;
        int line;
    };
    std::vector<Entry> entries;
    std::map<std::pair<int, std::string>, int> seen;  // (section, key) -> line
    std::map<int, int> section_seen;
    std::optional<Command> section;
    bool has_command = false;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(line, where_line(line) + ": malformed section header");
            const std::string name = trim(s.substr(1, s.size() - 2));
            section = parse_command(name);
            if (!section) {
                throw ConfigError(line, where_line(line) + ": unknown section [" + name + "]");
            }
            const int id = static_cast<int>(*section);
            if (section_seen.count(id)) {
                throw ConfigError(line, where_line(line) + ": duplicate section [" + name +
                                            "] (first on line " + std::to_string(section_seen[id]) + ")");
            }
            section_seen[id] = line;
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line, where_line(line) + ": expected 'key = value'");
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError(line, where_line(line) + ": empty key");
        const int sid = section ? static_cast<int>(*section) : -1;
        const auto [it, fresh] = seen.emplace(std::make_pair(sid, key), line);
        if (!fresh) {
            throw ConfigError(line, where_line(line) + ": duplicate key '" + key + "' (first set on line " +
                                        std::to_string(it->second) + ")");
        }
        if (!section && key == "command") has_command = true;
        entries.push_back({section, key, value, line});
    }

    RunConfig cfg;
    for (const auto& e : entries) {
        if (!e.section) set_top(cfg, e.key, e.value, e.line, where_line(e.line));
    }
    if (opt.command) {
        cfg.command = *opt.command;
    } else if (!has_command && opt.require) {
        std::string msg = "missing required key 'command' (constant, lift, sweep or check); required per section:";
        for (Command c : {Command::Constant, Command::Lift, Command::Sweep, Command::Check}) {
            for (const auto& k : schema(c)) {
                if (!k.def) msg += " [" + to_string(c) + "] " + k.name + ";";
            }
        }
        throw ConfigError(0, msg);
    }
    for (const auto& e : entries) {
        if (e.section) set_param(cfg, *e.section, e.key, e.value, e.line, where_line(e.line));
    }
    if (opt.require) check_required(cfg);
    return cfg;
}

void set_value(RunConfig& cfg, const std::string& key, const std::string& value,
               const std::string& where) {
    if (is_top(key)) {
        set_top(cfg, key, value, 0, where);
    } else {
        set_param(cfg, cfg.command, key, value, 0, where);
    }
}

void check_required(const RunConfig& cfg) {
    std::string missing;
    for (const auto& k : schema(cfg.command)) {
        if (!k.def && !cfg.params.count(k.name)) missing += std::string(missing.empty() ? "" : ", ") + k.name;
    }
    if (!missing.empty()) {
        throw ConfigError(0, "missing required key(s) in [" + to_string(cfg.command) + "]: " + missing);
    }
}

std::string echo_config(const RunConfig& cfg) {
    std::string s;
    s += "command = " + to_string(cfg.command) + "\n";
    s += "out = " + cfg.output_dir + "\n";
    s += "seed = " + std::to_string(cfg.seed) + "\n";
    s += "threads = " + std::to_string(cfg.threads) + "\n";
    s += "\n[" + to_string(cfg.command) + "]\n";
    for (const auto& [k, v] : cfg.params) s += k + " = " + v + "\n";
    return s;
}

std::string config_reference() {
    std::string s =
        "top level:\n"
        "  command   constant | lift | sweep | check (required)\n"
        "  out       output directory (default .)\n"
        "  seed      seed for randomized suites (default 0)\n"
        "  threads   OpenMP threads (default 1)\n";
    for (Command c : {Command::Constant, Command::Lift, Command::Sweep, Command::Check}) {
        s += "[" + to_string(c) + "]\n";
        for (const auto& k : schema(c)) {
            std::string def = !k.def ? "required" : (*k.def ? std::string("default ") + k.def : "optional");
            std::string line = "  " + std::string(k.name);
            line.resize(std::max<std::size_t>(line.size() + 1, 20), ' ');
            s += line + k.help + " (" + def + ")\n";
        }
    }
    return s;
}

std::string get_string(const RunConfig& cfg, const std::string& key) { return param_or_default(cfg, key); }

std::optional<double> find_real(const RunConfig& cfg, const std::string& key) {
    const std::string v = param_or_default(cfg, key);
    if (v.empty()) return std::nullopt;
    return to_real(v);
}

double get_real(const RunConfig& cfg, const std::string& key) {
    const auto v = find_real(cfg, key);
    if (!v) throw ConfigError(0, key + ": no value");
    return *v;
}

int get_int(const RunConfig& cfg, const std::string& key) {
    const auto v = to_int<int>(param_or_default(cfg, key));
    if (!v) throw ConfigError(0, key + ": no value");
    return *v;
}

bool get_bool(const RunConfig& cfg, const std::string& key) {
    const auto v = to_bool(param_or_default(cfg, key));
    if (!v) throw ConfigError(0, key + ": no value");
    return *v;
}

std::vector<double> get_reals(const RunConfig& cfg, const std::string& key) {
    std::vector<double> out;
    for (const auto& p : split_list(param_or_default(cfg, key))) {
        const auto v = to_real(p);
        if (!v) throw ConfigError(0, key + ": expected a comma-separated list of reals");
        out.push_back(*v);
    }
    return out;
}

std::pair<double, double> get_pair(const RunConfig& cfg, const std::string& key) {
    const auto v = get_reals(cfg, key);
    if (v.size() != 2) throw ConfigError(0, key + ": expected two reals");
    return {v[0], v[1]};
}

}  // namespace pfscale
