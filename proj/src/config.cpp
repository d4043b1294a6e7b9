#include "cherenkov/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cherenkov/errors.hpp"

namespace cherenkov {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v)
{
    errno = 0;
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || std::isnan(x))
        fail(ErrorKind::input, "config", key + ": expected a number, got '" + v + "'");
    return x;
}

long long parse_int(const std::string& key, const std::string& v)
{
    errno = 0;
    char* end = nullptr;
    long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        fail(ErrorKind::input, "config", key + ": expected an integer, got '" + v + "'");
    return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v)
{
    if (!v.empty() && v[0] == '-') fail(ErrorKind::input, "config", key + ": expected a nonnegative integer");
    errno = 0;
    char* end = nullptr;
    unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        fail(ErrorKind::input, "config", key + ": expected a nonnegative integer, got '" + v + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(ErrorKind::input, "config", key + ": expected true or false, got '" + v + "'");
}

Vec parse_list(const std::string& key, const std::string& v)
{
    Vec out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) fail(ErrorKind::input, "config", key + ": empty list");
    return out;
}

std::string fmt(double x)
{
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_list(const Vec& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
    return out;
}

nlohmann::json num(double x)
{
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

struct Key {
    const char* name;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> text;
    std::function<nlohmann::json(const ExperimentConfig&)> json;
};

#define CFG_DOUBLE(NAME, FIELD)                                                                        \
    Key{NAME, [](ExperimentConfig& c, const std::string& v) { c.FIELD = parse_double(NAME, v); },     \
        [](const ExperimentConfig& c) { return fmt(c.FIELD); },                                        \
        [](const ExperimentConfig& c) { return num(c.FIELD); }}
#define CFG_INT(NAME, FIELD)                                                                                   \
    Key{NAME, [](ExperimentConfig& c, const std::string& v) { c.FIELD = static_cast<int>(parse_int(NAME, v)); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.FIELD); },                                       \
        [](const ExperimentConfig& c) { return nlohmann::json(c.FIELD); }}
#define CFG_U64(NAME, FIELD)                                                                   \
    Key{NAME, [](ExperimentConfig& c, const std::string& v) { c.FIELD = parse_u64(NAME, v); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.FIELD); },                     \
        [](const ExperimentConfig& c) { return nlohmann::json(c.FIELD); }}

const std::vector<Key>& keys()
{
    static const std::vector<Key> table = {
        CFG_INT("schema_version", schema_version),
        Key{"name", [](ExperimentConfig& c, const std::string& v) { c.name = v; },
            [](const ExperimentConfig& c) { return c.name; },
            [](const ExperimentConfig& c) { return nlohmann::json(c.name); }},
        Key{"model",
            [](ExperimentConfig& c, const std::string& v) {
                ModelKind kind = model_kind_from_string(v);
                if (kind == ModelKind::nelson_massive)
                    c.model = ModelSpec::nelson(1.0, 3);
                else if (kind == ModelKind::polaron)
                    c.model = ModelSpec::polaron(3);
                else
                    c.model = ModelSpec::friction(1, 1);
            },
            [](const ExperimentConfig& c) { return std::string(to_string(c.model.kind)); },
            [](const ExperimentConfig& c) { return nlohmann::json(to_string(c.model.kind)); }},
        CFG_DOUBLE("m", model.m),
        CFG_INT("d", model.d),
        CFG_INT("q", model.q),
        CFG_DOUBLE("g", model.g),
        Key{"P", [](ExperimentConfig& c, const std::string& v) { c.P = parse_list("P", v); },
            [](const ExperimentConfig& c) { return fmt_list(c.P); },
            [](const ExperimentConfig& c) { return nlohmann::json(c.P); }},
        Key{"kernel", [](ExperimentConfig& c, const std::string& v) { c.kernel.form = kernel_form_from_string(v); },
            [](const ExperimentConfig& c) { return std::string(to_string(c.kernel.form)); },
            [](const ExperimentConfig& c) { return nlohmann::json(to_string(c.kernel.form)); }},
        CFG_DOUBLE("kernel.amplitude", kernel.amplitude),
        CFG_DOUBLE("kernel.width", kernel.width),
        CFG_DOUBLE("kernel.mu", kernel.mu),
        CFG_DOUBLE("kernel.k_min", kernel.k_min),
        CFG_DOUBLE("kernel.k_max", kernel.k_max),
        CFG_DOUBLE("kernel.xi_max", kernel.xi_max),
        Key{"kernel.table", [](ExperimentConfig& c, const std::string& v) { c.kernel_table = v; },
            [](const ExperimentConfig& c) { return c.kernel_table; },
            [](const ExperimentConfig& c) { return nlohmann::json(c.kernel_table); }},
        CFG_INT("grid.points", grid_points),
        CFG_DOUBLE("grid.k_extent", k_extent),
        CFG_DOUBLE("grid.xi_extent", xi_extent),
        CFG_INT("n_max", n_max),
        CFG_DOUBLE("delta", delta),
        CFG_U64("seed", seed),
        CFG_U64("samples", samples),
        CFG_INT("mourre.n", mourre_n),
        CFG_DOUBLE("mourre.eps", mourre_eps),
        Key{"mourre.interval",
            [](ExperimentConfig& c, const std::string& v) {
                Vec iv = parse_list("mourre.interval", v);
                if (iv.size() != 2) fail(ErrorKind::input, "config", "mourre.interval: expected 'lo,hi'");
                c.interval_lo = iv[0];
                c.interval_hi = iv[1];
            },
            [](const ExperimentConfig& c) { return fmt_list({c.interval_lo, c.interval_hi}); },
            [](const ExperimentConfig& c) { return nlohmann::json(Vec{c.interval_lo, c.interval_hi}); }},
        Key{"fermi.eps", [](ExperimentConfig& c, const std::string& v) { c.fermi_eps = parse_list("fermi.eps", v); },
            [](const ExperimentConfig& c) { return fmt_list(c.fermi_eps); },
            [](const ExperimentConfig& c) { return nlohmann::json(c.fermi_eps); }},
        CFG_INT("fermi.sphere_level", sphere_level),
        CFG_INT("evolve.t_points", t_points),
        CFG_DOUBLE("evolve.t_end", t_end),
        CFG_DOUBLE("evolve.decay_span", decay_span),
        CFG_DOUBLE("evolve.fit_start", fit_start),
        Key{"evolve.filter", [](ExperimentConfig& c, const std::string& v) { c.filter = parse_bool("evolve.filter", v); },
            [](const ExperimentConfig& c) { return std::string(c.filter ? "true" : "false"); },
            [](const ExperimentConfig& c) { return nlohmann::json(c.filter); }},
        CFG_DOUBLE("evolve.filter_margin", filter_margin),
        Key{"output.dir", [](ExperimentConfig& c, const std::string& v) { c.output_dir = v; },
            [](const ExperimentConfig& c) { return c.output_dir; },
            [](const ExperimentConfig& c) { return nlohmann::json(c.output_dir); }},
    };
    return table;
}

#undef CFG_DOUBLE
#undef CFG_INT
#undef CFG_U64

const Key* find_key(const std::string& name)
{
    for (const Key& k : keys())
        if (name == k.name) return &k;
    return nullptr;
}

KernelTable load_kernel_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorKind::input, "config", "cannot open kernel table '" + path + "'");
    KernelTable table;
    std::string line;
    bool values = false;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::stringstream ss(line);
        std::string word;
        if (!(ss >> word)) continue;
        if (!values && word == "axis") {
            Vec axis;
            double x;
            while (ss >> x) axis.push_back(x);
            table.axes.push_back(std::move(axis));
            continue;
        }
        if (!values && word == "values") {
            values = true;
            double x;
            while (ss >> x) table.values.push_back(x);
            continue;
        }
        if (!values) fail(ErrorKind::input, "config", "kernel table: expected 'axis' or 'values', got '" + word + "'");
        table.values.push_back(parse_double("kernel table", word));
        double x;
        while (ss >> x) table.values.push_back(x);
    }
    return table;
}

}  // namespace

GridSpec ExperimentConfig::grid() const
{
    if (model.kind == ModelKind::friction) return GridSpec::friction(model.q, k_extent, model.d, xi_extent, grid_points);
    return GridSpec::uniform(model.d, k_extent, grid_points);
}

void ExperimentConfig::validate() const
{
    require(schema_version == kSchemaVersion, ErrorKind::input, "config",
            "schema_version " + std::to_string(schema_version) + " is not supported (expected " +
                std::to_string(kSchemaVersion) + ")");
    model.validate();
    kernel.validate(model);
    require(static_cast<int>(P.size()) == model.d, ErrorKind::input, "config",
            "P has " + std::to_string(P.size()) + " components, model dimension is " + std::to_string(model.d));
    require(grid_points >= 2, ErrorKind::input, "config", "grid.points must be >= 2");
    require(k_extent > 0.0 && xi_extent > 0.0, ErrorKind::input, "config", "grid extents must be positive");
    require(n_max >= 0, ErrorKind::input, "config", "n_max must be >= 0");
    require(delta > 0.0, ErrorKind::input, "config", "delta must be positive");
    require(samples >= 1, ErrorKind::input, "config", "samples must be >= 1");
    require(mourre_n >= 1, ErrorKind::input, "config", "mourre.n must be >= 1");
    require(mourre_eps > 0.0, ErrorKind::input, "config", "mourre.eps must be positive");
    require(interval_lo <= interval_hi, ErrorKind::input, "config", "mourre.interval needs lo <= hi");
    require(!fermi_eps.empty(), ErrorKind::input, "config", "fermi.eps must not be empty");
    for (std::size_t i = 0; i < fermi_eps.size(); ++i)
        require(fermi_eps[i] > 0.0 && (i == 0 || fermi_eps[i] < fermi_eps[i - 1]), ErrorKind::input, "config",
                "fermi.eps must be positive and strictly decreasing");
    require(sphere_level >= 1, ErrorKind::input, "config", "fermi.sphere_level must be >= 1");
    require(t_points >= 2, ErrorKind::input, "config", "evolve.t_points must be >= 2");
    require(t_end >= 0.0 && decay_span > 0.0, ErrorKind::input, "config",
            "evolve.t_end must be >= 0 and evolve.decay_span > 0");
    require(fit_start >= 0.0 && fit_start < 1.0, ErrorKind::input, "config", "evolve.fit_start must lie in [0, 1)");
    require(filter_margin >= 0.0, ErrorKind::input, "config", "evolve.filter_margin must be >= 0");
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value)
{
    const Key* k = find_key(key);
    if (!k) fail(ErrorKind::input, "config", "unknown key '" + key + "'");
    k->set(cfg, value);
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin)
{
    std::map<std::string, std::string> entries;
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) fail(ErrorKind::input, "config", where + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!find_key(key)) fail(ErrorKind::input, "config", where + ": unknown key '" + key + "'");
        if (!entries.emplace(key, value).second)
            fail(ErrorKind::input, "config", where + ": duplicate key '" + key + "'");
    }
    ExperimentConfig cfg;
    // the model key resets the model defaults, so it goes first
    if (auto it = entries.find("model"); it != entries.end()) apply_setting(cfg, "model", it->second);
    bool has_p = entries.count("P") > 0;
    for (const Key& k : keys()) {
        if (std::string(k.name) == "model") continue;
        if (auto it = entries.find(k.name); it != entries.end()) k.set(cfg, it->second);
    }
    if (!has_p) {
        cfg.P.assign(std::max(cfg.model.d, 1), 0.0);
        cfg.P.back() = 1.0;
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorKind::input, "config", "cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    ExperimentConfig cfg = parse_config(ss.str(), path);
    if (!cfg.kernel_table.empty()) {
        std::filesystem::path table(cfg.kernel_table);
        if (table.is_relative()) table = std::filesystem::path(path).parent_path() / table;
        cfg.kernel.table = load_kernel_table(table.string());
    }
    return cfg;
}

std::vector<std::string> config_keys()
{
    std::vector<std::string> out;
    for (const Key& k : keys()) out.emplace_back(k.name);
    return out;
}

nlohmann::json config_json(const ExperimentConfig& cfg)
{
    nlohmann::json j = nlohmann::json::object();
    for (const Key& k : keys()) j[k.name] = k.json(cfg);
    return j;
}

std::string config_text(const ExperimentConfig& cfg)
{
    std::string out;
    for (const Key& k : keys()) out += std::string(k.name) + " = " + k.text(cfg) + "\n";
    return out;
}

}  // namespace cherenkov
