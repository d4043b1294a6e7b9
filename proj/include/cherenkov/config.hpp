#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cherenkov/fock.hpp"
#include "cherenkov/models.hpp"
#include "json.hpp"

namespace cherenkov {

inline constexpr int kSchemaVersion = 1;

// One experiment. Text form is flat `key = value` lines, `#` starts a comment; see docs/formats.md.
struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::string name = "experiment";
    ModelSpec model = ModelSpec::polaron(3);
    KernelSpec kernel;
    std::string kernel_table;  // path of a tabulated kernel, relative to the config file
    Vec P = {0.0, 0.0, 2.0};

    int grid_points = 24;
    double k_extent = 1.0;
    double xi_extent = 1.0;
    int n_max = 2;

    double delta = 0.1;
    std::uint64_t seed = 20240611;
    std::uint64_t samples = 100000;

    int mourre_n = 1;
    double mourre_eps = 0.05;
    double interval_lo = 0.0;
    double interval_hi = 0.0;

    Vec fermi_eps = {0.2, 0.1, 0.05};
    int sphere_level = 2;

    int t_points = 300;
    double t_end = 0.0;         // 0: decay_span / (g^2 gamma), capped at half the recurrence time
    double decay_span = 1.0;
    double fit_start = 0.1;     // fit window starts at fit_start * t_end
    bool filter = false;
    double filter_margin = 0.0; // 0: a quarter of the interval

    std::string output_dir = ".";

    GridSpec grid() const;
    void validate() const;
};

ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>");
ExperimentConfig load_config(const std::string& path);

// Applies one `key=value` assignment on top of a parsed config.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

std::vector<std::string> config_keys();

// Fully resolved config, defaults filled, as written back by every run.
nlohmann::json config_json(const ExperimentConfig& cfg);
std::string config_text(const ExperimentConfig& cfg);

}  // namespace cherenkov
