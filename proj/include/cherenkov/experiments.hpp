#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cherenkov/config.hpp"
#include "cherenkov/dynamics.hpp"
#include "cherenkov/fermi.hpp"
#include "cherenkov/mourre.hpp"
#include "cherenkov/regularizers.hpp"
#include "cherenkov/thresholds.hpp"
#include "json.hpp"

namespace cherenkov {

using nlohmann::json;

// JSON forms of the module reports. Every document carries a "units" object naming the unit of
// each numeric field (natural units: particle mass = hbar = 1).
json to_json(const ThresholdTable& table);
json to_json(const MonotonicityReport& rep);
json to_json(const DerivativeReport& rep);
json to_json(const Step4Report& rep);
json to_json(const ChiReport& rep);
json to_json(const GradReport& rep);
json to_json(const SmoothnessReport& rep);
json to_json(const InsertionReport& rep);
json to_json(const MourreReport& rep);
json to_json(const NelsonSymbolReport& rep);
json to_json(const CommutatorSpotCheck& rep);

std::string threshold_csv(const ThresholdTable& table);
std::string decay_csv(const DecayCurve& curve);

struct FermiRun {
    Resonance res;
    OracleResult oracle;
    bool theta_defined = false;
    double gamma_discrepancy = 0.0;  // |gamma - oracle| / oracle
    double theta_discrepancy = 0.0;  // NaN when theta is not defined
};

FermiRun run_fermi(const ExperimentConfig& cfg);
json to_json(const FermiRun& run);

struct EvolveRun {
    double g = 0.0;
    double gamma_fermi = 0.0;  // continuum gamma_P (kernel amplitude included, g excluded)
    double theta_fermi = 0.0;
    double t_end = 0.0;
    double t_rec = 0.0;
    double fit_lo = 0.0;
    double fit_hi = 0.0;
    std::size_t dimension = 0;
    DecayCurve curve;
    DecayFit fit;
    ResonanceComparison comparison;
    double rel_discrepancy = 0.0;  // |gamma_fit - g^2 gamma_P| / (g^2 gamma_P)
};

// Runs the decay experiment at coupling g on the config's grid. When t_end > 0 it overrides the
// automatic window so two couplings can share one time grid.
EvolveRun run_evolve(const ExperimentConfig& cfg, double g, double t_end = 0.0);
json to_json(const EvolveRun& run);

struct FrictionMourreRun {
    double left_endpoint = 0.0;
    std::vector<MourreReport> eps_scan;   // eps - 0.03, eps, eps + 0.03
    MourreReport refined;                 // doubled grid at eps
    bool monotone_in_eps = false;
    double refinement_change = 0.0;       // |min(refined) - min(base)|
    double refinement_factor = 0.0;       // max / min of the two margins
    bool refinement_stable = false;       // factor < 10, both margins positive
    bool pass = false;
};

FrictionMourreRun run_friction_mourre(const ExperimentConfig& cfg);
json to_json(const FrictionMourreRun& run);

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    json details;
    double seconds = 0.0;  // wall time, not part of the JSON
    double budget = 0.0;   // runtime budget in seconds
};

struct SuiteInputs {
    std::uint64_t seed = 20240611;
    std::uint64_t samples = 100000;
    double delta = 0.1;
    ExperimentConfig friction_mourre;
    ExperimentConfig friction_decay;
};

// Reads suite.cfg, friction_mourre.cfg and friction_decay.cfg from a config directory.
SuiteInputs load_suite_inputs(const std::string& dir);

CriterionResult criterion_polaron(const SuiteInputs& in);
CriterionResult criterion_thresholds(const SuiteInputs& in);
CriterionResult criterion_derivative(const SuiteInputs& in);
CriterionResult criterion_regularizers(const SuiteInputs& in);
CriterionResult criterion_nelson_mourre(const SuiteInputs& in);
CriterionResult criterion_friction_mourre(const SuiteInputs& in);
CriterionResult criterion_fermi(const SuiteInputs& in);
CriterionResult criterion_decay(const SuiteInputs& in);

// Criteria 1-8; with `repeat` the battery runs a second time on a different worker count and
// criterion 9 compares the two JSON documents byte for byte.
std::vector<CriterionResult> run_suite(const SuiteInputs& in, bool repeat);
json suite_json(const SuiteInputs& in, const std::vector<CriterionResult>& results);
std::string criterion_line(const CriterionResult& r);

}  // namespace cherenkov
