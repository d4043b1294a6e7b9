#include "cherenkov/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "cherenkov/errors.hpp"
#include "cherenkov/fock.hpp"
#include "cherenkov/parallel.hpp"
#include "cherenkov/rng.hpp"

namespace cherenkov {

namespace {

// NaN and infinities have no JSON literal; they are written as null and the strings "inf"/"-inf".
json num(double x)
{
    if (std::isnan(x)) return nullptr;
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

json num_vec(const Vec& v)
{
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

json violations_json(const std::vector<Violation>& vs)
{
    json a = json::array();
    for (const Violation& v : vs) a.push_back({{"what", v.what}, {"n", v.n}, {"p_abs", num(v.p_abs)}, {"value", num(v.value)}});
    return a;
}

double rel_diff(double a, double b)
{
    if (b == 0.0) return a == 0.0 ? 0.0 : INFINITY;
    return std::abs(a - b) / std::abs(b);
}

FermiOptions fermi_options(const ExperimentConfig& cfg)
{
    FermiOptions o;
    o.sphere_level = cfg.sphere_level;
    return o;
}

}  // namespace

json to_json(const ThresholdTable& table)
{
    json rows = json::array();
    for (const ThresholdRow& r : table.rows)
        rows.push_back({{"n", r.n}, {"c", num(r.c)}, {"E", num(r.E)}, {"k_star", num_vec(r.k_star)},
                        {"k_star_norm", num(norm(r.k_star))}});
    return {{"P", num_vec(table.P)},
            {"rows", rows},
            {"units", {{"P", "momentum"}, {"n", "count"}, {"c", "dimensionless"}, {"E", "energy"},
                       {"k_star", "momentum"}, {"k_star_norm", "momentum"}}}};
}

json to_json(const MonotonicityReport& rep)
{
    json inc = json::array();
    for (const Vec& row : rep.increments) inc.push_back(num_vec(row));
    return {{"n_max", rep.n_max},
            {"p_abs", num_vec(rep.p_abs)},
            {"increments", inc},
            {"violations", violations_json(rep.violations)},
            {"pass", rep.pass()},
            {"units", {{"n_max", "count"}, {"p_abs", "momentum"}, {"increments", "energy"},
                       {"violations.p_abs", "momentum"}, {"violations.value", "energy"}}}};
}

json to_json(const DerivativeReport& rep)
{
    return {{"n", rep.n},
            {"m", num(rep.m)},
            {"p_crit", num(rep.p_crit)},
            {"points", rep.r.size()},
            {"max_slope", num(rep.max_slope)},
            {"max_f_excess", num(rep.max_f_excess)},
            {"endpoint_error", num(rep.endpoint_error)},
            {"violations", violations_json(rep.violations)},
            {"pass", rep.pass()},
            {"units", {{"n", "count"}, {"m", "energy"}, {"p_crit", "momentum"}, {"points", "count"},
                       {"max_slope", "energy"}, {"max_f_excess", "energy"}, {"endpoint_error", "energy"}}}};
}

json to_json(const Step4Report& rep)
{
    return {{"n", rep.n},
            {"m", num(rep.m)},
            {"p_next", num(rep.p_next)},
            {"f_difference", num(rep.f_difference)},
            {"identity_residual", num(rep.identity_residual)},
            {"alpha_formula_residual", num(rep.alpha_formula_residual)},
            {"f_decreasing_in_c", rep.f_decreasing_in_c},
            {"pass", rep.pass},
            {"units", {{"n", "count"}, {"m", "energy"}, {"p_next", "momentum"}, {"f_difference", "energy"},
                       {"identity_residual", "energy"}, {"alpha_formula_residual", "energy"}}}};
}

json to_json(const ChiReport& rep)
{
    json props = json::array();
    for (const PropertyCount& p : rep.properties)
        props.push_back({{"name", p.name}, {"samples", p.samples}, {"violations", p.violations}, {"worst", num(p.worst)}});
    return {{"delta", num(rep.delta)},
            {"properties", props},
            {"pass", rep.pass()},
            {"units", {{"delta", "dimensionless"}, {"samples", "count"}, {"violations", "count"},
                       {"worst", "dimensionless"}}}};
}

json to_json(const GradReport& rep)
{
    return {{"delta", num(rep.delta)},
            {"j", rep.j},
            {"ell", rep.ell},
            {"samples", rep.samples},
            {"lower", num(rep.lower)},
            {"upper", num(rep.upper)},
            {"min_value", num(rep.min_value)},
            {"max_value", num(rep.max_value)},
            {"max_fd_mismatch", num(rep.max_fd_mismatch)},
            {"violations", rep.violations},
            {"pass", rep.pass()},
            {"units", {{"delta", "dimensionless"}, {"j", "count"}, {"ell", "count"}, {"samples", "count"},
                       {"lower", "dimensionless"}, {"upper", "dimensionless"}, {"min_value", "dimensionless"},
                       {"max_value", "dimensionless"}, {"max_fd_mismatch", "dimensionless"},
                       {"violations", "count"}}}};
}

json to_json(const SmoothnessReport& rep)
{
    return {{"delta", num(rep.delta)},
            {"j", rep.j},
            {"ell", rep.ell},
            {"samples", rep.samples},
            {"bound", num(rep.bound)},
            {"max_second", num(rep.max_second)},
            {"violations", rep.violations},
            {"pass", rep.pass()},
            {"units", {{"delta", "dimensionless"}, {"j", "count"}, {"ell", "count"}, {"samples", "count"},
                       {"bound", "1/momentum"}, {"max_second", "1/momentum"}, {"violations", "count"}}}};
}

json to_json(const InsertionReport& rep)
{
    return {{"delta", num(rep.delta)},
            {"j", rep.j},
            {"ell_min", rep.ell_min},
            {"ell_max", rep.ell_max},
            {"samples_per_ell", rep.samples},
            {"violations", rep.violations},
            {"worst_ratio", num(rep.worst_ratio)},
            {"worst", {{"z", num(rep.worst.z)}, {"zs", num_vec(rep.worst.zs)}, {"diff", num(rep.worst.diff)},
                       {"bound", num(rep.worst.bound)}}},
            {"pass", rep.pass()},
            {"units", {{"delta", "dimensionless"}, {"j", "count"}, {"ell_min", "count"}, {"ell_max", "count"},
                       {"samples_per_ell", "count"}, {"violations", "count"}, {"worst_ratio", "dimensionless"},
                       {"worst.z", "momentum"}, {"worst.zs", "momentum"}, {"worst.diff", "momentum"},
                       {"worst.bound", "momentum"}}}};
}

json to_json(const MourreReport& rep)
{
    json wit = json::array();
    for (const Witness& w : rep.violations) {
        json ks = json::array();
        for (const Vec& k : w.ks) ks.push_back(num_vec(k));
        wit.push_back({{"ell", w.ell}, {"ks", ks}, {"margin", num(w.margin)}});
    }
    return {{"model", rep.model},
            {"P", num_vec(rep.P)},
            {"n", rep.n},
            {"ell_min", rep.ell_min},
            {"ell_max", rep.ell_max},
            {"interval", {num(rep.interval_lo), num(rep.interval_hi)}},
            {"samples", rep.samples},
            {"min_margin", num(rep.min_margin)},
            {"tolerance", num(rep.tolerance)},
            {"violation_count", rep.violation_count},
            {"violations", wit},
            {"status", rep.status},
            {"pass", rep.pass},
            {"units", {{"P", "momentum"}, {"n", "count"}, {"ell_min", "count"}, {"ell_max", "count"},
                       {"interval", "energy"}, {"samples", "count"}, {"min_margin", "energy"},
                       {"tolerance", "energy"}, {"violation_count", "count"}, {"violations.ks", "momentum"},
                       {"violations.margin", "energy"}}}};
}

json to_json(const NelsonSymbolReport& rep)
{
    return {{"step2", to_json(rep.step2)},
            {"step3", to_json(rep.step3)},
            {"minimizer_margin", num(rep.minimizer_margin)},
            {"correction", num(rep.correction)},
            {"theorem_level", rep.theorem_level},
            {"units", {{"minimizer_margin", "energy"}, {"correction", "energy"}}}};
}

json to_json(const CommutatorSpotCheck& rep)
{
    return {{"samples", rep.samples},
            {"fitted_C", num(rep.fitted_C)},
            {"verified_C", num(rep.verified_C)},
            {"theory_C", num(rep.theory_C)},
            {"pass", rep.pass},
            {"units", {{"samples", "count"}, {"fitted_C", "dimensionless"}, {"verified_C", "dimensionless"},
                       {"theory_C", "dimensionless"}}}};
}

std::string threshold_csv(const ThresholdTable& table)
{
    std::string out = "n,c,E,k_star_norm\n";
    char buf[128];
    for (const ThresholdRow& r : table.rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.n, r.c, r.E, norm(r.k_star));
        out += buf;
    }
    return out;
}

std::string decay_csv(const DecayCurve& curve)
{
    std::string out = "t,re,im,abs,ref_re,ref_im\n";
    char buf[192];
    for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
        cplx a = curve.amplitude[i];
        cplx r = i < curve.reference.size() ? curve.reference[i] : cplx(NAN, NAN);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", curve.t_grid[i], a.real(), a.imag(),
                      std::abs(a), r.real(), r.imag());
        out += buf;
    }
    return out;
}

FermiRun run_fermi(const ExperimentConfig& cfg)
{
    cfg.validate();
    FermiOptions opts = fermi_options(cfg);
    FermiRun run;
    double E0 = vacuum_energy(cfg.P);
    double gamma = 0.0, theta = NAN;
    run.theta_defined = theta_defined(cfg.model, cfg.kernel);
    if (cfg.model.kind == ModelKind::friction) {
        GoldenRule gr = gamma_theta_friction(cfg.model, cfg.kernel, cfg.P, opts);
        gamma = gr.gamma;
        theta = gr.theta;
    } else {
        gamma = gamma_nelson(cfg.model, cfg.kernel, cfg.P, opts);
        if (run.theta_defined) theta = theta_nelson(cfg.model, cfg.kernel, cfg.P, opts);
    }
    // an undefined level shift leaves the resonance real part at E0
    run.res = resonance(E0, std::isnan(theta) ? 0.0 : theta, gamma, cfg.model.g);
    if (std::isnan(theta)) run.res.theta = NAN;
    run.oracle = broadened_oracle(cfg.model, cfg.kernel, cfg.P, cfg.fermi_eps, opts);
    run.gamma_discrepancy = rel_diff(gamma, run.oracle.gamma);
    run.theta_discrepancy = run.theta_defined ? rel_diff(theta, run.oracle.theta) : NAN;
    return run;
}

json to_json(const FermiRun& run)
{
    return {{"E0", num(run.res.E0)},
            {"theta", num(run.res.theta)},
            {"gamma", num(run.res.gamma)},
            {"g", num(run.res.g)},
            {"z_re", num(run.res.z.real())},
            {"z_im", num(run.res.z.imag())},
            {"theta_defined", run.theta_defined},
            {"oracle_gamma", num(run.oracle.gamma)},
            {"oracle_theta", num(run.oracle.theta)},
            {"oracle_eps", num_vec(run.oracle.eps)},
            {"oracle_re", num_vec(run.oracle.re)},
            {"oracle_im", num_vec(run.oracle.im)},
            {"discrepancy", num(run.gamma_discrepancy)},
            {"discrepancy_theta", num(run.theta_discrepancy)},
            {"units", {{"E0", "energy"}, {"theta", "energy"}, {"gamma", "energy"}, {"g", "dimensionless"},
                       {"z_re", "energy"}, {"z_im", "energy"}, {"oracle_gamma", "energy"},
                       {"oracle_theta", "energy"}, {"oracle_eps", "energy"}, {"oracle_re", "energy"},
                       {"oracle_im", "energy"}, {"discrepancy", "dimensionless"},
                       {"discrepancy_theta", "dimensionless"}}}};
}

EvolveRun run_evolve(const ExperimentConfig& cfg, double g, double t_end)
{
    cfg.validate();
    FermiOptions opts = fermi_options(cfg);
    EvolveRun run;
    run.g = g;
    double E0 = vacuum_energy(cfg.P);
    if (cfg.model.kind == ModelKind::friction) {
        GoldenRule gr = gamma_theta_friction(cfg.model, cfg.kernel, cfg.P, opts);
        run.gamma_fermi = gr.gamma;
        run.theta_fermi = gr.theta;
    } else {
        run.gamma_fermi = gamma_nelson(cfg.model, cfg.kernel, cfg.P, opts);
        run.theta_fermi = theta_defined(cfg.model, cfg.kernel) ? theta_nelson(cfg.model, cfg.kernel, cfg.P, opts) : 0.0;
    }
    FockBasis basis = build_basis(cfg.grid(), cfg.n_max);
    run.dimension = basis.size();
    SparseOperator H0 = assemble_H0(cfg.model, cfg.P, basis);
    Vec diag = H0.diagonal();
    Vec one_boson;
    if (basis.sector_begin.size() > 2)
        one_boson.assign(diag.begin() + basis.sector_begin[1], diag.begin() + basis.sector_begin[2]);
    run.t_rec = recurrence_time(one_boson, E0);

    double rate = g * g * run.gamma_fermi;
    if (t_end > 0.0)
        run.t_end = t_end;
    else if (cfg.t_end > 0.0)
        run.t_end = cfg.t_end;
    else
        run.t_end = std::min(rate > 0.0 ? cfg.decay_span / rate : INFINITY, 0.5 * run.t_rec);
    if (!std::isfinite(run.t_end))
        fail(ErrorKind::input, "evolve", "no decay and no recurrence scale: set evolve.t_end");
    run.fit_lo = cfg.fit_start * run.t_end;
    run.fit_hi = std::min(run.t_end, 0.5 * run.t_rec);
    if (!(run.fit_hi > run.fit_lo))
        fail(ErrorKind::input, "evolve", "fit window is empty once capped at half the recurrence time");

    ModelSpec model = cfg.model;
    model.g = g;
    SparseOperator H = assemble_hamiltonian(model, cfg.kernel, cfg.P, basis);
    std::optional<FilterSpec> filter;
    if (cfg.filter) {
        double lo = cfg.interval_hi > cfg.interval_lo ? cfg.interval_lo : E0 - 0.5;
        double hi = cfg.interval_hi > cfg.interval_lo ? cfg.interval_hi : E0 + 0.5;
        double margin = cfg.filter_margin > 0.0 ? cfg.filter_margin : 0.25 * std::min(E0 - lo, hi - E0);
        filter = filter_spec(E0, lo, hi, margin);
    }
    run.curve = evolve_survival(H, linspace(0.0, run.t_end, cfg.t_points), filter);
    Resonance res = resonance(E0, run.theta_fermi, run.gamma_fermi, g);
    run.comparison = compare_to_resonance(run.curve, res);
    run.fit = fit_decay(run.curve, run.fit_lo, run.fit_hi);
    run.curve.fitted_gamma = run.fit.gamma;
    run.curve.fitted_E = run.fit.E;
    run.rel_discrepancy = rate > 0.0 ? std::abs(run.fit.gamma - rate) / rate : std::abs(run.fit.gamma);
    return run;
}

json to_json(const EvolveRun& run)
{
    return {{"g", num(run.g)},
            {"dimension", run.dimension},
            {"method", run.curve.method},
            {"chebyshev_order", run.curve.chebyshev_order},
            {"spectral_weight", num(run.curve.spectral_weight)},
            {"t_points", run.curve.t_grid.size()},
            {"t_end", num(run.t_end)},
            {"t_rec", num(run.t_rec)},
            {"fit_window", {num(run.fit_lo), num(run.fit_hi)}},
            {"gamma_fit", num(run.fit.gamma)},
            {"E_fit", num(run.fit.E)},
            {"gamma_fermi", num(run.gamma_fermi)},
            {"theta_fermi", num(run.theta_fermi)},
            {"gamma_predicted", num(run.g * run.g * run.gamma_fermi)},
            {"rel_discrepancy", num(run.rel_discrepancy)},
            {"max_abs_error", num(run.comparison.max_abs_error)},
            {"bound_C", num(run.comparison.C)},
            {"bound", num(run.comparison.bound)},
            {"within_bound", run.comparison.within},
            {"log_refined_ratio", num(run.comparison.log_refined)},
            {"units", {{"g", "dimensionless"}, {"dimension", "count"}, {"chebyshev_order", "count"},
                       {"spectral_weight", "dimensionless"}, {"t_points", "count"}, {"t_end", "time"},
                       {"t_rec", "time"}, {"fit_window", "time"}, {"gamma_fit", "1/time"}, {"E_fit", "energy"},
                       {"gamma_fermi", "energy"}, {"theta_fermi", "energy"}, {"gamma_predicted", "1/time"},
                       {"rel_discrepancy", "dimensionless"}, {"max_abs_error", "dimensionless"},
                       {"bound_C", "dimensionless"}, {"bound", "dimensionless"},
                       {"log_refined_ratio", "dimensionless"}}}};
}

FrictionMourreRun run_friction_mourre(const ExperimentConfig& cfg)
{
    cfg.validate();
    if (cfg.model.kind != ModelKind::friction)
        fail(ErrorKind::unsupported_model, "mourre", "the matrix check needs the friction model");
    ChiDelta chi(cfg.delta);
    FrictionMourreRun run;
    double eps = cfg.mourre_eps;
    run.left_endpoint = friction_mourre_left_endpoint(cfg.delta, eps, cfg.P);
    FockBasis basis = build_basis(cfg.grid(), cfg.n_max);
    Vec eps_values{eps > 0.03 ? eps - 0.03 : 0.5 * eps, eps, eps + 0.03};
    for (double e : eps_values)
        run.eps_scan.push_back(
            friction_mourre_matrix_check(cfg.model, cfg.P, chi, basis, cfg.interval_lo, cfg.interval_hi, e));
    run.monotone_in_eps = true;
    for (std::size_t i = 1; i < run.eps_scan.size(); ++i) {
        double a = run.eps_scan[i - 1].min_margin, b = run.eps_scan[i].min_margin;
        if (!(b <= a + 1e-12)) run.monotone_in_eps = false;
    }
    ExperimentConfig fine = cfg;
    fine.grid_points *= 2;
    FockBasis fine_basis = build_basis(fine.grid(), fine.n_max);
    run.refined = friction_mourre_matrix_check(cfg.model, cfg.P, chi, fine_basis, cfg.interval_lo, cfg.interval_hi, eps);
    const MourreReport& base = run.eps_scan[1];
    run.refinement_change = std::abs(run.refined.min_margin - base.min_margin);
    double lo = std::min(run.refined.min_margin, base.min_margin);
    double hi = std::max(run.refined.min_margin, base.min_margin);
    run.refinement_factor = lo > 0.0 ? hi / lo : INFINITY;
    run.refinement_stable = run.refinement_factor < 10.0;
    run.pass = base.pass && run.refined.pass && run.monotone_in_eps && run.refinement_stable;
    return run;
}

json to_json(const FrictionMourreRun& run)
{
    json scan = json::array();
    for (const MourreReport& r : run.eps_scan) scan.push_back(to_json(r));
    return {{"left_endpoint", num(run.left_endpoint)},
            {"eps_scan", scan},
            {"refined", to_json(run.refined)},
            {"monotone_in_eps", run.monotone_in_eps},
            {"refinement_change", num(run.refinement_change)},
            {"refinement_factor", num(run.refinement_factor)},
            {"refinement_stable", run.refinement_stable},
            {"pass", run.pass},
            {"units", {{"left_endpoint", "energy"}, {"refinement_change", "energy"},
                       {"refinement_factor", "dimensionless"}}}};
}

// ---------------------------------------------------------------- acceptance battery

SuiteInputs load_suite_inputs(const std::string& dir)
{
    SuiteInputs in;
    ExperimentConfig suite = load_config(dir + "/suite.cfg");
    suite.validate();
    in.seed = suite.seed;
    in.samples = suite.samples;
    in.delta = suite.delta;
    in.friction_mourre = load_config(dir + "/friction_mourre.cfg");
    in.friction_mourre.validate();
    in.friction_decay = load_config(dir + "/friction_decay.cfg");
    in.friction_decay.validate();
    return in;
}

namespace {

template <class F>
CriterionResult timed(int id, const char* name, double budget, F&& body)
{
    CriterionResult r;
    r.id = id;
    r.name = name;
    r.budget = budget;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const Error& e) {
        r.pass = false;
        r.details["error"] = {{"kind", to_string(e.kind())}, {"where", e.where()}, {"message", e.what()}};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

Vec along_z(int d, double p)
{
    Vec P(d, 0.0);
    P.back() = p;
    return P;
}

}  // namespace

CriterionResult criterion_polaron(const SuiteInputs& in)
{
    return timed(1, "polaron exactness", 1.0, [&](CriterionResult& r) {
        ModelSpec pol = ModelSpec::polaron(3);
        double ps = p_star(pol);
        double ps_err = std::abs(ps - std::sqrt(2.0));
        CounterRng rng(in.seed, 1);
        double worst = 0.0;
        int checks = 0;
        for (int i = 0; i < 20; ++i) {
            Vec P(3);
            for (double& x : P) x = 3.0 * rng.normal();
            for (int n = 1; n <= 10; ++n, ++checks) worst = std::max(worst, std::abs(threshold(pol, n, P) - n));
        }
        r.pass = ps_err < 1e-9 && worst == 0.0;
        r.details = {{"p_star", ps}, {"p_star_error", ps_err}, {"threshold_checks", checks},
                     {"max_threshold_deviation", worst},
                     {"units", {{"p_star", "momentum"}, {"p_star_error", "momentum"}, {"threshold_checks", "count"},
                                {"max_threshold_deviation", "energy"}}}};
    });
}

CriterionResult criterion_thresholds(const SuiteInputs&)
{
    return timed(2, "threshold structure", 5.0, [&](CriterionResult& r) {
        ModelSpec nel = ModelSpec::nelson(1.0, 3);
        double zero_err = 0.0;
        for (int n = 1; n <= 10; ++n) zero_err = std::max(zero_err, std::abs(threshold(nel, n, along_z(3, 0.0)) - n));
        double large = std::abs(threshold(nel, 1, along_z(3, 1e3)) - (1e3 - 0.5));
        std::vector<Vec> grid;
        for (double p : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0}) grid.push_back(along_z(3, p));
        MonotonicityReport mono = check_monotonicity(nel, grid, 21);
        double inc21 = threshold(nel, 21, along_z(3, 1.0)) - threshold(nel, 20, along_z(3, 1.0));
        double inc_err = std::abs(inc21 - nel.m);
        r.pass = zero_err < 1e-10 && large < 5e-3 && mono.pass() && inc_err < 1e-2;
        r.details = {{"zero_momentum_error", zero_err}, {"large_momentum_error", large},
                     {"monotonicity", to_json(mono)}, {"increment_21_20", inc21}, {"increment_error", inc_err},
                     {"units", {{"zero_momentum_error", "energy"}, {"large_momentum_error", "energy"},
                                {"increment_21_20", "energy"}, {"increment_error", "energy"}}}};
    });
}

CriterionResult criterion_derivative(const SuiteInputs&)
{
    return timed(3, "derivative lemma", 10.0, [&](CriterionResult& r) {
        json reports = json::array();
        json step4 = json::array();
        bool ok = true;
        for (double m : {0.5, 1.0, 2.0}) {
            ModelSpec nel = ModelSpec::nelson(m, 3);
            for (int n = 1; n <= 5; ++n) {
                Vec rs;
                for (int i = 1; i <= 100; ++i) rs.push_back(0.1 + (n + 1 - 0.1) * i / 100.0);
                DerivativeReport d = check_derivative_bound(nel, n, rs);
                ok = ok && d.pass();
                reports.push_back(to_json(d));
                Step4Report s = step4_bound_check(nel, n);
                ok = ok && s.pass;
                step4.push_back(to_json(s));
            }
        }
        r.pass = ok;
        r.details = {{"derivative", reports}, {"step4", step4}};
    });
}

CriterionResult criterion_regularizers(const SuiteInputs& in)
{
    return timed(4, "regularizer battery", 30.0, [&](CriterionResult& r) {
        bool ok = true;
        json chi = json::array();
        for (double d : {0.05, 0.3, 1.0}) {
            ChiReport c = chi_property_check(ChiDelta(d), in.samples, in.seed);
            ok = ok && c.pass();
            chi.push_back(to_json(c));
        }
        ChiDelta c(in.delta);
        json grad = json::array(), smooth = json::array(), insertion = json::array();
        for (int j = 1; j <= 3; ++j) {
            for (int ell = 1; ell <= 8; ++ell) {
                GradReport g = grad_bound_check(c, j, ell, in.samples, in.seed);
                ok = ok && g.pass();
                grad.push_back(to_json(g));
                if (ell >= 2) {
                    SmoothnessReport s = smoothness_check(c, j, ell, in.samples / 10, in.seed);
                    ok = ok && s.pass();
                    smooth.push_back(to_json(s));
                }
            }
            InsertionReport ins = insertion_bound_check(c, j, 1, 8, in.samples, in.seed);
            ok = ok && ins.pass();
            insertion.push_back(to_json(ins));
        }
        r.pass = ok;
        r.details = {{"chi", chi}, {"grad_sum", grad}, {"smoothness", smooth}, {"insertion", insertion}};
    });
}

CriterionResult criterion_nelson_mourre(const SuiteInputs& in)
{
    return timed(5, "nelson mourre symbol inequality", 60.0, [&](CriterionResult& r) {
        bool ok = true;
        json runs = json::array();
        auto check = [&](const ModelSpec& model, const Vec& P, int n) {
            NelsonSymbolReport rep = nelson_symbol_inequality_check(model, P, n, in.samples, in.seed);
            ok = ok && rep.step2.pass && std::abs(rep.minimizer_margin) < 1e-12;
            if (rep.theorem_level) ok = ok && rep.step3.pass;
            runs.push_back(to_json(rep));
        };
        ModelSpec pol = ModelSpec::polaron(3);
        for (int n = 1; n <= 2; ++n) check(pol, along_z(3, 2.0), n);
        ModelSpec nel = ModelSpec::nelson(1.0, 3);
        check(nel, along_z(3, p_n(nel, 3) + 0.5), 3);
        r.pass = ok;
        r.details = {{"runs", runs}};
    });
}

CriterionResult criterion_friction_mourre(const SuiteInputs& in)
{
    return timed(6, "friction mourre matrix check", 120.0, [&](CriterionResult& r) {
        FrictionMourreRun run = run_friction_mourre(in.friction_mourre);
        r.pass = run.pass;
        r.details = to_json(run);
        r.details["config"] = config_json(in.friction_mourre);
    });
}

CriterionResult criterion_fermi(const SuiteInputs&)
{
    return timed(7, "fermi cross-validation", 120.0, [&](CriterionResult& r) {
        bool ok = true;
        json runs = json::array();
        KernelSpec constant;
        constant.form = KernelForm::constant;
        KernelSpec gauss;
        gauss.form = KernelForm::gaussian;
        ModelSpec nel = ModelSpec::nelson(1.0, 3);
        double ps = p_star(nel);
        struct Case {
            const char* label;
            ModelSpec model;
            KernelSpec kernel;
            Vec P;
        };
        std::vector<Case> cases = {
            {"polaron constant", ModelSpec::polaron(3), constant, along_z(3, 2.0)},
            {"polaron gaussian", ModelSpec::polaron(3), gauss, along_z(3, 2.0)},
            {"nelson gaussian", nel, gauss, along_z(3, 1.5 * ps)},
            {"friction gaussian P=1", ModelSpec::friction(1, 1), gauss, {1.0}},
            {"friction gaussian P=1.5", ModelSpec::friction(1, 1), gauss, {1.5}},
        };
        for (const Case& c : cases) {
            ExperimentConfig cfg;
            cfg.model = c.model;
            cfg.kernel = c.kernel;
            cfg.P = c.P;
            FermiRun run = run_fermi(cfg);
            bool pass = run.gamma_discrepancy < 1e-2 && (!run.theta_defined || run.theta_discrepancy < 1e-2);
            ok = ok && pass;
            json j = to_json(run);
            j["label"] = c.label;
            j["pass"] = pass;
            runs.push_back(j);
        }
        double below_nel = gamma_nelson(nel, gauss, along_z(3, 0.8 * ps));
        double below_pol = gamma_nelson(ModelSpec::polaron(3), constant, along_z(3, 1.0));
        double fric_zero = gamma_theta_friction(ModelSpec::friction(1, 1), gauss, {0.0}).gamma;
        ok = ok && below_nel == 0.0 && below_pol == 0.0 && fric_zero == 0.0;
        r.pass = ok;
        r.details = {{"runs", runs},
                     {"below_threshold", {{"nelson_gamma", below_nel}, {"polaron_gamma", below_pol},
                                          {"friction_zero_momentum_gamma", fric_zero}}},
                     {"units", {{"below_threshold", "energy"}}}};
    });
}

CriterionResult criterion_decay(const SuiteInputs& in)
{
    return timed(8, "decay law", 300.0, [&](CriterionResult& r) {
        const ExperimentConfig& cfg = in.friction_decay;
        double g = cfg.model.g;
        EvolveRun strong = run_evolve(cfg, g);
        EvolveRun weak = run_evolve(cfg, 0.5 * g, strong.t_end);
        double ratio = strong.comparison.max_abs_error / weak.comparison.max_abs_error;
        bool window_ok = strong.fit_hi <= 0.5 * strong.t_rec;
        r.pass = strong.rel_discrepancy <= 0.15 && window_ok && ratio >= 3.0;
        r.details = {{"strong", to_json(strong)},
                     {"weak", to_json(weak)},
                     {"error_ratio", ratio},
                     {"window_before_half_recurrence", window_ok},
                     {"config", config_json(cfg)},
                     {"units", {{"error_ratio", "dimensionless"}}}};
    });
}

namespace {

std::vector<CriterionResult> battery(const SuiteInputs& in)
{
    return {criterion_polaron(in),      criterion_thresholds(in),      criterion_derivative(in),
            criterion_regularizers(in), criterion_nelson_mourre(in),   criterion_friction_mourre(in),
            criterion_fermi(in),        criterion_decay(in)};
}

}  // namespace

std::vector<CriterionResult> run_suite(const SuiteInputs& in, bool repeat)
{
    std::vector<CriterionResult> first = battery(in);
    if (!repeat) return first;
    CriterionResult det;
    det.id = 9;
    det.name = "determinism";
    det.budget = INFINITY;
    auto t0 = std::chrono::steady_clock::now();
    unsigned workers = max_workers();
    set_max_workers(workers == 1 ? 3 : 1);
    std::vector<CriterionResult> second = battery(in);
    set_max_workers(workers);
    std::string a = suite_json(in, first).dump(), b = suite_json(in, second).dump();
    det.pass = a == b;
    std::size_t at = 0;
    while (at < a.size() && at < b.size() && a[at] == b[at]) ++at;
    det.details = {{"bytes", a.size()}, {"identical", det.pass},
                   {"first_difference", det.pass ? json(nullptr) : json(at)},
                   {"units", {{"bytes", "count"}, {"first_difference", "count"}}}};
    det.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    first.push_back(det);
    return first;
}

json suite_json(const SuiteInputs& in, const std::vector<CriterionResult>& results)
{
    json crit = json::array();
    bool all = true;
    for (const CriterionResult& r : results) {
        crit.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}});
        all = all && r.pass;
    }
    return {{"schema_version", kSchemaVersion},
            {"seed", in.seed},
            {"samples", in.samples},
            {"delta", in.delta},
            {"criteria", crit},
            {"pass", all},
            {"units", {{"seed", "count"}, {"samples", "count"}, {"delta", "dimensionless"}}}};
}

std::string criterion_line(const CriterionResult& r)
{
    bool in_budget = !(r.seconds > r.budget);
    char buf[256];
    if (std::isfinite(r.budget))
        std::snprintf(buf, sizeof buf, "[%s] %d %s (%.2f s, budget %.0f s%s)", r.pass && in_budget ? "PASS" : "FAIL",
                      r.id, r.name.c_str(), r.seconds, r.budget, in_budget ? "" : ", over budget");
    else
        std::snprintf(buf, sizeof buf, "[%s] %d %s (%.2f s)", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
    return buf;
}

}  // namespace cherenkov
