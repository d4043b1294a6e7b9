// cherenkov: command-line driver for the threshold, regularizer, Fermi, Mourre and decay experiments.
//
// Exit status: 0 pass, 1 assertion violation, 2 input error, 3 numeric error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cherenkov/config.hpp"
#include "cherenkov/errors.hpp"
#include "cherenkov/experiments.hpp"
#include "cherenkov/fock.hpp"
#include "cherenkov/parallel.hpp"

using namespace cherenkov;

namespace {

struct Common {
    std::string config;
    std::vector<std::string> settings;
    std::string out;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("-c,--config,--model-config", c.config, "experiment config file (key = value)");
    cmd->add_option("-s,--set", c.settings, "override one config key, key=value (repeatable)");
    cmd->add_option("-o,--out", c.out, "write the JSON report here instead of stdout");
}

ExperimentConfig resolve(const Common& c, const ExperimentConfig& fallback)
{
    ExperimentConfig cfg = c.config.empty() ? fallback : load_config(c.config);
    for (const std::string& s : c.settings) {
        auto eq = s.find('=');
        if (eq == std::string::npos) fail(ErrorKind::input, "cli", "--set expects key=value, got '" + s + "'");
        apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

void emit(const Common& c, const json& doc)
{
    std::string text = doc.dump(2) + "\n";
    if (c.out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream f(c.out);
    if (!f) fail(ErrorKind::input, "cli", "cannot write '" + c.out + "'");
    f << text;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f) fail(ErrorKind::input, "cli", "cannot write '" + path + "'");
    f << text;
}

ExperimentConfig default_for(ModelKind kind)
{
    ExperimentConfig cfg;
    if (kind == ModelKind::friction) {
        apply_setting(cfg, "model", "friction");
        cfg.P = {1.0};
    }
    return cfg;
}

Vec scaled(const Vec& P, double p)
{
    double n = norm(P);
    Vec out(P.size(), 0.0);
    if (n == 0.0) {
        out.back() = p;
        return out;
    }
    for (std::size_t i = 0; i < P.size(); ++i) out[i] = P[i] / n * p;
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Thresholds, regularizers, Fermi golden rule, Mourre estimates and decay laws for "
                 "translation-invariant particle-field models."};
    app.require_subcommand(1);
    unsigned workers = 0;
    app.add_option("-w,--workers", workers, "cap on worker threads (0 = hardware concurrency)");

    Common c_thr, c_ps, c_fermi, c_mourre, c_evolve, c_reg, c_suite, c_fock;

    auto* thr = app.add_subcommand("thresholds", "threshold table E0^(n)(P) and monotonicity report");
    add_common(thr, c_thr);
    int thr_nmax = -1;
    std::string thr_csv;
    std::vector<double> thr_grid{0.5, 1.0, 2.0, 4.0, 8.0};
    thr->add_option("--n-max", thr_nmax, "largest boson number (overrides n_max)");
    thr->add_option("--csv", thr_csv, "also write the table as CSV (n,c,E,k_star_norm)");
    thr->add_option("--p-grid", thr_grid, "|P| values for the monotonicity report");

    auto* ps = app.add_subcommand("pstar", "critical momentum |P*| and |P^(n)|");
    add_common(ps, c_ps);

    auto* fermi = app.add_subcommand("fermi", "golden-rule gamma_P, theta_P and the resonance z_g(P)");
    add_common(fermi, c_fermi);
    double fermi_tol = 1e-2;
    fermi->add_option("--tolerance", fermi_tol, "allowed relative level-set/oracle discrepancy");

    auto* mourre = app.add_subcommand("mourre", "Mourre estimate: Nelson symbol inequality or friction matrix check");
    add_common(mourre, c_mourre);
    int m_n = 0, m_grid = 0;
    std::uint64_t m_samples = 0, m_seed = 0;
    std::vector<double> m_interval;
    double m_eps = 0.0;
    mourre->add_option("--n", m_n, "sector cutoff n (symbol check)");
    mourre->add_option("--samples", m_samples, "samples per sector (symbol check)");
    mourre->add_option("--seed", m_seed, "random seed");
    mourre->add_option("--interval", m_interval, "energy interval lo hi (friction)")->expected(2);
    mourre->add_option("--eps", m_eps, "eps of J_eps (friction)");
    mourre->add_option("--grid", m_grid, "grid points per axis (friction)");

    auto* evolve = app.add_subcommand("evolve", "vacuum survival amplitude against exp(-i t z_g)");
    add_common(evolve, c_evolve);
    double ev_g = NAN, ev_tol = 0.15;
    std::string ev_csv;
    evolve->add_option("--g", ev_g, "coupling (overrides g)");
    evolve->add_option("--csv", ev_csv, "write the curve as CSV (t,re,im,abs,ref_re,ref_im)");
    evolve->add_option("--tolerance", ev_tol, "allowed relative error of the fitted decay rate");

    auto* reg = app.add_subcommand("regcheck", "property checks for chi_delta, m_tilde and s_tilde");
    add_common(reg, c_reg);
    double r_delta = 0.1;
    int r_j = 1, r_lmin = 1, r_lmax = 8;
    std::uint64_t r_samples = 100000, r_seed = 1;
    reg->add_option("--delta", r_delta, "regularization parameter delta");
    reg->add_option("--j", r_j, "partial-sum order j");
    reg->add_option("--ell-min", r_lmin, "smallest number of coordinates");
    reg->add_option("--ell-max", r_lmax, "largest number of coordinates");
    reg->add_option("--samples", r_samples, "samples per check");
    reg->add_option("--seed", r_seed, "random seed");

    auto* suite = app.add_subcommand("suite", "full acceptance battery");
    add_common(suite, c_suite);
    std::string s_dir = "configs";
    bool s_once = false;
    suite->add_option("--config-dir", s_dir, "directory with suite.cfg, friction_mourre.cfg, friction_decay.cfg");
    suite->add_flag("--once", s_once, "skip the repeated run (and the determinism criterion)");

    auto* fock = app.add_subcommand("fock", "Fock basis statistics and operator export");
    add_common(fock, c_fock);
    bool f_comm = false;
    std::string f_mm;
    fock->add_flag("--commutator", f_comm, "also assemble the friction commutator");
    fock->add_option("--matrix-market", f_mm, "directory for Matrix Market exports of H0, Phi, N");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        set_max_workers(workers);

        if (*thr) {
            ExperimentConfig base;
            apply_setting(base, "model", "nelson_massive");
            ExperimentConfig cfg = resolve(c_thr, base);
            int n_max = thr_nmax >= 0 ? thr_nmax : cfg.n_max;
            ThresholdTable table = threshold_table(cfg.model, cfg.P, n_max);
            json doc = {{"thresholds", to_json(table)}, {"config", config_json(cfg)}};
            bool pass = true;
            if (cfg.model.kind == ModelKind::nelson_massive && n_max >= 2) {
                std::vector<Vec> grid;
                for (double p : thr_grid) grid.push_back(scaled(cfg.P, p));
                MonotonicityReport mono = check_monotonicity(cfg.model, grid, n_max);
                doc["monotonicity"] = to_json(mono);
                pass = mono.pass();
            }
            doc["pass"] = pass;
            if (!thr_csv.empty()) write_text(thr_csv, threshold_csv(table));
            emit(c_thr, doc);
            return pass ? 0 : 1;
        }

        if (*ps) {
            ExperimentConfig cfg = resolve(c_ps, ExperimentConfig{});
            double value = p_star(cfg.model);
            json pn = json::array();
            for (int n = 1; n <= cfg.n_max; ++n) pn.push_back(p_n(cfg.model, n));
            emit(c_ps, {{"model", to_string(cfg.model.kind)},
                        {"p_star", value},
                        {"p_n", pn},
                        {"config", config_json(cfg)},
                        {"units", {{"p_star", "momentum"}, {"p_n", "momentum"}}}});
            return 0;
        }

        if (*fermi) {
            ExperimentConfig cfg = resolve(c_fermi, ExperimentConfig{});
            FermiRun run = run_fermi(cfg);
            bool pass = run.gamma_discrepancy <= fermi_tol &&
                        (!run.theta_defined || run.theta_discrepancy <= fermi_tol);
            json doc = to_json(run);
            doc["tolerance"] = fermi_tol;
            doc["pass"] = pass;
            doc["config"] = config_json(cfg);
            doc["units"]["tolerance"] = "dimensionless";
            emit(c_fermi, doc);
            return pass ? 0 : 1;
        }

        if (*mourre) {
            ExperimentConfig cfg = resolve(c_mourre, ExperimentConfig{});
            if (m_n > 0) cfg.mourre_n = m_n;
            if (m_samples > 0) cfg.samples = m_samples;
            if (*mourre->get_option("--seed")) cfg.seed = m_seed;
            if (m_interval.size() == 2) {
                cfg.interval_lo = m_interval[0];
                cfg.interval_hi = m_interval[1];
            }
            if (m_eps > 0.0) cfg.mourre_eps = m_eps;
            if (m_grid > 0) cfg.grid_points = m_grid;
            cfg.validate();
            json doc;
            bool pass = true;
            if (cfg.model.kind == ModelKind::friction) {
                FrictionMourreRun run = run_friction_mourre(cfg);
                doc = to_json(run);
                pass = run.pass;
            } else {
                NelsonSymbolReport rep =
                    nelson_symbol_inequality_check(cfg.model, cfg.P, cfg.mourre_n, cfg.samples, cfg.seed);
                doc = to_json(rep);
                // step 3 is only a theorem for n = 1 or n >= n_P; otherwise it is exploratory output
                pass = rep.step2.pass && (!rep.theorem_level || rep.step3.pass);
                if (cfg.model.kind == ModelKind::nelson_massive) {
                    Step4Report s4 = step4_bound_check(cfg.model, cfg.mourre_n);
                    doc["step4"] = to_json(s4);
                    pass = pass && s4.pass;
                }
                doc["pass"] = pass;
            }
            doc["config"] = config_json(cfg);
            emit(c_mourre, doc);
            return pass ? 0 : 1;
        }

        if (*evolve) {
            ExperimentConfig cfg = resolve(c_evolve, default_for(ModelKind::friction));
            double g = std::isnan(ev_g) ? cfg.model.g : ev_g;
            EvolveRun run = run_evolve(cfg, g);
            bool pass = run.rel_discrepancy <= ev_tol;
            json doc = to_json(run);
            doc["tolerance"] = ev_tol;
            doc["pass"] = pass;
            doc["config"] = config_json(cfg);
            doc["units"]["tolerance"] = "dimensionless";
            if (!ev_csv.empty()) write_text(ev_csv, decay_csv(run.curve));
            emit(c_evolve, doc);
            return pass ? 0 : 1;
        }

        if (*reg) {
            require(r_j >= 1 && r_lmin >= 1 && r_lmax >= r_lmin, ErrorKind::input, "regcheck",
                    "need j >= 1 and 1 <= ell-min <= ell-max");
            require(r_delta > 0.0, ErrorKind::input, "regcheck", "delta must be positive");
            ChiDelta chi(r_delta);
            ChiReport cr = chi_property_check(chi, r_samples, r_seed);
            bool pass = cr.pass();
            json grad = json::array(), smooth = json::array();
            for (int ell = r_lmin; ell <= r_lmax; ++ell) {
                GradReport g = grad_bound_check(chi, r_j, ell, r_samples, r_seed);
                pass = pass && g.pass();
                grad.push_back(to_json(g));
                SmoothnessReport s = smoothness_check(chi, r_j, ell, std::max<std::uint64_t>(1, r_samples / 10), r_seed);
                pass = pass && s.pass();
                smooth.push_back(to_json(s));
            }
            InsertionReport ins = insertion_bound_check(chi, r_j, r_lmin, r_lmax, r_samples, r_seed);
            pass = pass && ins.pass();
            emit(c_reg, {{"delta", r_delta},
                         {"j", r_j},
                         {"seed", r_seed},
                         {"chi", to_json(cr)},
                         {"grad_sum", grad},
                         {"smoothness", smooth},
                         {"insertion", to_json(ins)},
                         {"pass", pass},
                         {"units", {{"delta", "dimensionless"}, {"j", "count"}, {"seed", "count"}}}});
            return pass ? 0 : 1;
        }

        if (*suite) {
            SuiteInputs in = load_suite_inputs(s_dir);
            std::vector<CriterionResult> results = run_suite(in, !s_once);
            FILE* lines = c_suite.out.empty() ? stderr : stdout;
            bool pass = true;
            for (const CriterionResult& r : results) {
                std::fprintf(lines, "%s\n", criterion_line(r).c_str());
                pass = pass && r.pass;
            }
            emit(c_suite, suite_json(in, results));
            return pass ? 0 : 1;
        }

        if (*fock) {
            ExperimentConfig cfg = resolve(c_fock, default_for(ModelKind::friction));
            FockBasis basis = build_basis(cfg.grid(), cfg.n_max);
            SparseOperator H0 = assemble_H0(cfg.model, cfg.P, basis);
            SparseOperator phi = assemble_field(cfg.kernel, cfg.model, basis);
            SparseOperator N = assemble_number(basis);
            json sectors = json::array();
            for (int n = 0; n <= cfg.n_max; ++n) sectors.push_back(basis.sector_begin[n + 1] - basis.sector_begin[n]);
            json ops = json::array();
            auto op_json = [](const SparseOperator& op) {
                return json{{"label", op.label}, {"nnz", op.nnz()}, {"hermitian", op.hermitian},
                            {"hermitian_defect", hermitian_defect(op)}};
            };
            ops.push_back(op_json(H0));
            ops.push_back(op_json(phi));
            ops.push_back(op_json(N));
            if (f_comm) ops.push_back(op_json(assemble_commutator_friction(cfg.model, cfg.P, ChiDelta(cfg.delta), basis)));
            if (!f_mm.empty()) {
                write_matrix_market(H0, f_mm + "/H0.mtx");
                write_matrix_market(phi, f_mm + "/Phi.mtx");
                write_matrix_market(N, f_mm + "/N.mtx");
            }
            emit(c_fock, {{"modes", basis.modes.size()},
                          {"n_max", basis.n_max},
                          {"dimension", basis.size()},
                          {"sector_sizes", sectors},
                          {"grid_weight", cfg.grid().weight()},
                          {"operators", ops},
                          {"config", config_json(cfg)},
                          {"units", {{"modes", "count"}, {"n_max", "count"}, {"dimension", "count"},
                                     {"sector_sizes", "count"}, {"grid_weight", "momentum^dim"},
                                     {"operators.nnz", "count"}, {"operators.hermitian_defect", "energy"}}}});
            return 0;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e.kind());
    } catch (const std::bad_alloc&) {
        std::fprintf(stderr, "error: out of memory\n");
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
