#include "cherenkov/mourre.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "cherenkov/errors.hpp"
#include "cherenkov/parallel.hpp"
#include "cherenkov/rng.hpp"
#include "cherenkov/thresholds.hpp"

namespace cherenkov {

namespace {

constexpr std::size_t kMaxWitnesses = 10;

struct SymbolFrame {
    Vec kstar;
    double c = 0.0;
    Vec phat;
};

SymbolFrame frame(const ModelSpec& model, const Vec& P, int n)
{
    SymbolFrame f;
    f.kstar = k_star(model, n, P);
    f.c = model.kind == ModelKind::nelson_massive ? solve_c(model, n, P) : 0.0;
    double p = norm(P);
    f.phat.assign(P.size(), 0.0);
    if (p > 0.0)
        for (std::size_t i = 0; i < P.size(); ++i) f.phat[i] = P[i] / p;
    return f;
}

double symbol_with_frame(const ModelSpec& model, const SymbolFrame& f, int n, const std::vector<Vec>& ks)
{
    std::size_t d = f.kstar.size();
    Vec s1(d, 0.0), s2(d, 0.0);
    double local = 0.0;
    for (const Vec& k : ks) {
        Vec grad = grad_omega(model, k);
        for (std::size_t i = 0; i < d; ++i) {
            double dk = k[i] - f.kstar[i];
            s1[i] += dk;
            s2[i] += k[i];
            local += dk * (grad[i] - f.c * f.phat[i]);
        }
    }
    for (std::size_t i = 0; i < d; ++i) s2[i] -= n * f.kstar[i];
    return dot(s1, s2) + local;
}

void require_symbol_model(const ModelSpec& model, const char* where)
{
    if (model.kind == ModelKind::friction)
        fail(ErrorKind::unsupported_model, where, "the symbol check covers nelson_massive and polaron");
}

}  // namespace

double nelson_commutator_symbol(const ModelSpec& model, const Vec& P, int n, const std::vector<Vec>& ks)
{
    require_symbol_model(model, "nelson_commutator_symbol");
    require(n >= 1, ErrorKind::input, "nelson_commutator_symbol", "n must be >= 1");
    require(!ks.empty(), ErrorKind::input, "nelson_commutator_symbol", "need at least one boson");
    if (static_cast<int>(ks.size()) > n)
        fail(ErrorKind::input, "nelson_commutator_symbol",
             "sector ell = " + std::to_string(ks.size()) + " exceeds n = " + std::to_string(n));
    for (const Vec& k : ks)
        require(static_cast<int>(k.size()) == model.d, ErrorKind::input, "nelson_commutator_symbol",
                "momentum has the wrong dimension");
    return symbol_with_frame(model, frame(model, P, n), n, ks);
}

NelsonSymbolReport nelson_symbol_inequality_check(const ModelSpec& model, const Vec& P, int n, std::uint64_t samples,
                                                  std::uint64_t seed)
{
    require_symbol_model(model, "nelson_symbol_inequality_check");
    require(n >= 1 && samples >= 1, ErrorKind::input, "nelson_symbol_inequality_check", "need n >= 1 and samples >= 1");
    SymbolFrame f = frame(model, P, n);
    double En = threshold(model, n, P);
    double p = norm(P);
    NelsonSymbolReport rep;
    rep.correction = (p - f.c) * (p - f.c) / (2.0 * n) - alpha(model, n, P);
    if (n == 1)
        rep.theorem_level = true;
    else if (model.kind != ModelKind::friction && p > p_star(model))
        rep.theorem_level = n >= n_p(model, P);
    int d = model.d;
    std::vector<Vec> at_min(n, f.kstar);
    rep.minimizer_margin = symbol_with_frame(model, f, n, at_min);  // H(k*) - H(k*) vanishes

    for (MourreReport* r : {&rep.step2, &rep.step3}) {
        r->model = to_string(model.kind);
        r->P = P;
        r->n = n;
        r->ell_min = 1;
        r->ell_max = n;
        r->samples = samples;
        r->tolerance = 1e-10;
        r->min_margin = INFINITY;
    }
    double spread = 1.0 + norm(f.kstar);
    for (int ell = 1; ell <= n; ++ell) {
        std::vector<Vec> star(ell, f.kstar);
        double H_star = symbol_n(model, P, star);
        CounterRng base(seed, 0x4d4f + 97 * n + ell);
        struct Row {
            double m2, m3;
            bool has3;
        };
        std::vector<Row> rows(samples);
        std::vector<std::vector<Vec>> configs(samples);
        parallel_for(samples, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                CounterRng rng = base.split(i);
                std::vector<Vec> ks(ell, Vec(d));
                double u = rng.uniform();
                for (Vec& k : ks)
                    for (int a = 0; a < d; ++a) {
                        if (u < 0.4)
                            k[a] = f.kstar[a] + 0.1 * spread * rng.normal();
                        else if (u < 0.75)
                            k[a] = rng.normal();
                        else
                            k[a] = spread * rng.cauchy();
                    }
                double sym = symbol_with_frame(model, f, n, ks);
                double H = symbol_n(model, P, ks);
                double scale = 1e-12 * (std::abs(sym) + std::abs(H) + 1.0);  // rounding allowance for large momenta
                rows[i].m2 = sym - (H - H_star) + scale;
                rows[i].has3 = H > En;
                rows[i].m3 = sym - ((H - En) + (1.0 - static_cast<double>(ell) / n) * rep.correction) + scale;
                configs[i] = std::move(ks);
            }
        });
        for (std::size_t i = 0; i < samples; ++i) {
            auto note = [&](MourreReport& r, double margin) {
                r.min_margin = std::min(r.min_margin, margin);
                if (margin < -r.tolerance) {
                    ++r.violation_count;
                    if (r.violations.size() < kMaxWitnesses) r.violations.push_back({ell, configs[i], margin});
                }
            };
            note(rep.step2, rows[i].m2);
            if (rows[i].has3) note(rep.step3, rows[i].m3);
        }
    }
    rep.step2.pass = rep.step2.violation_count == 0 && std::abs(rep.minimizer_margin) < 1e-12;
    rep.step3.pass = rep.step3.violation_count == 0;
    return rep;
}

Step4Report step4_bound_check(const ModelSpec& model, int n)
{
    if (model.kind != ModelKind::nelson_massive)
        fail(ErrorKind::unsupported_model, "step4_bound_check", "nelson_massive only");
    require(n >= 1, ErrorKind::input, "step4_bound_check", "n must be >= 1");
    Step4Report rep;
    rep.n = n;
    rep.m = model.m;
    rep.p_next = p_n(model, n + 1);
    auto f_of_c = [](double c) { return std::pow(1.0 - c * c, 1.5) / (c * c); };
    double c_next = solve_c_real(model.m, n + 1, rep.p_next);
    double c_here = solve_c_real(model.m, n, rep.p_next);
    rep.f_difference = f_of_c(c_next) - f_of_c(c_here);
    rep.identity_residual = std::abs(f_of_c(c_next) - 0.5 * model.m * (n + 1));
    double s = std::sqrt(1.0 - c_here * c_here);
    double mn = model.m * n;
    double closed = 0.5 * mn * mn * c_here * c_here / (1.0 - c_here * c_here) - mn * s;
    rep.alpha_formula_residual = std::abs(alpha_abs(model, n, rep.p_next) - closed);
    rep.f_decreasing_in_c = true;
    double prev = INFINITY;
    for (int i = 1; i < 1000; ++i) {
        double v = f_of_c(i / 1000.0);
        if (!(v < prev)) rep.f_decreasing_in_c = false;
        prev = v;
    }
    rep.pass = rep.f_difference <= model.m + 1e-8 && rep.identity_residual < 1e-8 &&
               rep.alpha_formula_residual < 1e-8 * std::max(1.0, std::abs(closed)) && rep.f_decreasing_in_c;
    return rep;
}

double friction_mourre_left_endpoint(double delta, double eps, const Vec& P)
{
    double a = (1.0 + delta) / (3.0 + delta) + eps;
    return 0.5 * a * a * dot(P, P);
}

namespace {

double lanczos_min(const SparseOperator& op, const std::vector<std::size_t>& rows)
{
    std::size_t m = rows.size();
    std::vector<long> pos(op.dim, -1);
    for (std::size_t i = 0; i < m; ++i) pos[rows[i]] = static_cast<long>(i);
    auto apply = [&](const Vec& x, Vec& y) {
        y.assign(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t r = rows[i];
            double s = 0.0;
            for (std::size_t p = op.row_ptr[r]; p < op.row_ptr[r + 1]; ++p) {
                long j = pos[op.cols[p]];
                if (j >= 0) s += op.values[p].real() * x[j];
            }
            y[i] = s;
        }
    };
    std::size_t kmax = std::min<std::size_t>(m, 400);
    std::vector<Vec> basis;
    Vec alpha_, beta_;
    Vec v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = 1.0 + 0.01 * std::sin(static_cast<double>(i) * 0.7);
    double nv = std::sqrt(dot(v, v));
    for (double& x : v) x /= nv;
    double last = INFINITY;
    for (std::size_t k = 0; k < kmax; ++k) {
        basis.push_back(v);
        Vec w;
        apply(v, w);
        double a = dot(w, v);
        alpha_.push_back(a);
        for (const Vec& b : basis) {  // full reorthogonalization
            double c = dot(w, b);
            for (std::size_t i = 0; i < m; ++i) w[i] -= c * b[i];
        }
        double b = std::sqrt(dot(w, w));
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k + 1, k + 1);
        for (std::size_t i = 0; i <= k; ++i) {
            T(i, i) = alpha_[i];
            if (i < k) T(i, i + 1) = T(i + 1, i) = beta_[i];
        }
        double cur = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(T, Eigen::EigenvaluesOnly).eigenvalues()(0);
        if (b < 1e-12 || std::abs(cur - last) < 1e-13 * (1.0 + std::abs(cur))) return cur;
        last = cur;
        beta_.push_back(b);
        for (std::size_t i = 0; i < m; ++i) v[i] = w[i] / b;
    }
    return last;
}

}  // namespace

double min_eigenvalue(const SparseOperator& op, const std::vector<std::size_t>& rows)
{
    require(!rows.empty(), ErrorKind::degenerate_interval, "min_eigenvalue", "empty row set");
    std::size_t m = rows.size();
    if (m > 5000) return lanczos_min(op, rows);
    std::vector<long> pos(op.dim, -1);
    for (std::size_t i = 0; i < m; ++i) pos[rows[i]] = static_cast<long>(i);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t r = rows[i];
        for (std::size_t p = op.row_ptr[r]; p < op.row_ptr[r + 1]; ++p) {
            long j = pos[op.cols[p]];
            if (j >= 0) A(i, j) = op.values[p].real();
        }
    }
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

MourreReport friction_mourre_matrix_check(const ModelSpec& model, const Vec& P, const ChiDelta& chi,
                                          const FockBasis& basis, double lo, double hi, double eps,
                                          double tol_factor)
{
    if (model.kind != ModelKind::friction)
        fail(ErrorKind::unsupported_model, "friction_mourre_matrix_check", "model is not friction");
    require(hi > lo, ErrorKind::input, "friction_mourre_matrix_check", "interval needs hi > lo");
    require(eps > 0.0, ErrorKind::input, "friction_mourre_matrix_check", "eps must be positive");
    MourreReport rep;
    rep.model = to_string(model.kind);
    rep.P = P;
    rep.n = basis.n_max;
    rep.interval_lo = lo;
    rep.interval_hi = hi;
    double P2 = dot(P, P);
    rep.tolerance = tol_factor * P2;
    double left = friction_mourre_left_endpoint(chi.delta(), eps, P);
    if (lo < left) {
        rep.status = "outside guaranteed region";
        rep.pass = false;
        rep.min_margin = NAN;
        return rep;
    }
    SparseOperator H0 = assemble_H0(model, P, basis);
    Vec h = H0.diagonal();
    std::vector<std::size_t> in;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (h[i] >= lo && h[i] <= hi) in.push_back(i);
    if (in.empty())
        fail(ErrorKind::degenerate_interval, "friction_mourre_matrix_check",
             "no grid energies in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    SparseOperator K = assemble_commutator_friction(model, P, chi, basis);
    // deficit = K + P^2 Pi_Omega - eps(1/3 + eps) P^2 on the range of the projector
    Vec shift(basis.size(), -eps * (1.0 / 3.0 + eps) * P2);
    shift[0] += P2;
    SparseOperator deficit = add(K, diagonal_operator(shift, "shift"), 1.0, "Mourre deficit");
    rep.samples = in.size();
    rep.min_margin = min_eigenvalue(deficit, in);
    rep.pass = rep.min_margin >= -rep.tolerance;
    if (!rep.pass) rep.violation_count = 1;
    return rep;
}

}  // namespace cherenkov
