#include "cherenkov/thresholds.hpp"

#include <algorithm>
#include <cmath>

#include "cherenkov/errors.hpp"

namespace cherenkov {

namespace {

void require_n(int n, const char* where)
{
    require(n >= 1, ErrorKind::input, where, "boson number n must be >= 1");
}

void require_nelson(const ModelSpec& model, const char* where)
{
    if (model.kind != ModelKind::nelson_massive)
        fail(ErrorKind::unsupported_model, where, std::string("not defined for model ") + to_string(model.kind));
}

double c_residual(double m, double r, double p, double c)
{
    double s = p - c;
    return c - s / std::sqrt(m * m * r * r + s * s);
}

template <class F>
double bisect(F&& f, double lo, double hi)
{
    for (int it = 0; it < 400 && hi - lo > 0.0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Root of P^2/2 - E(n,P) in |P|.
double critical_momentum(const ModelSpec& model, int n, const char* where)
{
    require_n(n, where);
    if (model.kind == ModelKind::friction)
        fail(ErrorKind::unsupported_model, where, "friction has no nonzero critical momentum");
    if (model.kind == ModelKind::polaron) return std::sqrt(2.0 * n);
    auto f = [&](double p) { return 0.5 * p * p - threshold_abs(model, n, p); };
    double hi = 2.0;
    while (f(hi) < 0.0) hi *= 2.0;
    double p = bisect(f, 0.0, hi);
    double res = std::abs(f(p));
    if (!(res < 1e-10 * std::max(1.0, 0.5 * p * p)))
        fail(ErrorKind::numeric, where, "critical momentum residual " + std::to_string(res));
    return p;
}

}  // namespace

double solve_c_real(double m, double r, double p_abs)
{
    require(r > 0.0, ErrorKind::input, "solve_c", "n must be positive");
    require(m > 0.0, ErrorKind::input, "solve_c", "mass must be positive");
    if (p_abs == 0.0) return 0.0;
    double c = bisect([&](double x) { return c_residual(m, r, p_abs, x); }, 0.0, std::min(p_abs, 1.0));
    double res = std::abs(c_residual(m, r, p_abs, c));
    if (!(res < 1e-12)) fail(ErrorKind::numeric, "solve_c", "residual " + std::to_string(res));
    return c;
}

double solve_c(const ModelSpec& model, int n, const Vec& P)
{
    require_nelson(model, "solve_c");
    require_n(n, "solve_c");
    return solve_c_real(model.m, n, norm(P));
}

double threshold_abs(const ModelSpec& model, int n, double p_abs)
{
    require_n(n, "threshold");
    switch (model.kind) {
    case ModelKind::polaron: return n;
    case ModelKind::friction: return 0.0;
    case ModelKind::nelson_massive: break;
    }
    double c = solve_c_real(model.m, n, p_abs);
    double s = p_abs - c;
    return 0.5 * c * c + std::sqrt(model.m * model.m * n * n + s * s);
}

double threshold(const ModelSpec& model, int n, const Vec& P)
{
    require(static_cast<int>(P.size()) == model.d, ErrorKind::input, "threshold", "P has the wrong dimension");
    return threshold_abs(model, n, norm(P));
}

Vec k_star(const ModelSpec& model, int n, const Vec& P)
{
    require_n(n, "k_star");
    require(static_cast<int>(P.size()) == model.d, ErrorKind::input, "k_star", "P has the wrong dimension");
    double p = norm(P);
    Vec k(P.size(), 0.0);
    if (p == 0.0) return k;
    double scale = 1.0 / n;
    if (model.kind == ModelKind::nelson_massive) scale = (p - solve_c_real(model.m, n, p)) / (n * p);
    for (std::size_t i = 0; i < P.size(); ++i) k[i] = scale * P[i];
    return k;
}

double p_star(const ModelSpec& model)
{
    return critical_momentum(model, 1, "p_star");
}

double p_n(const ModelSpec& model, int n)
{
    return critical_momentum(model, n, "p_n");
}

double alpha_abs(const ModelSpec& model, int n, double p_abs)
{
    return 0.5 * p_abs * p_abs - threshold_abs(model, n, p_abs);
}

double alpha(const ModelSpec& model, int n, const Vec& P)
{
    return 0.5 * dot(P, P) - threshold(model, n, P);
}

int n_p(const ModelSpec& model, const Vec& P)
{
    double p = norm(P);
    double ps = p_star(model);
    if (!(p > ps))
        fail(ErrorKind::below_critical, "n_p", "|P| = " + std::to_string(p) + " <= p_star = " + std::to_string(ps));
    int n = 1;
    while (alpha_abs(model, n + 1, p) >= 0.0) {
        ++n;
        if (n > 1000000) fail(ErrorKind::numeric, "n_p", "no upper threshold found");
    }
    return n;
}

ThresholdTable threshold_table(const ModelSpec& model, const Vec& P, int n_max)
{
    require(n_max >= 1, ErrorKind::input, "thresholds", "n_max must be >= 1");
    ThresholdTable table;
    table.P = P;
    for (int n = 1; n <= n_max; ++n) {
        ThresholdRow row;
        row.n = n;
        row.c = model.kind == ModelKind::nelson_massive ? solve_c(model, n, P) : 0.0;
        row.E = threshold(model, n, P);
        row.k_star = k_star(model, n, P);
        table.rows.push_back(std::move(row));
    }
    return table;
}

MonotonicityReport check_monotonicity(const ModelSpec& model, const std::vector<Vec>& P_grid, int n_max)
{
    require_nelson(model, "check_monotonicity");
    require(n_max >= 2, ErrorKind::input, "check_monotonicity", "n_max must be >= 2");
    MonotonicityReport rep;
    rep.n_max = n_max;
    for (const Vec& P : P_grid) rep.p_abs.push_back(norm(P));
    std::sort(rep.p_abs.begin(), rep.p_abs.end());
    const double tol = 1e-12;
    for (double p : rep.p_abs) {
        Vec inc;
        double prev = threshold_abs(model, 1, p);
        for (int n = 1; n < n_max; ++n) {
            double next = threshold_abs(model, n + 1, p);
            inc.push_back(next - prev);
            prev = next;
        }
        for (int n = 1; n < n_max; ++n) {
            double v = inc[n - 1];
            if (!(v > 0.0)) rep.violations.push_back({"increment not positive", n, p, v});
            if (v > model.m + tol) rep.violations.push_back({"increment exceeds m", n, p, v});
            if (n >= 2 && v < inc[n - 2] - tol)
                rep.violations.push_back({"increment not increasing in n", n, p, v - inc[n - 2]});
        }
        rep.increments.push_back(std::move(inc));
    }
    for (std::size_t i = 1; i < rep.p_abs.size(); ++i) {
        if (rep.p_abs[i] == rep.p_abs[i - 1]) continue;
        for (int n = 1; n < n_max; ++n) {
            double diff = rep.increments[i][n - 1] - rep.increments[i - 1][n - 1];
            if (diff > tol) rep.violations.push_back({"increment not decreasing in |P|", n, rep.p_abs[i], diff});
        }
    }
    return rep;
}

DerivativeReport check_derivative_bound(const ModelSpec& model, int n, const Vec& r_grid)
{
    require_nelson(model, "check_derivative_bound");
    require_n(n, "check_derivative_bound");
    for (double r : r_grid)
        require(r > 0.0 && r <= n + 1, ErrorKind::input, "check_derivative_bound", "r outside (0, n+1]");
    DerivativeReport rep;
    rep.n = n;
    rep.m = model.m;
    rep.p_crit = p_n(model, n + 1);
    auto f = [&](double r) {
        double c = solve_c_real(model.m, r, rep.p_crit);
        return std::pow(1.0 - c * c, 1.5) / (c * c);
    };
    rep.max_slope = -INFINITY;
    for (double r : r_grid) {
        double h = 1e-5 * std::max(1.0, r);
        double lo = std::max(r - h, 0.5 * r);
        double hi = r + h;  // c(r) extends smoothly past n+1
        double slope = (f(hi) - f(lo)) / (hi - lo);
        double fr = f(r);
        rep.r.push_back(r);
        rep.f.push_back(fr);
        rep.slope.push_back(slope);
        rep.max_slope = std::max(rep.max_slope, slope);
        rep.max_f_excess = std::max(rep.max_f_excess, fr - 0.5 * model.m * r);
        if (slope > model.m + 1e-6) rep.violations.push_back({"slope exceeds m", n, r, slope});
        if (fr > 0.5 * model.m * r + 1e-8) rep.violations.push_back({"f exceeds m r / 2", n, r, fr});
    }
    rep.endpoint_error = std::abs(f(n + 1.0) - 0.5 * model.m * (n + 1));
    if (rep.endpoint_error > 1e-8) rep.violations.push_back({"endpoint identity", n, n + 1.0, rep.endpoint_error});
    return rep;
}

}  // namespace cherenkov
