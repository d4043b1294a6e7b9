#include "cherenkov/fermi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cherenkov/errors.hpp"
#include "cherenkov/parallel.hpp"
#include "cherenkov/thresholds.hpp"

namespace cherenkov {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

double two_pi_pow(int dim)
{
    return std::pow(2.0 * kPi, -dim);
}

// Weighted sum over directions, evaluated in parallel and reduced in a fixed order.
double direction_sum(std::size_t n, const std::function<double(std::size_t)>& term)
{
    Vec parts(n);
    parallel_for(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) parts[i] = term(i);
    }, 8);
    return pairwise_sum(parts);
}

// One-boson symbol h(k) = (P - k)^2/2 + omega(k) and the rays from its minimizer.
struct NelsonGeometry {
    const ModelSpec& model;
    const KernelSpec& kernel;
    Vec P;
    Vec c0;
    double floor;
    SphereRule rule;

    NelsonGeometry(const ModelSpec& m, const KernelSpec& k, const Vec& p, int level)
        : model(m), kernel(k), P(p), c0(k_star(m, 1, p)), floor(threshold(m, 1, p)), rule(sphere_rule(m.d, level, p))
    {
    }

    double h(const Vec& x) const
    {
        double s = 0.0, k2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += (P[i] - x[i]) * (P[i] - x[i]);
            k2 += x[i] * x[i];
        }
        double w = model.kind == ModelKind::polaron ? 1.0 : std::sqrt(model.m * model.m + k2);
        return 0.5 * s + w;
    }

    double slope(const Vec& x, const Vec& u) const
    {
        double k2 = 0.0;
        for (double v : x) k2 += v * v;
        double inv = model.kind == ModelKind::polaron ? 0.0 : 1.0 / std::sqrt(model.m * model.m + k2);
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - P[i] + inv * x[i]) * u[i];
        return s;
    }

    Vec point(const Vec& u, double r) const
    {
        Vec x = c0;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += r * u[i];
        return x;
    }

    // Radius where h = t along direction u (t > floor); h is convex and increasing in r.
    double root(const Vec& u, double t) const
    {
        double lo = 0.0, hi = std::numeric_limits<double>::infinity();
        double r = std::sqrt(2.0 * (t - floor));
        for (int it = 0; it < 200; ++it) {
            Vec x = point(u, r);
            double f = h(x) - t;
            if (f == 0.0) return r;
            if (f < 0.0)
                lo = r;
            else
                hi = r;
            double next = r - f / slope(x, u);
            if (!(next > lo && next < hi)) next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * r + 1.0;
            if (std::abs(next - r) <= 1e-15 * (1.0 + r)) return next;
            r = next;
        }
        return r;
    }

    double density(double t) const
    {
        if (!(t > floor)) return 0.0;
        int d = model.d;
        double sum = direction_sum(rule.directions.size(), [&](std::size_t i) {
            const Vec& u = rule.directions[i];
            double r = root(u, t);
            Vec x = point(u, r);
            double rho = kernel_eval(kernel, model, x);
            if (rho == 0.0) return 0.0;
            return rule.weights[i] * rho * rho * std::pow(r, d - 1) / slope(x, u);
        });
        return two_pi_pow(d) * sum;
    }
};

// Friction one-boson symbol |k| + (P - xi)^2/2 over (k, xi) in R^q x R^d.
struct FrictionGeometry {
    const ModelSpec& model;
    const KernelSpec& kernel;
    Vec P;
    SphereRule ks;
    SphereRule xs;
    double rel_tol;

    FrictionGeometry(const ModelSpec& m, const KernelSpec& k, const Vec& p, int level, double tol)
        : model(m), kernel(k), P(p), ks(sphere_rule(m.q, level)), xs(sphere_rule(m.d, level, p)), rel_tol(tol)
    {
    }

    Vec point(const Vec& v, double kappa, const Vec& u, double R) const
    {
        Vec x(model.q + model.d);
        for (int i = 0; i < model.q; ++i) x[i] = kappa * v[i];
        for (int i = 0; i < model.d; ++i) x[model.q + i] = P[i] + R * u[i];
        return x;
    }

    double rho2(const Vec& x) const
    {
        double r = kernel_eval(kernel, model, x);
        return r * r;
    }

    // kappa = t - s^2/2, R = s on the level set h = t.
    double density(double t) const
    {
        if (!(t > 0.0)) return 0.0;
        int q = model.q, d = model.d;
        std::size_t nv = ks.directions.size(), nu = xs.directions.size();
        double smax = std::sqrt(2.0 * t);
        double sum = direction_sum(nv * nu, [&](std::size_t idx) {
            const Vec& v = ks.directions[idx / nu];
            const Vec& u = xs.directions[idx % nu];
            auto f = [&](double s) {
                double kappa = t - 0.5 * s * s;
                if (kappa < 0.0) kappa = 0.0;
                return std::pow(kappa, q - 1) * std::pow(s, d - 1) * rho2(point(v, kappa, u, s));
            };
            Vec cuts;
            for (double kb : {kernel.k_min, kernel.k_max})
                if (kb > 0.0 && std::isfinite(kb) && kb < t) cuts.push_back(std::sqrt(2.0 * (t - kb)));
            if (std::isfinite(kernel.xi_max)) {
                // |P + s u| = xi_max
                double pu = dot(P, u);
                double disc = pu * pu - dot(P, P) + kernel.xi_max * kernel.xi_max;
                if (disc > 0.0)
                    for (double r : {-pu - std::sqrt(disc), -pu + std::sqrt(disc)})
                        if (r > 0.0 && r < smax) cuts.push_back(r);
            }
            std::sort(cuts.begin(), cuts.end());
            double w = ks.weights[idx / nu] * xs.weights[idx % nu];
            return w * integrate(f, 0.0, smax, rel_tol, cuts).value;
        });
        return two_pi_pow(q + d) * sum;
    }
};

void require_p(const ModelSpec& model, const Vec& P, const char* where)
{
    require(static_cast<int>(P.size()) == model.d, ErrorKind::input, where, "P has the wrong dimension");
}

}  // namespace

Resonance resonance(double E0, double theta, double gamma, double g)
{
    require(gamma >= 0.0, ErrorKind::input, "resonance", "gamma must be nonnegative");
    require(std::isfinite(E0) && std::isfinite(theta) && std::isfinite(g), ErrorKind::input, "resonance",
            "E0, theta and g must be finite");
    Resonance r;
    r.E0 = E0;
    r.theta = theta;
    r.gamma = gamma;
    r.g = g;
    r.z = std::complex<double>(E0 - g * g * theta, -g * g * gamma);
    return r;
}

double one_boson_floor(const ModelSpec& model, const Vec& P)
{
    return model.kind == ModelKind::friction ? 0.0 : threshold(model, 1, P);
}

double spectral_density(const ModelSpec& model, const KernelSpec& kernel, const Vec& P, double t,
                        const FermiOptions& opts)
{
    model.validate();
    kernel.validate(model);
    require_p(model, P, "spectral_density");
    if (model.kind == ModelKind::friction)
        return FrictionGeometry(model, kernel, P, opts.sphere_level, opts.rel_tol).density(t);
    return NelsonGeometry(model, kernel, P, opts.sphere_level).density(t);
}

namespace {

template <class Density>
double refined_gamma(const std::function<Density(int)>& make, double E, const FermiOptions& opts, const char* where)
{
    int level = std::max(1, opts.sphere_level);
    double coarse = make(level).density(E);
    while (true) {
        int fine_level = 2 * level;
        double fine = make(fine_level).density(E);
        double diff = std::abs(fine - coarse);
        if (diff <= 1e-3 * std::abs(fine) || fine == 0.0) return kPi * fine;
        if (fine_level >= opts.max_level)
            fail(ErrorKind::numeric, where,
                 "level-set quadrature not converged: relative change " + std::to_string(diff / std::abs(fine)) +
                     " at sphere level " + std::to_string(fine_level));
        coarse = fine;
        level = fine_level;
    }
}

}  // namespace

double gamma_nelson(const ModelSpec& model, const KernelSpec& kernel, const Vec& P, const FermiOptions& opts)
{
    model.validate();
    kernel.validate(model);
    require_p(model, P, "gamma_nelson");
    if (model.kind == ModelKind::friction)
        fail(ErrorKind::unsupported_model, "gamma_nelson", "use gamma_theta_friction for the friction model");
    double E = vacuum_energy(P);
    if (!(E > threshold(model, 1, P))) return 0.0;
    return refined_gamma<NelsonGeometry>(
        [&](int level) { return NelsonGeometry(model, kernel, P, level); }, E, opts, "gamma_nelson");
}

double principal_value(const std::function<double(double)>& density, double floor, double E, double rel_tol,
                       const Vec& breakpoints)
{
    // t = floor + s^2 absorbs the threshold behaviour of the density
    auto t_of = [&](double s) { return floor + s * s; };
    double core = 0.0;
    double s0 = 0.0;
    if (E > floor) {
        double dE = density(E);
        double sE = std::sqrt(E - floor);
        double s1 = std::sqrt(2.0 * (E - floor));
        // symmetric interval [floor, 2E - floor]: the logarithmic term vanishes
        auto f = [&](double s) {
            double t = t_of(s);
            if (t == E) return 0.0;
            return (density(t) - dE) * 2.0 * s / (t - E);
        };
        Vec cuts{sE};
        for (double b : breakpoints)
            if (b > floor && b < 2.0 * E - floor) cuts.push_back(std::sqrt(b - floor));
        std::sort(cuts.begin(), cuts.end());
        core = integrate(f, 0.0, s1, rel_tol, cuts).value;
        s0 = s1;
    }
    auto panel_cuts = [&](double a, double b) {
        Vec cuts;
        for (double t : breakpoints) {
            if (t <= floor) continue;
            double s = std::sqrt(t - floor);
            if (s > a && s < b) cuts.push_back(s);
        }
        std::sort(cuts.begin(), cuts.end());
        return cuts;
    };
    auto g = [&](double s) {
        double t = t_of(s);
        return density(t) * 2.0 * s / (t - E);
    };
    double tail = 0.0;
    double lo = s0;
    double hi = s0 > 0.0 ? 2.0 * s0 : std::max(1.0, std::sqrt(std::abs(E - floor)));
    if (s0 == 0.0) {
        tail += integrate(g, 0.0, hi, rel_tol, panel_cuts(0.0, hi)).value;
        lo = hi;
        hi = 2.0 * lo;
    }
    double last = 0.0;
    int panels = 0;
    for (; panels < 48; ++panels) {
        last = integrate(g, lo, hi, rel_tol, panel_cuts(lo, hi)).value;
        tail += last;
        double scale = std::abs(core) + std::abs(tail);
        if (std::abs(last) <= 1e-13 * scale || (last == 0.0 && panels > 2)) break;
        lo = hi;
        hi *= 2.0;
    }
    double total = core + tail;
    if (!std::isfinite(total) || (panels == 48 && std::abs(last) > 1e-3 * std::abs(total)))
        fail(ErrorKind::numeric, "principal_value",
             "cutoff insufficient: last tail panel is " + std::to_string(std::abs(last) / std::abs(total)) +
                 " of the total");
    return total;
}

double theta_nelson(const ModelSpec& model, const KernelSpec& kernel, const Vec& P, const FermiOptions& opts)
{
    model.validate();
    kernel.validate(model);
    require_p(model, P, "theta_nelson");
    if (model.kind == ModelKind::friction)
        fail(ErrorKind::unsupported_model, "theta_nelson", "use gamma_theta_friction for the friction model");
    NelsonGeometry geo(model, kernel, P, opts.sphere_level);
    return principal_value([&](double t) { return geo.density(t); }, geo.floor, vacuum_energy(P), opts.rel_tol,
                           density_breakpoints(model, kernel, P));
}

GoldenRule gamma_theta_friction(const ModelSpec& model, const KernelSpec& kernel, const Vec& P,
                                const FermiOptions& opts)
{
    model.validate();
    kernel.validate(model);
    require_p(model, P, "gamma_theta_friction");
    if (model.kind != ModelKind::friction)
        fail(ErrorKind::unsupported_model, "gamma_theta_friction", "model is not friction");
    double E = vacuum_energy(P);
    GoldenRule out;
    if (E > 0.0)
        out.gamma = refined_gamma<FrictionGeometry>(
            [&](int level) { return FrictionGeometry(model, kernel, P, level, opts.rel_tol); }, E, opts,
            "gamma_theta_friction");
    FrictionGeometry geo(model, kernel, P, opts.sphere_level, opts.rel_tol);
    out.theta = principal_value([&](double t) { return geo.density(t); }, 0.0, E, opts.rel_tol,
                                density_breakpoints(model, kernel, P));
    return out;
}

Vec density_breakpoints(const ModelSpec& model, const KernelSpec& kernel, const Vec& P)
{
    Vec out;
    if (!kernel.radial()) return out;
    double p = norm(P);
    Vec radii;
    if (kernel.k_min > 0.0) radii.push_back(kernel.k_min);
    if (std::isfinite(kernel.k_max)) radii.push_back(kernel.k_max);
    if (model.kind == ModelKind::friction) {
        radii.push_back(0.0);
        for (double r : radii) {
            if (r > 0.0) out.push_back(r);
            if (std::isfinite(kernel.xi_max))
                for (double s : {std::abs(kernel.xi_max - p), kernel.xi_max + p}) out.push_back(r + 0.5 * s * s);
        }
    } else {
        for (double r : radii) {
            Vec k(model.d, 0.0);
            k[0] = r;
            double w = omega(model, k);
            out.push_back(0.5 * (p - r) * (p - r) + w);
            out.push_back(0.5 * (p + r) * (p + r) + w);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool theta_defined(const ModelSpec& model, const KernelSpec& kernel)
{
    bool envelope = kernel.form == KernelForm::gaussian ||
                    (kernel.form == KernelForm::power_law && std::isfinite(kernel.width)) ||
                    kernel.form == KernelForm::tabulated;
    if (envelope) return true;
    bool k_bounded = std::isfinite(kernel.k_max);
    if (model.kind == ModelKind::friction) return k_bounded && std::isfinite(kernel.xi_max);
    if (k_bounded) return true;
    // unbounded kernel: rho^2 ~ |k|^(2 mu), density ~ t^(mu + (d-2)/2)
    double mu = kernel.form == KernelForm::power_law ? kernel.mu : 0.0;
    return mu + 0.5 * (model.d - 2) < 0.0;
}

double richardson_zero(const Vec& eps, const Vec& values)
{
    require(eps.size() == values.size() && !eps.empty(), ErrorKind::input, "richardson", "size mismatch");
    Vec p = values;
    std::size_t n = p.size();
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i)
            p[i] = (eps[i + m] * p[i] - eps[i] * p[i + 1]) / (eps[i + m] - eps[i]);
    return p[0];
}

namespace {

struct Broadened {
    double re = 0.0;
    double im = 0.0;
};

Broadened nelson_broadened(const NelsonGeometry& geo, double E, double eps, bool want_re, double tol)
{
    int d = geo.model.d;
    bool above = E > geo.floor;
    auto part = [&](std::size_t i, bool real) {
        const Vec& u = geo.rule.directions[i];
        Vec cuts;
        if (above) {
            double rE = geo.root(u, E);
            double w = eps / std::max(geo.slope(geo.point(u, rE), u), 1e-300);
            for (double c : {-16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0})
                if (rE + c * w > 0.0) cuts.push_back(rE + c * w);
            cuts.push_back(2.0 * rE + 1.0);
        } else {
            cuts.push_back(1.0);
        }
        auto f = [&](double r) {
            Vec x = geo.point(u, r);
            double rho = kernel_eval(geo.kernel, geo.model, x);
            if (rho == 0.0) return 0.0;
            double a = geo.h(x) - E;
            double den = a * a + eps * eps;
            return rho * rho * std::pow(r, d - 1) * (real ? a : eps) / den;
        };
        double last = cuts.back();
        double v = integrate(f, 0.0, last, tol, cuts).value;
        v += integrate(f, last, std::numeric_limits<double>::infinity(), tol).value;
        return geo.rule.weights[i] * v;
    };
    std::size_t n = geo.rule.directions.size();
    Broadened b;
    b.im = two_pi_pow(d) * direction_sum(n, [&](std::size_t i) { return part(i, false); });
    b.re = want_re ? two_pi_pow(d) * direction_sum(n, [&](std::size_t i) { return part(i, true); }) : kNaN;
    return b;
}

Broadened friction_broadened(const FrictionGeometry& geo, double E, double eps, bool want_re, double tol)
{
    int q = geo.model.q, d = geo.model.d;
    std::size_t nu = geo.xs.directions.size();
    auto part = [&](std::size_t idx, bool real) {
        const Vec& v = geo.ks.directions[idx / nu];
        const Vec& u = geo.xs.directions[idx % nu];
        auto inner = [&](double kappa) {
            auto f = [&](double R) {
                double a = 0.5 * R * R + kappa - E;
                double r2 = geo.rho2(geo.point(v, kappa, u, R));
                if (r2 == 0.0) return 0.0;
                return std::pow(R, d - 1) * r2 * (real ? a : eps) / (a * a + eps * eps);
            };
            Vec cuts;
            double scale = 1.0;
            if (kappa < E) {
                double RE = std::sqrt(2.0 * (E - kappa));
                double w = eps / std::max(RE, std::sqrt(eps));
                for (double c : {-16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0})
                    if (RE + c * w > 0.0) cuts.push_back(RE + c * w);
                scale = 2.0 * RE + 1.0;
            } else {
                cuts.push_back(std::sqrt(eps));
            }
            if (std::isfinite(geo.kernel.xi_max)) cuts.push_back(geo.kernel.xi_max + norm(geo.P));
            cuts.push_back(scale);
            std::sort(cuts.begin(), cuts.end());
            double last = cuts.back();
            double val = integrate(f, 0.0, last, tol, cuts).value;
            if (!std::isfinite(geo.kernel.xi_max))
                val += integrate(f, last, std::numeric_limits<double>::infinity(), tol).value;
            return std::pow(kappa, q - 1) * val;
        };
        Vec kcuts;
        for (double c : {-16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0})
            if (E + c * eps > 0.0) kcuts.push_back(E + c * eps);
        double top = 2.0 * E + 1.0;
        if (std::isfinite(geo.kernel.k_max)) {
            kcuts.push_back(geo.kernel.k_max);
            top = std::max(top, geo.kernel.k_max);
        }
        kcuts.push_back(top);
        std::sort(kcuts.begin(), kcuts.end());
        double val = integrate(inner, 0.0, top, tol, kcuts).value;
        if (!std::isfinite(geo.kernel.k_max) || geo.kernel.k_max > top)
            val += integrate(inner, top, std::numeric_limits<double>::infinity(), tol).value;
        return geo.ks.weights[idx / nu] * geo.xs.weights[idx % nu] * val;
    };
    std::size_t n = geo.ks.directions.size() * nu;
    Broadened b;
    b.im = two_pi_pow(q + d) * direction_sum(n, [&](std::size_t i) { return part(i, false); });
    b.re = want_re ? two_pi_pow(q + d) * direction_sum(n, [&](std::size_t i) { return part(i, true); }) : kNaN;
    return b;
}

void check_residuals(const Vec& values, double limit, const char* what)
{
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 1; i < values.size(); ++i) {
        double prev = std::abs(values[i - 1] - limit);
        double cur = std::abs(values[i] - limit);
        if (cur >= prev && prev > 1e-13 * scale)
            fail(ErrorKind::numeric, "broadened_oracle",
                 std::string("extrapolation residuals of the ") + what + " part are not decreasing");
    }
}

}  // namespace

OracleResult broadened_oracle(const ModelSpec& model, const KernelSpec& kernel, const Vec& P, const Vec& eps_seq,
                              const FermiOptions& opts)
{
    model.validate();
    kernel.validate(model);
    require_p(model, P, "broadened_oracle");
    require(eps_seq.size() >= 2, ErrorKind::input, "broadened_oracle", "need at least two broadening values");
    for (std::size_t i = 0; i < eps_seq.size(); ++i) {
        require(eps_seq[i] > 0.0, ErrorKind::input, "broadened_oracle", "broadening values must be positive");
        if (i > 0)
            require(eps_seq[i] < eps_seq[i - 1], ErrorKind::input, "broadened_oracle",
                    "broadening values must be strictly decreasing");
    }
    bool want_re = theta_defined(model, kernel);
    double E = vacuum_energy(P);
    double tol = std::max(opts.rel_tol, 1e-9);
    OracleResult out;
    out.eps = eps_seq;
    for (double eps : eps_seq) {
        Broadened b;
        if (model.kind == ModelKind::friction)
            b = friction_broadened(FrictionGeometry(model, kernel, P, opts.sphere_level, tol), E, eps, want_re, tol);
        else
            b = nelson_broadened(NelsonGeometry(model, kernel, P, opts.sphere_level), E, eps, want_re, tol);
        out.re.push_back(b.re);
        out.im.push_back(b.im);
    }
    out.gamma = richardson_zero(out.eps, out.im);
    check_residuals(out.im, out.gamma, "imaginary");
    if (want_re) {
        out.theta = richardson_zero(out.eps, out.re);
        check_residuals(out.re, out.theta, "real");
    } else {
        out.theta = kNaN;
    }
    return out;
}

}  // namespace cherenkov
