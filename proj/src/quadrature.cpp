#include "cherenkov/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cherenkov/errors.hpp"

namespace cherenkov {

Rule1d gauss_legendre(int n, double a, double b)
{
    require(n >= 1, ErrorKind::input, "gauss_legendre", "need at least one node");
    Rule1d rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    // Legendre P_n and its derivative at x by the three-term recurrence.
    auto legendre = [n](double x, double& dp) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        return p1;
    };
    if (n == 1) {
        rule.weights[0] = 2.0;
    } else {
        for (int i = 0; i < n / 2; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double dx = legendre(x, dp) / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            legendre(x, dp);
            double w = 2.0 / ((1.0 - x * x) * dp * dp);
            rule.nodes[i] = -x;
            rule.nodes[n - 1 - i] = x;
            rule.weights[i] = w;
            rule.weights[n - 1 - i] = w;
        }
        if (n % 2 == 1) {
            double dp = 0.0;
            legendre(0.0, dp);
            rule.weights[n / 2] = 2.0 / (dp * dp);
        }
    }
    double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

double sphere_area(int d)
{
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

namespace {

// Orthonormal frame whose last vector is the normalized axis.
std::vector<Vec> frame_for(const Vec& axis, int d)
{
    Vec e(d, 0.0);
    double norm = 0.0;
    for (double a : axis) norm += a * a;
    norm = std::sqrt(norm);
    if (static_cast<int>(axis.size()) != d || norm == 0.0) {
        e[d - 1] = 1.0;
    } else {
        for (int i = 0; i < d; ++i) e[i] = axis[i] / norm;
    }
    std::vector<Vec> basis;
    for (int trial = 0; trial < d && static_cast<int>(basis.size()) < d - 1; ++trial) {
        Vec v(d, 0.0);
        v[trial] = 1.0;
        auto project_out = [&](const Vec& u) {
            double dot = 0.0;
            for (int i = 0; i < d; ++i) dot += v[i] * u[i];
            for (int i = 0; i < d; ++i) v[i] -= dot * u[i];
        };
        project_out(e);
        for (const auto& b : basis) project_out(b);
        double n2 = 0.0;
        for (double x : v) n2 += x * x;
        if (n2 < 1e-8) continue;
        for (double& x : v) x /= std::sqrt(n2);
        basis.push_back(v);
    }
    basis.push_back(e);
    return basis;
}

}  // namespace

SphereRule sphere_rule(int d, int level, const Vec& axis)
{
    require(d >= 1 && d <= 3, ErrorKind::input, "sphere_rule", "dimension must be 1, 2 or 3");
    require(level >= 1, ErrorKind::input, "sphere_rule", "level must be positive");
    SphereRule rule;
    rule.dim = d;
    auto frame = frame_for(axis, d);
    if (d == 1) {
        rule.directions = {{1.0}, {-1.0}};
        rule.weights = {1.0, 1.0};
        return rule;
    }
    if (d == 2) {
        int n = 8 * level;
        for (int i = 0; i < n; ++i) {
            double phi = 2.0 * std::numbers::pi * (i + 0.5) / n;
            double c = std::cos(phi), s = std::sin(phi);
            rule.directions.push_back({c * frame[0][0] + s * frame[1][0], c * frame[0][1] + s * frame[1][1]});
            rule.weights.push_back(2.0 * std::numbers::pi / n);
        }
        return rule;
    }
    int nt = 8 * level;
    int np = 2 * nt;
    Rule1d gl = gauss_legendre(nt);
    for (int i = 0; i < nt; ++i) {
        double u = gl.nodes[i];
        double s = std::sqrt(std::max(0.0, 1.0 - u * u));
        for (int j = 0; j < np; ++j) {
            double phi = 2.0 * std::numbers::pi * (j + 0.5) / np;
            double a = s * std::cos(phi), b = s * std::sin(phi);
            Vec dir(3);
            for (int k = 0; k < 3; ++k) dir[k] = a * frame[0][k] + b * frame[1][k] + u * frame[2][k];
            rule.directions.push_back(dir);
            rule.weights.push_back(gl.weights[i] * 2.0 * std::numbers::pi / np);
        }
    }
    return rule;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     std::vector<double> breakpoints, unsigned max_depth)
{
    QuadResult out;
    if (!(b > a)) return out;
    rel_tol = std::max(rel_tol, 1e-12);
    std::vector<double> cuts{a};
    std::sort(breakpoints.begin(), breakpoints.end());
    // breakpoints closer together than this would create panels the error test never accepts
    double gap = 1e-10 * (std::abs(a) + (std::isfinite(b) ? std::abs(b) : 0.0) + 1.0);
    for (double c : breakpoints)
        if (c > cuts.back() + gap && (!std::isfinite(b) || c < b - gap)) cuts.push_back(c);
    cuts.push_back(b);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        double lo = cuts[i], hi = cuts[i + 1];
        if (hi - lo <= 0.0) continue;
        double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, lo, hi, max_depth, rel_tol, &err);
        out.value += v;
        out.error += std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
    }
    return out;
}

}  // namespace cherenkov
