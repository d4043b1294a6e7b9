#include "cherenkov/regularizers.hpp"

#include <algorithm>
#include <cmath>

#include "cherenkov/errors.hpp"
#include "cherenkov/parallel.hpp"
#include "cherenkov/rng.hpp"

namespace cherenkov {

double smoothstep(double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return 1.0 / (1.0 + std::exp(1.0 / x - 1.0 / (1.0 - x)));
}

double smoothstep_derivative(double x)
{
    if (x <= 0.0 || x >= 1.0) return 0.0;
    double s = smoothstep(x);
    return s * (1.0 - s) * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x)));
}

double smoothstep_integral(double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 0.5;
    if (x > 0.5) return x - 0.5 + smoothstep_integral(1.0 - x);
    static const Rule1d unit = gauss_legendre(48, 0.0, 1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < unit.nodes.size(); ++i) sum += unit.weights[i] * smoothstep(x * unit.nodes[i]);
    return x * sum;
}

ChiDelta::ChiDelta(double delta) : m_delta(delta)
{
    require(delta > 0.0 && std::isfinite(delta), ErrorKind::input, "chi", "delta must be positive");
    m_peak = 1.0 + 0.5 * std::min(delta, 1.0);
    m_plateau = (2.0 - m_peak) / m_peak;
    double smax = 0.0;
    for (int i = 1; i < 20000; ++i) smax = std::max(smax, smoothstep_derivative(i / 20000.0));
    m_curv = 1.001 * m_peak * smax / (1.0 - m_plateau);
}

double ChiDelta::value(double s) const
{
    double x = std::abs(s);
    double v;
    if (x >= 1.0)
        v = 1.0;
    else if (x <= m_plateau)
        v = m_peak * x;
    else {
        double w = 1.0 - m_plateau;
        v = m_peak * m_plateau + m_peak * w * (0.5 - smoothstep_integral((1.0 - x) / w));
    }
    return s < 0.0 ? -v : v;
}

double ChiDelta::derivative(double s) const
{
    double x = std::abs(s);
    if (x >= 1.0) return 0.0;
    if (x <= m_plateau) return m_peak;
    return m_peak * (1.0 - smoothstep((x - m_plateau) / (1.0 - m_plateau)));
}

double ChiDelta::second_derivative(double s) const
{
    double x = std::abs(s);
    if (x >= 1.0 || x <= m_plateau) return 0.0;
    double w = 1.0 - m_plateau;
    double v = -m_peak * smoothstep_derivative((x - m_plateau) / w) / w;
    return s < 0.0 ? -v : v;
}

double chi(const ChiDelta& c, double s)
{
    return c.value(s);
}

double m_signed(const Vec& zs)
{
    require(!zs.empty(), ErrorKind::input, "m_signed", "empty coordinate list");
    auto [lo, hi] = std::minmax_element(zs.begin(), zs.end());
    double mx = *hi, mn = *lo;
    if (mx + mn > 0.0) return mx;
    if (mx + mn < 0.0) return mn;
    return 0.0;
}

namespace {

double pair_term(const ChiDelta& c, double mx, double mn)
{
    double a = mx + mn, b = mx - mn;
    return 0.5 * a + 0.5 * b * c.value(a / (1.0 + b));
}

double pair_slope(const ChiDelta& c, double mx, double mn)
{
    double a = mx + mn, b = mx - mn;
    return 1.0 + (b / (1.0 + b)) * c.derivative(a / (1.0 + b));
}

double pair_curvature(const ChiDelta& c, double mx, double mn)
{
    double a = mx + mn, b = mx - mn;
    return 2.0 * b / ((1.0 + b) * (1.0 + b)) * c.second_derivative(a / (1.0 + b));
}

template <class Term>
double order_statistic_sum(int j, const Vec& zs, Term&& term)
{
    Vec s = zs;
    std::sort(s.begin(), s.end());
    int ell = static_cast<int>(s.size());
    double sum = 0.0;
    for (int l = 1; l <= j; ++l) {
        double mx = s[ell - (j + 1 - l)];  // (j+1-l)-th largest
        double mn = s[l - 1];              // l-th smallest
        sum += term(mx, mn);
    }
    return sum;
}

}  // namespace

double m_tilde(const ChiDelta& c, const Vec& zs)
{
    require(!zs.empty(), ErrorKind::input, "m_tilde", "empty coordinate list");
    auto [lo, hi] = std::minmax_element(zs.begin(), zs.end());
    return pair_term(c, *hi, *lo);
}

double s_tilde(const ChiDelta& c, int j, const Vec& zs)
{
    require(j >= 1, ErrorKind::input, "s_tilde", "j must be >= 1");
    require(!zs.empty(), ErrorKind::input, "s_tilde", "empty coordinate list");
    if (j >= static_cast<int>(zs.size())) {
        double sum = 0.0;
        for (double z : zs) sum += z;
        return sum;
    }
    return order_statistic_sum(j, zs, [&](double mx, double mn) { return pair_term(c, mx, mn); });
}

double grad_sum_exact(const ChiDelta& c, int j, const Vec& zs)
{
    require(j >= 1 && !zs.empty(), ErrorKind::input, "grad_sum", "need j >= 1 and nonempty zs");
    if (j >= static_cast<int>(zs.size())) return static_cast<double>(zs.size());
    return order_statistic_sum(j, zs, [&](double mx, double mn) { return pair_slope(c, mx, mn); });
}

double second_directional_exact(const ChiDelta& c, int j, const Vec& zs)
{
    require(j >= 1 && !zs.empty(), ErrorKind::input, "second_directional", "need j >= 1 and nonempty zs");
    if (j >= static_cast<int>(zs.size())) return 0.0;
    return order_statistic_sum(j, zs, [&](double mx, double mn) { return pair_curvature(c, mx, mn); });
}

namespace {

Vec separate_ties(const Vec& zs)
{
    std::vector<std::size_t> idx(zs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return zs[a] < zs[b]; });
    Vec out = zs;
    for (std::size_t r = 1; r < idx.size(); ++r) {
        double prev = out[idx[r - 1]];
        if (out[idx[r]] <= prev + 1e-12 * std::max(1.0, std::abs(prev))) out[idx[r]] = prev + 1e-12 * std::max(1.0, std::abs(prev));
    }
    return out;
}

Vec shifted(const Vec& zs, double t)
{
    Vec out = zs;
    for (double& z : out) z += t;
    return out;
}

double max_abs(const Vec& zs)
{
    double m = 0.0;
    for (double z : zs) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace

double grad_sum(const ChiDelta& c, int j, const Vec& zs)
{
    require(j >= 1 && !zs.empty(), ErrorKind::input, "grad_sum", "need j >= 1 and nonempty zs");
    if (j >= static_cast<int>(zs.size())) return static_cast<double>(zs.size());
    Vec z = separate_ties(zs);
    double h = 1e-6 * (1.0 + max_abs(z));
    return (s_tilde(c, j, shifted(z, h)) - s_tilde(c, j, shifted(z, -h))) / (2.0 * h);
}

bool ChiReport::pass() const
{
    for (const auto& p : properties)
        if (p.violations != 0) return false;
    return true;
}

namespace {

void note(PropertyCount& p, double excess)
{
    ++p.samples;
    if (excess > 0.0) {
        ++p.violations;
        p.worst = std::max(p.worst, excess);
    }
}

// Per-sample results are written to owned slots and reduced serially, so reports do not
// depend on the worker count.
template <class R, class F>
std::vector<R> sample_map(std::uint64_t n, F&& f)
{
    std::vector<R> out(n);
    parallel_for(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = f(i);
    });
    return out;
}

double draw_heavy(CounterRng& rng)
{
    double u = rng.uniform();
    if (u < 0.5) return rng.uniform(-10.0, 10.0);
    if (u < 0.8) return rng.cauchy();
    return 100.0 * rng.cauchy();
}

Vec draw_coordinates(CounterRng& rng, int ell)
{
    Vec zs(ell);
    for (double& z : zs) z = draw_heavy(rng);
    if (ell >= 2 && rng.uniform() < 0.35) {
        // push the configuration onto or next to the tie set max + min = 0, or make exact duplicates
        auto [lo, hi] = std::minmax_element(zs.begin(), zs.end());
        double jitter = std::ldexp(rng.uniform(-1.0, 1.0), -static_cast<int>(rng.below(50)));
        switch (rng.below(3)) {
        case 0: *lo = -*hi + jitter; break;
        case 1: zs[rng.below(ell)] = *hi; break;
        default: zs[rng.below(ell)] = -*lo + jitter; break;
        }
    }
    return zs;
}

}  // namespace

ChiReport chi_property_check(const ChiDelta& c, std::uint64_t samples, std::uint64_t seed)
{
    require(samples >= 1, ErrorKind::input, "chi_property_check", "need at least one sample");
    struct Row {
        double odd, sat, der, below, above;
    };
    CounterRng base(seed, 0x4348);
    double bound = 1.0 + c.delta();
    auto rows = sample_map<Row>(samples, [&](std::size_t i) {
        CounterRng rng = base.split(i);
        Row r{};
        double s = rng.uniform(-1.5, 1.5);
        r.odd = std::abs(c.value(s) + c.value(-s)) - 1e-15;
        double far = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (1.0 + std::abs(rng.cauchy()));
        r.sat = std::abs(c.value(far) - (far < 0.0 ? -1.0 : 1.0));
        double h = 1e-7;
        double fd = (c.value(s + h) - c.value(s - h)) / (2.0 * h);
        double der = c.derivative(s);
        r.der = std::max({-der, der - bound, -fd - 1e-6, fd - bound - 1e-6});
        double t = rng.uniform(0.0, 1.0);
        r.below = c.value(-t) - (-t) - 1e-15;
        r.above = t - c.value(t) - 1e-15;
        return r;
    });
    ChiReport rep;
    rep.delta = c.delta();
    PropertyCount odd{"odd"}, sat{"saturation"}, der{"derivative_range"}, below{"below_identity_on_negative"},
        above{"above_identity_on_positive"};
    for (const Row& r : rows) {
        note(odd, r.odd);
        note(sat, r.sat);
        note(der, r.der);
        note(below, r.below);
        note(above, r.above);
    }
    rep.properties = {odd, sat, der, below, above};
    return rep;
}

GradReport grad_bound_check(const ChiDelta& c, int j, int ell, std::uint64_t samples, std::uint64_t seed)
{
    require(j >= 1 && ell >= 1 && samples >= 1, ErrorKind::input, "grad_bound_check", "need j, ell, samples >= 1");
    GradReport rep;
    rep.delta = c.delta();
    rep.j = j;
    rep.ell = ell;
    rep.samples = samples;
    rep.lower = 1.0 - 1e-4;
    rep.upper = (2.0 + c.delta()) * std::min(j, ell) + 1e-4;
    CounterRng base(seed, 0x4752 + 64 * j + ell);
    struct Row {
        double fd, mismatch;
    };
    auto rows = sample_map<Row>(samples, [&](std::size_t i) {
        CounterRng rng = base.split(i);
        Vec zs = draw_coordinates(rng, ell);
        double fd = grad_sum(c, j, zs);
        // the step grows with max|z|, so the comparison is only meaningful at moderate scale
        double mismatch = 0.0;
        if (max_abs(zs) <= 10.0) mismatch = std::abs(fd - grad_sum_exact(c, j, separate_ties(zs))) / (1.0 + std::abs(fd));
        return Row{fd, mismatch};
    });
    rep.min_value = INFINITY;
    rep.max_value = -INFINITY;
    for (const Row& r : rows) {
        rep.min_value = std::min(rep.min_value, r.fd);
        rep.max_value = std::max(rep.max_value, r.fd);
        rep.max_fd_mismatch = std::max(rep.max_fd_mismatch, r.mismatch);
        if (!(r.fd >= rep.lower && r.fd <= rep.upper)) ++rep.violations;
    }
    return rep;
}

SmoothnessReport smoothness_check(const ChiDelta& c, int j, int ell, std::uint64_t samples, std::uint64_t seed)
{
    require(j >= 1 && ell >= 1 && samples >= 1, ErrorKind::input, "smoothness_check", "need j, ell, samples >= 1");
    SmoothnessReport rep;
    rep.delta = c.delta();
    rep.j = j;
    rep.ell = ell;
    rep.samples = samples;
    // each pair term contributes at most 2 b/(1+b)^2 |chi''| <= |chi''|/2
    rep.bound = 0.5 * std::min(j, ell) * c.curvature_bound();
    CounterRng base(seed, 0x534d + 64 * j + ell);
    auto rows = sample_map<double>(samples, [&](std::size_t i) {
        CounterRng rng = base.split(i);
        Vec zs(ell);
        for (double& z : zs) z = rng.uniform(-3.0, 3.0);
        double h = 1e-3;
        double f0 = s_tilde(c, j, zs);
        return (s_tilde(c, j, shifted(zs, h)) - 2.0 * f0 + s_tilde(c, j, shifted(zs, -h))) / (h * h);
    });
    for (double v : rows) {
        rep.max_second = std::max(rep.max_second, std::abs(v));
        if (std::abs(v) > 1.05 * rep.bound + 1e-5) ++rep.violations;
    }
    return rep;
}

InsertionReport insertion_bound_check(const ChiDelta& c, int j, int ell_min, int ell_max, std::uint64_t samples,
                                      std::uint64_t seed)
{
    require(j >= 1, ErrorKind::input, "insertion_bound_check", "j must be >= 1");
    require(ell_min >= 1 && ell_max >= ell_min, ErrorKind::input, "insertion_bound_check", "need 1 <= ell_min <= ell_max");
    require(samples >= 1, ErrorKind::input, "insertion_bound_check", "need at least one sample");
    InsertionReport rep;
    rep.delta = c.delta();
    rep.j = j;
    rep.ell_min = ell_min;
    rep.ell_max = ell_max;
    rep.samples = samples;
    for (int ell = ell_min; ell <= ell_max; ++ell) {
        CounterRng base(seed, 0x494e + 64 * j + ell);
        auto rows = sample_map<InsertionCase>(samples, [&](std::size_t i) {
            CounterRng rng = base.split(i);
            InsertionCase ic;
            ic.zs = draw_coordinates(rng, ell);
            double u = rng.uniform();
            if (u < 0.6)
                ic.z = draw_heavy(rng);
            else if (u < 0.7)
                ic.z = 0.0;
            else {
                // insert next to an existing extreme or its mirror image
                auto [lo, hi] = std::minmax_element(ic.zs.begin(), ic.zs.end());
                double pick[4] = {*hi, *lo, -*hi, -*lo};
                ic.z = pick[rng.below(4)] + std::ldexp(rng.uniform(-1.0, 1.0), -static_cast<int>(rng.below(50)));
            }
            Vec with = ic.zs;
            with.push_back(ic.z);
            ic.diff = s_tilde(c, j, with) - s_tilde(c, j, ic.zs);
            ic.bound = 2.0 * std::abs(ic.z) + 1.0;
            return ic;
        });
        for (const InsertionCase& ic : rows) {
            double ratio = std::abs(ic.diff) / ic.bound;
            if (std::abs(ic.diff) > ic.bound + 1e-12 * (1.0 + max_abs(ic.zs))) ++rep.violations;
            if (ratio > rep.worst_ratio) {
                rep.worst_ratio = ratio;
                rep.worst = ic;
            }
        }
    }
    return rep;
}

}  // namespace cherenkov
