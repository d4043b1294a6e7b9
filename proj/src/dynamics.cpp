#include "cherenkov/dynamics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "cherenkov/errors.hpp"
#include "cherenkov/parallel.hpp"
#include "cherenkov/regularizers.hpp"

namespace cherenkov {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double FilterSpec::operator()(double e) const
{
    if (e <= lo || e >= hi) return 0.0;
    if (e < center - margin) return smoothstep((e - lo) / (center - margin - lo));
    if (e > center + margin) return smoothstep((hi - e) / (hi - center - margin));
    return 1.0;
}

FilterSpec filter_spec(double center, double lo, double hi, double margin)
{
    require(lo < center && center < hi, ErrorKind::input, "filter_spec", "center must lie inside the interval");
    require(margin > 0.0, ErrorKind::input, "filter_spec", "margin must be positive");
    require(margin < 0.5 * (hi - lo) && center - margin > lo && center + margin < hi, ErrorKind::input, "filter_spec",
            "plateau [center - margin, center + margin] must fit strictly inside the interval");
    return FilterSpec{center, lo, hi, margin};
}

Vec linspace(double a, double b, std::size_t n)
{
    Vec t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1);
    return t;
}

namespace {

CVec spectral_sum(const Vec& lambda, const Vec& weight, const Vec& t_grid)
{
    CVec amp(t_grid.size());
    parallel_for(t_grid.size(), [&](std::size_t b, std::size_t e) {
        Vec re(lambda.size()), im(lambda.size());
        for (std::size_t i = b; i < e; ++i) {
            for (std::size_t j = 0; j < lambda.size(); ++j) {
                double ph = -t_grid[i] * lambda[j];
                re[j] = weight[j] * std::cos(ph);
                im[j] = weight[j] * std::sin(ph);
            }
            amp[i] = cplx(pairwise_sum(re), pairwise_sum(im));
        }
    }, 4);
    return amp;
}

void dense_spectrum(const SparseOperator& H, Vec& lambda, Vec& weight)
{
    std::size_t n = H.dim;
    if (H.is_real()) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t p = H.row_ptr[r]; p < H.row_ptr[r + 1]; ++p) A(r, H.cols[p]) = H.values[p].real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        if (es.info() != Eigen::Success) fail(ErrorKind::numeric, "evolve_survival", "eigendecomposition failed");
        lambda.resize(n);
        weight.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            lambda[j] = es.eigenvalues()(j);
            weight[j] = es.eigenvectors()(0, j) * es.eigenvectors()(0, j);
        }
    } else {
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t p = H.row_ptr[r]; p < H.row_ptr[r + 1]; ++p) A(r, H.cols[p]) = H.values[p];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
        if (es.info() != Eigen::Success) fail(ErrorKind::numeric, "evolve_survival", "eigendecomposition failed");
        lambda.resize(n);
        weight.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            lambda[j] = es.eigenvalues()(j);
            weight[j] = std::norm(es.eigenvectors()(0, j));
        }
    }
}

// Chebyshev moments mu_k = <Omega, T_k(Ht) Omega> of Ht = (H - b)/a, then the discrete measure on the
// K Chebyshev-Gauss nodes that reproduces mu_0..mu_{K-1}.
void chebyshev_spectrum(const SparseOperator& H, double t_max, int extra, Vec& lambda, Vec& weight, int& order)
{
    if (!H.is_real()) fail(ErrorKind::input, "evolve_survival", "Chebyshev path expects a real symmetric operator");
    std::size_t n = H.dim;
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t r = 0; r < n; ++r) {
        double d = 0.0, off = 0.0;
        for (std::size_t p = H.row_ptr[r]; p < H.row_ptr[r + 1]; ++p) {
            if (H.cols[p] == r)
                d = H.values[p].real();
            else
                off += std::abs(H.values[p].real());
        }
        lo = std::min(lo, d - off);
        hi = std::max(hi, d + off);
    }
    double a = 0.5 * (hi - lo) * 1.01;
    double b = 0.5 * (hi + lo);
    int K = static_cast<int>(std::ceil(a * t_max)) + extra;
    K += K % 2;
    order = K;
    Vec mu(K, 0.0);
    Vec prev(n, 0.0), cur(n, 0.0), tmp;
    prev[0] = 1.0;
    auto apply_scaled = [&](const Vec& x, Vec& y) {
        H.apply_real(x, y);
        for (std::size_t i = 0; i < n; ++i) y[i] = (y[i] - b * x[i]) / a;
    };
    apply_scaled(prev, cur);
    mu[0] = 1.0;
    mu[1] = cur[0];
    for (int k = 1; k < K / 2; ++k) {
        mu[2 * k] = 2.0 * dot(cur, cur) - mu[0];
        apply_scaled(cur, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = 2.0 * tmp[i] - prev[i];
        mu[2 * k + 1] = 2.0 * dot(tmp, cur) - mu[1];
        std::swap(prev, cur);
        std::swap(cur, tmp);
    }
    for (double m : mu)
        if (!(std::abs(m) <= 1.0 + 1e-8))
            fail(ErrorKind::numeric, "evolve_survival", "Chebyshev moments left [-1, 1]; spectral bounds are wrong");
    lambda.resize(K);
    weight.resize(K);
    parallel_for(K, [&](std::size_t s, std::size_t e) {
        Vec terms(K);
        for (std::size_t j = s; j < e; ++j) {
            double theta = kPi * (j + 0.5) / K;
            terms[0] = mu[0];
            for (int k = 1; k < K; ++k) terms[k] = 2.0 * mu[k] * std::cos(k * theta);
            weight[j] = pairwise_sum(terms) / K;
            lambda[j] = a * std::cos(theta) + b;
        }
    }, 16);
}

}  // namespace

DecayCurve evolve_survival(const SparseOperator& H, const Vec& t_grid, const std::optional<FilterSpec>& filter,
                           const EvolveOptions& opts)
{
    require(H.dim >= 1, ErrorKind::input, "evolve_survival", "empty operator");
    require(!t_grid.empty(), ErrorKind::input, "evolve_survival", "empty time grid");
    if (!H.hermitian) fail(ErrorKind::input, "evolve_survival", "operator '" + H.label + "' is not flagged hermitian");
    double defect = hermitian_defect(H);
    if (!(defect < 1e-12))
        fail(ErrorKind::input, "evolve_survival", "operator is not hermitian (defect " + std::to_string(defect) + ")");
    DecayCurve curve;
    curve.t_grid = t_grid;
    Vec lambda, weight;
    if (H.dim <= opts.dense_limit) {
        dense_spectrum(H, lambda, weight);
        curve.method = "dense";
    } else {
        double t_max = 0.0;
        for (double t : t_grid) t_max = std::max(t_max, std::abs(t));
        int extra = opts.extra_order;
        if (filter) {
            // resolve the filter shoulders as well as the time dependence
            double width = std::min(filter->center - filter->margin - filter->lo, filter->hi - filter->center - filter->margin);
            t_max = std::max(t_max, 40.0 / width);
        }
        chebyshev_spectrum(H, t_max, extra, lambda, weight, curve.chebyshev_order);
        curve.method = "chebyshev";
    }
    curve.spectral_weight = pairwise_sum(weight);
    if (filter)
        for (std::size_t j = 0; j < lambda.size(); ++j) weight[j] *= (*filter)(lambda[j]);
    curve.amplitude = spectral_sum(lambda, weight, t_grid);
    return curve;
}

DecayFit fit_decay(const DecayCurve& curve, double t_lo, double t_hi)
{
    require(t_hi > t_lo, ErrorKind::input, "fit_decay", "window needs t_hi > t_lo");
    Vec ts, la, ph;
    double unwrap = 0.0, last = 0.0;
    bool started = false;
    for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
        double t = curve.t_grid[i];
        if (t < t_lo || t > t_hi) continue;
        double mag = std::abs(curve.amplitude[i]);
        if (!(mag >= 1e-10))
            fail(ErrorKind::underflow, "fit_decay", "amplitude " + std::to_string(mag) + " at t = " + std::to_string(t));
        double p = std::arg(curve.amplitude[i]);
        if (started) {
            double step = p - last;
            while (step > kPi) step -= 2.0 * kPi;
            while (step < -kPi) step += 2.0 * kPi;
            unwrap += step;
        } else {
            unwrap = p;
            started = true;
        }
        last = p;
        ts.push_back(t);
        la.push_back(std::log(mag));
        ph.push_back(unwrap);
    }
    require(ts.size() >= 2, ErrorKind::input, "fit_decay", "fewer than two samples in the window");
    auto slope = [&](const Vec& y) {
        double n = static_cast<double>(ts.size());
        double st = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            st += ts[i];
            sy += y[i];
        }
        double mt = st / n, my = sy / n, num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            num += (ts[i] - mt) * (y[i] - my);
            den += (ts[i] - mt) * (ts[i] - mt);
        }
        return num / den;
    };
    DecayFit fit;
    fit.gamma = -slope(la);
    fit.E = -slope(ph);
    return fit;
}

ResonanceComparison compare_to_resonance(DecayCurve& curve, const Resonance& res, double C)
{
    ResonanceComparison out;
    out.g = res.g;
    out.C = C;
    out.bound = C * res.g * res.g;
    curve.reference.resize(curve.t_grid.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
        curve.reference[i] = std::exp(cplx(0.0, -curve.t_grid[i]) * res.z);
        worst = std::max(worst, std::abs(curve.amplitude[i] - curve.reference[i]));
    }
    curve.max_abs_error = worst;
    out.max_abs_error = worst;
    double lg = std::abs(std::log(std::abs(res.g)));
    out.log_refined = res.g != 0.0 && lg > 0.0 ? worst / (res.g * res.g * lg) : 0.0;
    out.within = worst <= out.bound + 1e-12;
    return out;
}

double recurrence_time(const Vec& energies, double center, double band)
{
    Vec near;
    for (double e : energies)
        if (std::abs(e - center) <= band) near.push_back(e);
    std::sort(near.begin(), near.end());
    Vec distinct;
    for (double e : near)
        if (distinct.empty() || e - distinct.back() > 1e-12 * (1.0 + std::abs(e))) distinct.push_back(e);
    if (distinct.size() < 2) return INFINITY;
    double spacing = (distinct.back() - distinct.front()) / (distinct.size() - 1);
    return 2.0 * kPi / spacing;
}

}  // namespace cherenkov
