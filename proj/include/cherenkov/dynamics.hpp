#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cherenkov/fermi.hpp"
#include "cherenkov/fock.hpp"

namespace cherenkov {

// Smooth bump: 1 on [center - margin, center + margin], 0 outside [lo, hi].
struct FilterSpec {
    double center = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double margin = 0.0;
    double operator()(double energy) const;
};

FilterSpec filter_spec(double center, double lo, double hi, double margin);

struct DecayCurve {
    Vec t_grid;
    CVec amplitude;
    CVec reference;
    double max_abs_error = 0.0;
    double fitted_gamma = 0.0;
    double fitted_E = 0.0;
    double spectral_weight = 0.0;  // sum of |<Omega, v_j>|^2 (1 for the dense path)
    std::string method;            // "dense" or "chebyshev"
    int chebyshev_order = 0;
};

struct EvolveOptions {
    std::size_t dense_limit = 5000;
    int extra_order = 64;  // Chebyshev order beyond a * t_max
};

// <Omega, exp(-itH) h(H) Omega> with Omega the basis vacuum (index 0).
DecayCurve evolve_survival(const SparseOperator& H, const Vec& t_grid, const std::optional<FilterSpec>& filter = {},
                           const EvolveOptions& opts = {});

struct DecayFit {
    double gamma = 0.0;  // decay rate of |a| (already includes g^2)
    double E = 0.0;
};

DecayFit fit_decay(const DecayCurve& curve, double t_lo, double t_hi);

struct ResonanceComparison {
    double max_abs_error = 0.0;
    double g = 0.0;
    double C = 0.0;
    double bound = 0.0;          // C g^2
    double log_refined = 0.0;    // max error / (g^2 |log g|), reported only
    bool within = false;
};

// Fills curve.reference and curve.max_abs_error.
ResonanceComparison compare_to_resonance(DecayCurve& curve, const Resonance& res, double C = 10.0);

// 2 pi over the mean spacing of distinct energies within `band` of `center`; infinity if fewer than two.
double recurrence_time(const Vec& energies, double center, double band = 0.1);

Vec linspace(double a, double b, std::size_t n);

}  // namespace cherenkov
