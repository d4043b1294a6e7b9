#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "cherenkov/models.hpp"

namespace cherenkov {

struct Resonance {
    double E0 = 0.0;
    double theta = 0.0;
    double gamma = 0.0;
    double g = 0.0;
    std::complex<double> z;
};

Resonance resonance(double E0, double theta, double gamma, double g);

struct FermiOptions {
    int sphere_level = 2;     // base size of the spherical rule
    int max_level = 16;       // refinement cap for gamma
    double rel_tol = 1e-10;   // one-dimensional quadrature tolerance
};

// Normalized one-boson spectral density: rho(t) = (2 pi)^-dim * int |rho|^2 delta(h - t).
// gamma = pi * rho(E0) and theta = p.v. int rho(t) / (t - E0) dt.
double spectral_density(const ModelSpec& model, const KernelSpec& kernel, const Vec& P, double t,
                        const FermiOptions& opts = {});

// Minimum of the one-boson symbol at momentum P.
double one_boson_floor(const ModelSpec& model, const Vec& P);

double gamma_nelson(const ModelSpec& model, const KernelSpec& kernel, const Vec& P, const FermiOptions& opts = {});
double theta_nelson(const ModelSpec& model, const KernelSpec& kernel, const Vec& P, const FermiOptions& opts = {});

struct GoldenRule {
    double gamma = 0.0;
    double theta = 0.0;
};

GoldenRule gamma_theta_friction(const ModelSpec& model, const KernelSpec& kernel, const Vec& P,
                                const FermiOptions& opts = {});

// Principal value of int density(t)/(t - E) dt over [floor, inf); breakpoints are kinks of the density in t.
double principal_value(const std::function<double(double)>& density, double floor, double E, double rel_tol = 1e-10,
                       const Vec& breakpoints = {});

// Energies where the one-boson density has kinks because the level set meets the kernel support boundary.
Vec density_breakpoints(const ModelSpec& model, const KernelSpec& kernel, const Vec& P);

// Whether p.v. int rho(t)/(t - E0) dt is finite for this model/kernel pair.
bool theta_defined(const ModelSpec& model, const KernelSpec& kernel);

struct OracleResult {
    Vec eps;
    Vec re;   // real part for each eps (NaN if theta is not defined)
    Vec im;
    double gamma = 0.0;
    double theta = 0.0;  // NaN if theta is not defined
};

OracleResult broadened_oracle(const ModelSpec& model, const KernelSpec& kernel, const Vec& P,
                              const Vec& eps_seq = {0.2, 0.1, 0.05}, const FermiOptions& opts = {});

// Polynomial extrapolation to eps = 0 through all points (Neville).
double richardson_zero(const Vec& eps, const Vec& values);

}  // namespace cherenkov
