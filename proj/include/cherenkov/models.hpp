#pragma once

#include <limits>
#include <string>
#include <vector>

#include "cherenkov/quadrature.hpp"

namespace cherenkov {

enum class ModelKind { nelson_massive, polaron, friction };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct ModelSpec {
    ModelKind kind = ModelKind::nelson_massive;
    double m = 1.0;  // boson mass, nelson_massive only
    int d = 3;       // particle dimension
    int q = 0;       // vibrational dimension, friction only
    double g = 0.0;  // coupling

    static ModelSpec nelson(double m, int d, double g = 0.0);
    static ModelSpec polaron(int d, double g = 0.0);
    static ModelSpec friction(int d, int q, double g = 0.0);

    void validate() const;
    // Coordinates of one boson: d for nelson/polaron, q + d for friction (k first, then xi).
    int boson_dim() const { return kind == ModelKind::friction ? q + d : d; }
    // Coordinates of the dispersion argument: d, or q for friction.
    int omega_dim() const { return kind == ModelKind::friction ? q : d; }
};

double omega(const ModelSpec& model, const Vec& k);
Vec grad_omega(const ModelSpec& model, const Vec& k);

// Energy of the n-boson configuration ks at total momentum P (n >= 1).
double symbol_n(const ModelSpec& model, const Vec& P, const std::vector<Vec>& ks);
double vacuum_energy(const Vec& P);

enum class KernelForm { gaussian, power_law, constant, tabulated };

const char* to_string(KernelForm form);
KernelForm kernel_form_from_string(const std::string& name);

// Rectangular grid with values in row-major order (last axis fastest).
struct KernelTable {
    std::vector<std::vector<double>> axes;
    std::vector<double> values;
};

struct KernelSpec {
    KernelForm form = KernelForm::gaussian;
    double amplitude = 1.0;
    double width = 1.0;  // gaussian width; for power_law the envelope width, infinity means no envelope
    double mu = 0.0;     // power_law infrared exponent on |k|
    // Optional support restrictions: |k| in [k_min, k_max] and, for friction, |xi| <= xi_max.
    double k_min = 0.0;
    double k_max = std::numeric_limits<double>::infinity();
    double xi_max = std::numeric_limits<double>::infinity();
    KernelTable table;

    void validate(const ModelSpec& model) const;
    bool radial() const { return form != KernelForm::tabulated; }
};

// rho at one boson coordinate (length boson_dim()).
double kernel_eval(const KernelSpec& kernel, const ModelSpec& model, const Vec& point);

double norm(const Vec& v);
double dot(const Vec& a, const Vec& b);

}  // namespace cherenkov
