#include "cherenkov/models.hpp"

#include <cmath>

#include "cherenkov/errors.hpp"

namespace cherenkov {

const char* to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::nelson_massive: return "nelson_massive";
    case ModelKind::polaron: return "polaron";
    case ModelKind::friction: return "friction";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& name)
{
    if (name == "nelson_massive" || name == "nelson") return ModelKind::nelson_massive;
    if (name == "polaron") return ModelKind::polaron;
    if (name == "friction") return ModelKind::friction;
    fail(ErrorKind::input, "models", "unknown model kind '" + name + "'");
}

ModelSpec ModelSpec::nelson(double m, int d, double g)
{
    ModelSpec s;
    s.kind = ModelKind::nelson_massive;
    s.m = m;
    s.d = d;
    s.g = g;
    s.validate();
    return s;
}

ModelSpec ModelSpec::polaron(int d, double g)
{
    ModelSpec s;
    s.kind = ModelKind::polaron;
    s.m = 0.0;
    s.d = d;
    s.g = g;
    s.validate();
    return s;
}

ModelSpec ModelSpec::friction(int d, int q, double g)
{
    ModelSpec s;
    s.kind = ModelKind::friction;
    s.m = 0.0;
    s.d = d;
    s.q = q;
    s.g = g;
    s.validate();
    return s;
}

void ModelSpec::validate() const
{
    require(d >= 1, ErrorKind::input, "models", "dimension d must be >= 1");
    require(std::isfinite(g), ErrorKind::input, "models", "coupling g must be finite");
    if (kind == ModelKind::nelson_massive)
        require(m > 0.0 && std::isfinite(m), ErrorKind::input, "models", "nelson_massive needs mass m > 0");
    if (kind == ModelKind::friction)
        require(q >= 1, ErrorKind::input, "models", "friction needs vibrational dimension q >= 1");
    else
        require(q == 0, ErrorKind::input, "models", "q is only meaningful for the friction model");
}

double norm(const Vec& v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const Vec& a, const Vec& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double omega(const ModelSpec& model, const Vec& k)
{
    if (static_cast<int>(k.size()) != model.omega_dim())
        fail(ErrorKind::input, "omega",
             "momentum has dimension " + std::to_string(k.size()) + ", expected " + std::to_string(model.omega_dim()));
    switch (model.kind) {
    case ModelKind::nelson_massive: return std::sqrt(model.m * model.m + dot(k, k));
    case ModelKind::polaron: return 1.0;
    case ModelKind::friction: return norm(k);
    }
    return 0.0;
}

Vec grad_omega(const ModelSpec& model, const Vec& k)
{
    double w = omega(model, k);
    Vec g(k.size(), 0.0);
    if (model.kind == ModelKind::polaron) return g;
    if (w == 0.0) return g;
    for (std::size_t i = 0; i < k.size(); ++i) g[i] = k[i] / w;
    return g;
}

double vacuum_energy(const Vec& P)
{
    return 0.5 * dot(P, P);
}

double symbol_n(const ModelSpec& model, const Vec& P, const std::vector<Vec>& ks)
{
    require(!ks.empty(), ErrorKind::input, "symbol_n", "n = 0; the vacuum energy is P^2/2");
    require(static_cast<int>(P.size()) == model.d, ErrorKind::input, "symbol_n", "P has the wrong dimension");
    Vec rest = P;
    double field = 0.0;
    if (model.kind == ModelKind::friction) {
        for (const Vec& x : ks) {
            require(static_cast<int>(x.size()) == model.q + model.d, ErrorKind::input, "symbol_n",
                    "boson coordinate (k, xi) has the wrong dimension");
            double kk = 0.0;
            for (int i = 0; i < model.q; ++i) kk += x[i] * x[i];
            field += std::sqrt(kk);
            for (int i = 0; i < model.d; ++i) rest[i] -= x[model.q + i];
        }
    } else {
        for (const Vec& k : ks) {
            field += omega(model, k);
            for (int i = 0; i < model.d; ++i) rest[i] -= k[i];
        }
    }
    return 0.5 * dot(rest, rest) + field;
}

const char* to_string(KernelForm form)
{
    switch (form) {
    case KernelForm::gaussian: return "gaussian";
    case KernelForm::power_law: return "power_law";
    case KernelForm::constant: return "constant";
    case KernelForm::tabulated: return "tabulated";
    }
    return "?";
}

KernelForm kernel_form_from_string(const std::string& name)
{
    if (name == "gaussian") return KernelForm::gaussian;
    if (name == "power_law") return KernelForm::power_law;
    if (name == "constant") return KernelForm::constant;
    if (name == "tabulated") return KernelForm::tabulated;
    fail(ErrorKind::input, "models", "unknown kernel form '" + name + "'");
}

void KernelSpec::validate(const ModelSpec& model) const
{
    require(std::isfinite(amplitude), ErrorKind::input, "kernel", "amplitude must be finite");
    require(k_min >= 0.0 && k_max > k_min, ErrorKind::input, "kernel", "support needs 0 <= k_min < k_max");
    require(xi_max > 0.0, ErrorKind::input, "kernel", "xi_max must be positive");
    switch (form) {
    case KernelForm::gaussian:
        require(width > 0.0 && std::isfinite(width), ErrorKind::input, "kernel", "gaussian width must be positive and finite");
        break;
    case KernelForm::power_law:
        require(width > 0.0, ErrorKind::input, "kernel", "power_law envelope width must be positive");
        if (model.kind == ModelKind::friction)
            require(mu > -0.5 * (model.q - 1), ErrorKind::input, "kernel",
                    "friction power_law needs mu > -(q-1)/2");
        else
            require(mu > -0.5 * model.d, ErrorKind::input, "kernel", "power_law needs mu > -d/2 for square integrability");
        break;
    case KernelForm::constant:
        break;
    case KernelForm::tabulated: {
        require(static_cast<int>(table.axes.size()) == model.boson_dim(), ErrorKind::input, "kernel",
                "table must have one axis per boson coordinate");
        std::size_t count = 1;
        for (const auto& axis : table.axes) {
            require(axis.size() >= 2, ErrorKind::input, "kernel", "table axes need at least two points");
            for (std::size_t i = 1; i < axis.size(); ++i)
                require(axis[i] > axis[i - 1], ErrorKind::input, "kernel", "table axes must be strictly increasing");
            count *= axis.size();
        }
        require(table.values.size() == count, ErrorKind::input, "kernel", "table value count does not match its axes");
        break;
    }
    }
}

namespace {

double interpolate(const KernelTable& table, const Vec& x)
{
    std::size_t dim = table.axes.size();
    std::vector<std::size_t> lo(dim);
    std::vector<double> frac(dim);
    for (std::size_t a = 0; a < dim; ++a) {
        const auto& axis = table.axes[a];
        if (x[a] < axis.front() || x[a] > axis.back())
            fail(ErrorKind::range, "kernel_eval", "point outside tabulation range on axis " + std::to_string(a));
        std::size_t i = 0;
        while (i + 2 < axis.size() && x[a] > axis[i + 1]) ++i;
        lo[a] = i;
        frac[a] = (x[a] - axis[i]) / (axis[i + 1] - axis[i]);
    }
    double value = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << dim); ++corner) {
        double weight = 1.0;
        std::size_t flat = 0;
        for (std::size_t a = 0; a < dim; ++a) {
            bool up = (corner >> a) & 1u;
            weight *= up ? frac[a] : 1.0 - frac[a];
            flat = flat * table.axes[a].size() + lo[a] + (up ? 1 : 0);
        }
        if (weight != 0.0) value += weight * table.values[flat];
    }
    return value;
}

}  // namespace

double kernel_eval(const KernelSpec& kernel, const ModelSpec& model, const Vec& point)
{
    if (static_cast<int>(point.size()) != model.boson_dim())
        fail(ErrorKind::input, "kernel_eval",
             "point has dimension " + std::to_string(point.size()) + ", expected " + std::to_string(model.boson_dim()));
    int nk = model.omega_dim();
    double k2 = 0.0;
    for (int i = 0; i < nk; ++i) k2 += point[i] * point[i];
    double kabs = std::sqrt(k2);
    if (kabs < kernel.k_min || kabs > kernel.k_max) return 0.0;
    if (model.kind == ModelKind::friction && std::isfinite(kernel.xi_max)) {
        double xi2 = 0.0;
        for (int i = nk; i < model.boson_dim(); ++i) xi2 += point[i] * point[i];
        if (std::sqrt(xi2) > kernel.xi_max) return 0.0;
    }
    double x2 = dot(point, point);
    switch (kernel.form) {
    case KernelForm::gaussian:
        return kernel.amplitude * std::exp(-0.5 * x2 / (kernel.width * kernel.width));
    case KernelForm::power_law: {
        double env = std::isfinite(kernel.width) ? std::exp(-0.5 * x2 / (kernel.width * kernel.width)) : 1.0;
        return kernel.amplitude * std::pow(kabs, kernel.mu) * env;
    }
    case KernelForm::constant:
        return kernel.amplitude;
    case KernelForm::tabulated:
        return kernel.amplitude * interpolate(kernel.table, point);
    }
    return 0.0;
}

}  // namespace cherenkov
