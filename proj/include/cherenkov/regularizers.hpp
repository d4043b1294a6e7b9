#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cherenkov/quadrature.hpp"

namespace cherenkov {

// Smooth odd mollifier: chi' = p * (plateau bump on [-a, a] with smoothstep shoulders out to +-1),
// p = 1 + min(delta, 1)/2 and a = (2 - p)/p so that chi(1) = 1.
class ChiDelta {
public:
    explicit ChiDelta(double delta);

    double delta() const { return m_delta; }
    double peak() const { return m_peak; }
    double plateau() const { return m_plateau; }

    double value(double s) const;
    double derivative(double s) const;
    double second_derivative(double s) const;
    // Bound on |chi''|, used for the smoothness check.
    double curvature_bound() const { return m_curv; }

private:
    double m_delta;
    double m_peak;
    double m_plateau;
    double m_curv;
};

double smoothstep(double x);
double smoothstep_derivative(double x);
// Integral of smoothstep over [0, x], x in [0, 1].
double smoothstep_integral(double x);

double chi(const ChiDelta& chi, double s);
double m_signed(const Vec& zs);
double m_tilde(const ChiDelta& chi, const Vec& zs);
double s_tilde(const ChiDelta& chi, int j, const Vec& zs);

// Sum of partial derivatives, by central differences along (1, ..., 1).
double grad_sum(const ChiDelta& chi, int j, const Vec& zs);
// Same quantity in closed form.
double grad_sum_exact(const ChiDelta& chi, int j, const Vec& zs);
// Second derivative of s_tilde along (1, ..., 1) in closed form.
double second_directional_exact(const ChiDelta& chi, int j, const Vec& zs);

struct PropertyCount {
    std::string name;
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    double worst = 0.0;  // largest violation amount (0 when none)
};

struct ChiReport {
    double delta = 0.0;
    std::vector<PropertyCount> properties;
    bool pass() const;
};

ChiReport chi_property_check(const ChiDelta& chi, std::uint64_t samples, std::uint64_t seed);

struct GradReport {
    double delta = 0.0;
    int j = 0;
    int ell = 0;
    std::uint64_t samples = 0;
    double lower = 0.0;
    double upper = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
    double max_fd_mismatch = 0.0;  // |finite difference - closed form| over samples with max|z| <= 10
    std::uint64_t violations = 0;
    bool pass() const { return violations == 0; }
};

GradReport grad_bound_check(const ChiDelta& chi, int j, int ell, std::uint64_t samples, std::uint64_t seed);

struct SmoothnessReport {
    double delta = 0.0;
    int j = 0;
    int ell = 0;
    std::uint64_t samples = 0;
    double bound = 0.0;
    double max_second = 0.0;
    std::uint64_t violations = 0;
    bool pass() const { return violations == 0; }
};

SmoothnessReport smoothness_check(const ChiDelta& chi, int j, int ell, std::uint64_t samples, std::uint64_t seed);

struct InsertionCase {
    double z = 0.0;
    Vec zs;
    double diff = 0.0;
    double bound = 0.0;
};

struct InsertionReport {
    double delta = 0.0;
    int j = 0;
    int ell_min = 0;
    int ell_max = 0;
    std::uint64_t samples = 0;  // per ell
    std::uint64_t violations = 0;
    double worst_ratio = 0.0;   // max |diff| / (2|z| + 1)
    InsertionCase worst;
    bool pass() const { return violations == 0; }
};

// zs has ell entries, drawn for each ell in [ell_min, ell_max]; z is inserted to make ell + 1.
InsertionReport insertion_bound_check(const ChiDelta& chi, int j, int ell_min, int ell_max, std::uint64_t samples,
                                      std::uint64_t seed);

}  // namespace cherenkov
