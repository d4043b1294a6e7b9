#pragma once

#include <string>
#include <vector>

#include "cherenkov/models.hpp"

namespace cherenkov {

// c(n,P) for the massive Nelson model. Negative n is rejected; n may be real for the derivative lemma.
double solve_c(const ModelSpec& model, int n, const Vec& P);
double solve_c_real(double m, double r, double p_abs);

double threshold(const ModelSpec& model, int n, const Vec& P);
double threshold_abs(const ModelSpec& model, int n, double p_abs);
Vec k_star(const ModelSpec& model, int n, const Vec& P);

double p_star(const ModelSpec& model);
double p_n(const ModelSpec& model, int n);
int n_p(const ModelSpec& model, const Vec& P);
double alpha(const ModelSpec& model, int n, const Vec& P);
double alpha_abs(const ModelSpec& model, int n, double p_abs);

struct ThresholdRow {
    int n = 0;
    double c = 0.0;
    double E = 0.0;
    Vec k_star;
};

struct ThresholdTable {
    Vec P;
    std::vector<ThresholdRow> rows;
};

ThresholdTable threshold_table(const ModelSpec& model, const Vec& P, int n_max);

struct Violation {
    std::string what;
    int n = 0;
    double p_abs = 0.0;
    double value = 0.0;
};

struct MonotonicityReport {
    int n_max = 0;
    Vec p_abs;                      // sorted grid of |P|
    std::vector<Vec> increments;    // increments[i][n-1] = E(n+1) - E(n) at p_abs[i]
    std::vector<Violation> violations;
    bool pass() const { return violations.empty(); }
};

MonotonicityReport check_monotonicity(const ModelSpec& model, const std::vector<Vec>& P_grid, int n_max);

struct DerivativeReport {
    int n = 0;
    double m = 0.0;
    double p_crit = 0.0;  // |P^(n+1)|
    Vec r;
    Vec f;
    Vec slope;
    double max_slope = 0.0;
    double max_f_excess = 0.0;       // max of f(r) - m r / 2
    double endpoint_error = 0.0;     // |f(n+1) - m(n+1)/2|
    std::vector<Violation> violations;
    bool pass() const { return violations.empty(); }
};

DerivativeReport check_derivative_bound(const ModelSpec& model, int n, const Vec& r_grid);

}  // namespace cherenkov
