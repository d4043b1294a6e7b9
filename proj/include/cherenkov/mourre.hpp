#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cherenkov/fock.hpp"
#include "cherenkov/models.hpp"
#include "cherenkov/regularizers.hpp"

namespace cherenkov {

struct Witness {
    int ell = 0;
    std::vector<Vec> ks;
    double margin = 0.0;
};

struct MourreReport {
    std::string model;
    Vec P;
    int n = 0;
    int ell_min = 0;
    int ell_max = 0;
    double interval_lo = 0.0;
    double interval_hi = 0.0;
    std::uint64_t samples = 0;  // per ell for symbol checks, matrix dimension for the friction check
    double min_margin = 0.0;
    double tolerance = 0.0;
    std::vector<Witness> violations;  // capped witness list
    std::uint64_t violation_count = 0;
    std::string status = "ok";
    bool pass = false;
};

// (Sum (k_j - k*)) . (Sum k_j - n k*) + Sum (k_j - k*) . (grad omega(k_j) - c P/|P|), ks has ell <= n entries.
double nelson_commutator_symbol(const ModelSpec& model, const Vec& P, int n, const std::vector<Vec>& ks);

struct NelsonSymbolReport {
    MourreReport step2;  // symbol >= H(k) - H(k*, ..., k*)
    MourreReport step3;  // symbol >= (H(k) - E_n) + (1 - ell/n)((|P| - c)^2/(2n) - alpha)
    double minimizer_margin = 0.0;  // step-2 margin at ell = n, all k_j = k*
    double correction = 0.0;        // (|P| - c)^2/(2n) - alpha(n, P)
    bool theorem_level = false;     // n = 1 or n >= n_P
};

NelsonSymbolReport nelson_symbol_inequality_check(const ModelSpec& model, const Vec& P, int n, std::uint64_t samples,
                                                  std::uint64_t seed);

struct Step4Report {
    int n = 0;
    double m = 0.0;
    double p_next = 0.0;                 // |P^(n+1)|
    double f_difference = 0.0;           // f(n+1) - f(n) at P^(n+1)
    double identity_residual = 0.0;      // |f(n+1) - m(n+1)/2|
    double alpha_formula_residual = 0.0; // alpha(n, P) against its closed form in c
    bool f_decreasing_in_c = false;
    bool pass = false;
};

Step4Report step4_bound_check(const ModelSpec& model, int n);

// Left endpoint of J_eps = [((1+delta)/(3+delta) + eps)^2 P^2/2, inf).
double friction_mourre_left_endpoint(double delta, double eps, const Vec& P);

MourreReport friction_mourre_matrix_check(const ModelSpec& model, const Vec& P, const ChiDelta& chi,
                                          const FockBasis& basis, double lo, double hi, double eps,
                                          double tol_factor = 1e-6);

// Smallest eigenvalue of a real symmetric operator restricted to the listed rows.
double min_eigenvalue(const SparseOperator& op, const std::vector<std::size_t>& rows);

}  // namespace cherenkov
