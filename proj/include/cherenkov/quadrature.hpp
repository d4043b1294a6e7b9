#pragma once

#include <functional>
#include <vector>

namespace cherenkov {

using Vec = std::vector<double>;

struct Rule1d {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre nodes and weights on [a, b].
Rule1d gauss_legendre(int n, double a = -1.0, double b = 1.0);

struct SphereRule {
    int dim = 0;
    std::vector<Vec> directions;
    std::vector<double> weights;  // sum to the area of S^{dim-1}
};

// Quadrature on the unit sphere S^{d-1} in R^d. For d = 3 this is a product rule,
// Gauss-Legendre in the polar cosine times a uniform azimuthal rule, with the polar
// axis along `axis` (any nonzero vector; e_d if empty or zero). `level` sets the size.
SphereRule sphere_rule(int d, int level, const Vec& axis = {});

double sphere_area(int d);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

// Adaptive Gauss-Kronrod on [a, b], split at the interior breakpoints. Infinite b allowed.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10,
                     std::vector<double> breakpoints = {}, unsigned max_depth = 18);

}  // namespace cherenkov
