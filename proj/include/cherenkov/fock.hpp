#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cherenkov/models.hpp"
#include "cherenkov/regularizers.hpp"

namespace cherenkov {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

struct GridAxis {
    double extent = 1.0;  // the axis covers [-extent, extent]
    int points = 16;
};

// Cell-centred uniform grid. For friction the k axes come first, then the xi axes.
struct GridSpec {
    std::vector<GridAxis> axes;

    static GridSpec uniform(int dim, double extent, int points);
    static GridSpec friction(int q, double k_extent, int d, double xi_extent, int points);

    void validate() const;
    int dim() const { return static_cast<int>(axes.size()); }
    double spacing(int axis) const { return 2.0 * axes[axis].extent / axes[axis].points; }
    double node(int axis, int i) const { return -axes[axis].extent + (i + 0.5) * spacing(axis); }
    // prod(spacing) / (2 pi)^dim
    double weight() const;
    std::size_t mode_count() const;
    Vec mode(std::size_t index) const;  // row-major, last axis fastest
};

inline constexpr std::size_t kDefaultStateBudget = 200000;
inline constexpr std::size_t kDefaultEntryBudget = 12000000;

using Occupation = std::vector<std::uint32_t>;  // sorted mode indices, one per boson

struct FockBasis {
    GridSpec grid;
    std::vector<Vec> modes;
    int n_max = 0;
    std::vector<Occupation> states;  // graded lexicographic; states[0] is the vacuum
    std::map<Occupation, std::size_t> index;
    std::vector<std::size_t> sector_begin;  // states of n bosons are [sector_begin[n], sector_begin[n+1])

    std::size_t size() const { return states.size(); }
    std::size_t find(const Occupation& occ) const;  // size() if absent
    int bosons(std::size_t state) const { return static_cast<int>(states[state].size()); }
};

std::size_t fock_dimension(std::size_t modes, int n_max);

FockBasis build_basis(const GridSpec& grid, int n_max, std::size_t budget = kDefaultStateBudget);

// Compressed-row sparse matrix with complex entries.
struct SparseOperator {
    std::size_t dim = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::uint32_t> cols;
    std::vector<cplx> values;
    std::string label;
    bool hermitian = false;

    std::size_t nnz() const { return values.size(); }
    bool is_real() const;
    cplx at(std::size_t row, std::size_t col) const;
    void apply(const CVec& x, CVec& y) const;
    void apply_real(const Vec& x, Vec& y) const;  // uses real parts only
    Vec diagonal() const;
};

struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    cplx value;
};

SparseOperator from_triplets(std::size_t dim, std::vector<Triplet> entries, std::string label, bool hermitian);
SparseOperator diagonal_operator(const Vec& diag, std::string label);
SparseOperator add(const SparseOperator& a, const SparseOperator& b, cplx sb, std::string label);

// max |A - A^dagger| over all entries
double hermitian_defect(const SparseOperator& op);
// Throws an input error when the hermitian flag is set but the defect exceeds tol.
void check_hermitian(const SparseOperator& op, double tol = 1e-12);

void write_matrix_market(const SparseOperator& op, const std::string& path);

SparseOperator assemble_H0(const ModelSpec& model, const Vec& P, const FockBasis& basis);
SparseOperator assemble_field(const KernelSpec& kernel, const ModelSpec& model, const FockBasis& basis);
SparseOperator assemble_number(const FockBasis& basis);
SparseOperator assemble_hamiltonian(const ModelSpec& model, const KernelSpec& kernel, const Vec& P,
                                    const FockBasis& basis);

// Position grid conjugate to the xi nodes on one axis.
Vec conjugate_positions(const GridSpec& grid, int axis);

// Closed-form friction commutator [H0(P), i A_{P;delta}], n_max <= 2.
SparseOperator assemble_commutator_friction(const ModelSpec& model, const Vec& P, const ChiDelta& chi,
                                            const FockBasis& basis, std::size_t entry_budget = kDefaultEntryBudget);

struct CommutatorSpotCheck {
    std::size_t samples = 0;
    double fitted_C = 0.0;    // max ratio over the fit samples
    double verified_C = 0.0;  // max ratio over fresh samples
    double theory_C = 0.0;    // bound from the M' range and P
    bool pass = false;        // verified_C <= theory_C
};

CommutatorSpotCheck commutator_spot_check(const SparseOperator& K, const SparseOperator& H0, const Vec& P,
                                          double delta, std::size_t samples, std::uint64_t seed);

}  // namespace cherenkov
