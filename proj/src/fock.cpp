#include "cherenkov/fock.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>

#include "cherenkov/errors.hpp"
#include "cherenkov/parallel.hpp"
#include "cherenkov/rng.hpp"

namespace cherenkov {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

GridSpec GridSpec::uniform(int dim, double extent, int points)
{
    GridSpec g;
    g.axes.assign(dim, GridAxis{extent, points});
    g.validate();
    return g;
}

GridSpec GridSpec::friction(int q, double k_extent, int d, double xi_extent, int points)
{
    GridSpec g;
    g.axes.assign(q, GridAxis{k_extent, points});
    g.axes.insert(g.axes.end(), d, GridAxis{xi_extent, points});
    g.validate();
    return g;
}

void GridSpec::validate() const
{
    require(!axes.empty(), ErrorKind::input, "grid", "grid needs at least one axis");
    for (const auto& a : axes) {
        require(a.points >= 2, ErrorKind::input, "grid", "each axis needs at least 2 points");
        require(a.extent > 0.0 && std::isfinite(a.extent), ErrorKind::input, "grid", "axis extent must be positive");
    }
}

double GridSpec::weight() const
{
    double w = 1.0;
    for (int a = 0; a < dim(); ++a) w *= spacing(a) / (2.0 * kPi);
    return w;
}

std::size_t GridSpec::mode_count() const
{
    std::size_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::size_t>(a.points);
    return n;
}

Vec GridSpec::mode(std::size_t index) const
{
    Vec x(axes.size());
    for (int a = dim() - 1; a >= 0; --a) {
        std::size_t n = axes[a].points;
        x[a] = node(a, static_cast<int>(index % n));
        index /= n;
    }
    return x;
}

std::size_t FockBasis::find(const Occupation& occ) const
{
    auto it = index.find(occ);
    return it == index.end() ? states.size() : it->second;
}

std::size_t fock_dimension(std::size_t modes, int n_max)
{
    // sum_n C(M + n - 1, n), saturating
    double total = 0.0;
    double term = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) term *= static_cast<double>(modes + n - 1) / n;
        total += term;
    }
    return total > 1e18 ? static_cast<std::size_t>(1e18) : static_cast<std::size_t>(std::llround(total));
}

FockBasis build_basis(const GridSpec& grid, int n_max, std::size_t budget)
{
    grid.validate();
    require(n_max >= 0, ErrorKind::input, "build_basis", "n_max must be >= 0");
    std::size_t M = grid.mode_count();
    std::size_t count = fock_dimension(M, n_max);
    if (count > budget)
        fail(ErrorKind::capacity, "build_basis",
             std::to_string(M) + " modes with n_max = " + std::to_string(n_max) + " give " + std::to_string(count) +
                 " states, budget is " + std::to_string(budget));
    FockBasis b;
    b.grid = grid;
    b.n_max = n_max;
    for (std::size_t i = 0; i < M; ++i) b.modes.push_back(grid.mode(i));
    b.states.reserve(count);
    b.sector_begin.push_back(0);
    b.states.push_back({});
    for (int n = 1; n <= n_max; ++n) {
        b.sector_begin.push_back(b.states.size());
        Occupation occ(n, 0);
        while (true) {
            b.states.push_back(occ);
            // next non-decreasing sequence in lexicographic order
            int pos = n - 1;
            while (pos >= 0 && occ[pos] == M - 1) --pos;
            if (pos < 0) break;
            std::uint32_t v = occ[pos] + 1;
            for (int i = pos; i < n; ++i) occ[i] = v;
        }
    }
    b.sector_begin.push_back(b.states.size());
    for (std::size_t i = 0; i < b.states.size(); ++i) b.index.emplace(b.states[i], i);
    return b;
}

bool SparseOperator::is_real() const
{
    for (const cplx& v : values)
        if (v.imag() != 0.0) return false;
    return true;
}

cplx SparseOperator::at(std::size_t row, std::size_t col) const
{
    auto first = cols.begin() + row_ptr[row];
    auto last = cols.begin() + row_ptr[row + 1];
    auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(col));
    if (it == last || *it != col) return 0.0;
    return values[it - cols.begin()];
}

void SparseOperator::apply(const CVec& x, CVec& y) const
{
    y.assign(dim, 0.0);
    parallel_for(dim, [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) {
            cplx s = 0.0;
            for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) s += values[p] * x[cols[p]];
            y[r] = s;
        }
    }, 1024);
}

void SparseOperator::apply_real(const Vec& x, Vec& y) const
{
    y.assign(dim, 0.0);
    parallel_for(dim, [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) {
            double s = 0.0;
            for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) s += values[p].real() * x[cols[p]];
            y[r] = s;
        }
    }, 1024);
}

Vec SparseOperator::diagonal() const
{
    Vec d(dim, 0.0);
    for (std::size_t r = 0; r < dim; ++r) d[r] = at(r, r).real();
    return d;
}

SparseOperator from_triplets(std::size_t dim, std::vector<Triplet> entries, std::string label, bool hermitian)
{
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseOperator op;
    op.dim = dim;
    op.label = std::move(label);
    op.hermitian = hermitian;
    op.row_ptr.assign(dim + 1, 0);
    for (std::size_t i = 0; i < entries.size();) {
        const Triplet& t = entries[i];
        require(t.row < dim && t.col < dim, ErrorKind::input, "from_triplets", "entry outside the matrix");
        cplx v = 0.0;
        std::size_t j = i;
        while (j < entries.size() && entries[j].row == t.row && entries[j].col == t.col) v += entries[j++].value;
        op.cols.push_back(t.col);
        op.values.push_back(v);
        op.row_ptr[t.row + 1]++;
        i = j;
    }
    for (std::size_t r = 0; r < dim; ++r) op.row_ptr[r + 1] += op.row_ptr[r];
    return op;
}

SparseOperator diagonal_operator(const Vec& diag, std::string label)
{
    SparseOperator op;
    op.dim = diag.size();
    op.label = std::move(label);
    op.hermitian = true;
    op.row_ptr.resize(op.dim + 1);
    for (std::size_t i = 0; i < op.dim; ++i) {
        op.row_ptr[i] = i;
        op.cols.push_back(static_cast<std::uint32_t>(i));
        op.values.push_back(diag[i]);
    }
    op.row_ptr[op.dim] = op.dim;
    return op;
}

SparseOperator add(const SparseOperator& a, const SparseOperator& b, cplx sb, std::string label)
{
    require(a.dim == b.dim, ErrorKind::input, "add", "dimension mismatch");
    SparseOperator op;
    op.dim = a.dim;
    op.label = std::move(label);
    op.hermitian = a.hermitian && b.hermitian && sb.imag() == 0.0;
    op.row_ptr.assign(a.dim + 1, 0);
    for (std::size_t r = 0; r < a.dim; ++r) {
        std::size_t p = a.row_ptr[r], pe = a.row_ptr[r + 1];
        std::size_t q = b.row_ptr[r], qe = b.row_ptr[r + 1];
        while (p < pe || q < qe) {
            std::uint32_t c;
            cplx v;
            if (q >= qe || (p < pe && a.cols[p] < b.cols[q])) {
                c = a.cols[p];
                v = a.values[p++];
            } else if (p >= pe || b.cols[q] < a.cols[p]) {
                c = b.cols[q];
                v = sb * b.values[q++];
            } else {
                c = a.cols[p];
                v = a.values[p++] + sb * b.values[q++];
            }
            op.cols.push_back(c);
            op.values.push_back(v);
        }
        op.row_ptr[r + 1] = op.cols.size();
    }
    return op;
}

double hermitian_defect(const SparseOperator& op)
{
    double worst = 0.0;
    for (std::size_t r = 0; r < op.dim; ++r)
        for (std::size_t p = op.row_ptr[r]; p < op.row_ptr[r + 1]; ++p)
            worst = std::max(worst, std::abs(op.values[p] - std::conj(op.at(op.cols[p], r))));
    return worst;
}

void check_hermitian(const SparseOperator& op, double tol)
{
    if (!op.hermitian) return;
    double defect = hermitian_defect(op);
    if (!(defect < tol))
        fail(ErrorKind::input, "check_hermitian",
             "operator '" + op.label + "' is flagged hermitian but has defect " + std::to_string(defect));
}

void write_matrix_market(const SparseOperator& op, const std::string& path)
{
    std::ofstream out(path);
    if (!out) fail(ErrorKind::input, "write_matrix_market", "cannot open " + path);
    bool real = op.is_real();
    out << "%%MatrixMarket matrix coordinate " << (real ? "real" : "complex") << " general\n";
    out << "% " << op.label << (op.hermitian ? " (hermitian)" : "") << "\n";
    out << op.dim << ' ' << op.dim << ' ' << op.nnz() << '\n';
    out << std::setprecision(17);
    for (std::size_t r = 0; r < op.dim; ++r)
        for (std::size_t p = op.row_ptr[r]; p < op.row_ptr[r + 1]; ++p) {
            out << r + 1 << ' ' << op.cols[p] + 1 << ' ' << op.values[p].real();
            if (!real) out << ' ' << op.values[p].imag();
            out << '\n';
        }
    if (!out) fail(ErrorKind::input, "write_matrix_market", "write failed for " + path);
}

namespace {

void require_layout(const ModelSpec& model, const FockBasis& basis, const char* where)
{
    require(basis.grid.dim() == model.boson_dim(), ErrorKind::input, where,
            "grid has " + std::to_string(basis.grid.dim()) + " axes, model needs " + std::to_string(model.boson_dim()));
}

}  // namespace

SparseOperator assemble_H0(const ModelSpec& model, const Vec& P, const FockBasis& basis)
{
    model.validate();
    require_layout(model, basis, "assemble_H0");
    require(static_cast<int>(P.size()) == model.d, ErrorKind::input, "assemble_H0", "P has the wrong dimension");
    Vec diag(basis.size());
    parallel_for(basis.size(), [&](std::size_t b, std::size_t e) {
        std::vector<Vec> ks;
        for (std::size_t s = b; s < e; ++s) {
            const Occupation& occ = basis.states[s];
            if (occ.empty()) {
                diag[s] = vacuum_energy(P);
                continue;
            }
            ks.clear();
            for (auto m : occ) ks.push_back(basis.modes[m]);
            diag[s] = symbol_n(model, P, ks);
        }
    });
    return diagonal_operator(diag, "H0");
}

SparseOperator assemble_number(const FockBasis& basis)
{
    Vec diag(basis.size());
    for (std::size_t s = 0; s < basis.size(); ++s) diag[s] = static_cast<double>(basis.states[s].size());
    return diagonal_operator(diag, "N");
}

SparseOperator assemble_field(const KernelSpec& kernel, const ModelSpec& model, const FockBasis& basis)
{
    model.validate();
    kernel.validate(model);
    require_layout(model, basis, "assemble_field");
    double sw = std::sqrt(basis.grid.weight());
    Vec amp(basis.modes.size());
    for (std::size_t m = 0; m < amp.size(); ++m) amp[m] = kernel_eval(kernel, model, basis.modes[m]) * sw;
    // creation part: state s (n bosons) -> s + boson at mode i, element sqrt(n_i + 1) amp_i
    std::size_t top = basis.n_max >= 1 ? basis.sector_begin[basis.n_max] : 0;
    std::vector<std::vector<Triplet>> rows(top);
    parallel_for(top, [&](std::size_t b, std::size_t e) {
        for (std::size_t s = b; s < e; ++s) {
            const Occupation& occ = basis.states[s];
            for (std::uint32_t i = 0; i < amp.size(); ++i) {
                if (amp[i] == 0.0) continue;
                Occupation up = occ;
                up.insert(std::upper_bound(up.begin(), up.end(), i), i);
                std::size_t t = basis.find(up);
                auto ni = std::count(occ.begin(), occ.end(), i);
                double v = std::sqrt(static_cast<double>(ni + 1)) * amp[i];
                rows[s].push_back({static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(s), v});
                rows[s].push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t), v});
            }
        }
    }, 16);
    std::vector<Triplet> all;
    for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
    return from_triplets(basis.size(), std::move(all), "Phi", true);
}

SparseOperator assemble_hamiltonian(const ModelSpec& model, const KernelSpec& kernel, const Vec& P,
                                    const FockBasis& basis)
{
    SparseOperator h0 = assemble_H0(model, P, basis);
    SparseOperator phi = assemble_field(kernel, model, basis);
    return add(h0, phi, model.g, "H_g");
}

Vec conjugate_positions(const GridSpec& grid, int axis)
{
    int N = grid.axes[axis].points;
    double h = grid.spacing(axis);
    Vec y(N);
    for (int c = 0; c < N; ++c) y[c] = (c - 0.5 * (N - 1)) * 2.0 * kPi / (N * h);
    return y;
}

namespace {

// Multi-index helpers over the xi axes of a friction grid.
struct XiLayout {
    int q = 0;
    int d = 0;
    std::vector<int> n;         // points per xi axis
    std::size_t total = 1;      // xi modes
    std::size_t k_total = 1;    // k modes
    std::vector<Vec> y;         // conjugate positions per xi axis

    explicit XiLayout(const GridSpec& g, int q_, int d_) : q(q_), d(d_)
    {
        for (int a = 0; a < q; ++a) k_total *= g.axes[a].points;
        for (int a = 0; a < d; ++a) {
            n.push_back(g.axes[q + a].points);
            total *= n.back();
            y.push_back(conjugate_positions(g, q + a));
        }
    }

    std::vector<int> digits(std::size_t idx) const
    {
        std::vector<int> v(d);
        for (int a = d - 1; a >= 0; --a) {
            v[a] = static_cast<int>(idx % n[a]);
            idx /= n[a];
        }
        return v;
    }

    // Encodes a per-axis difference in (-n, n) as an index into [0, prod(2n - 1)).
    std::size_t diff_index(const std::vector<int>& from, const std::vector<int>& to) const
    {
        std::size_t idx = 0;
        for (int a = 0; a < d; ++a) idx = idx * (2 * n[a] - 1) + (to[a] - from[a] + n[a] - 1);
        return idx;
    }

    std::size_t diff_count() const
    {
        std::size_t c = 1;
        for (int a = 0; a < d; ++a) c *= 2 * n[a] - 1;
        return c;
    }
};

// G1[diff] for one boson and G2[diff1 * D + diff2] for two: the matrix (M' - (3+delta)/2) in
// the xi basis, via F^dagger diag F with F[c, b] = exp(i xi_b y_c) / sqrt(N).
struct MprimeTables {
    double shift = 0.0;
    bool one_constant = true;
    double one_value = 0.0;
    Vec two;
    std::size_t D = 0;
};

MprimeTables mprime_tables(const XiLayout& L, const Vec& P, const ChiDelta& chi, int n_max)
{
    MprimeTables t;
    t.shift = 0.5 * (3.0 + chi.delta());
    t.one_value = grad_sum_exact(chi, 1, {0.0}) - t.shift;  // m~ of one entry is the identity
    if (n_max < 2) return t;
    t.D = L.diff_count();
    std::size_t Y = L.total;
    // P . y at every position multi-index
    Vec py(Y, 0.0);
    for (std::size_t c = 0; c < Y; ++c) {
        auto dc = L.digits(c);
        for (int a = 0; a < L.d; ++a) py[c] += P[a] * L.y[a][dc[a]];
    }
    Vec D2(Y * Y);
    for (std::size_t c1 = 0; c1 < Y; ++c1)
        for (std::size_t c2 = 0; c2 < Y; ++c2) D2[c1 * Y + c2] = grad_sum_exact(chi, 1, {py[c1], py[c2]}) - t.shift;
    // phase per axis: exp(2 pi i diff (c - (N-1)/2) / N), real part suffices because D2 is even
    std::vector<std::vector<int>> dig(Y);
    for (std::size_t c = 0; c < Y; ++c) dig[c] = L.digits(c);
    std::size_t DD = t.D;
    t.two.assign(DD * DD, 0.0);
    std::vector<std::vector<int>> diffs(DD);
    for (std::size_t i = 0; i < DD; ++i) {
        std::size_t idx = i;
        diffs[i].resize(L.d);
        for (int a = L.d - 1; a >= 0; --a) {
            int w = 2 * L.n[a] - 1;
            diffs[i][a] = static_cast<int>(idx % w) - (L.n[a] - 1);
            idx /= w;
        }
    }
    auto phase = [&](const std::vector<int>& diff, std::size_t c) {
        double s = 0.0;
        for (int a = 0; a < L.d; ++a) s += diff[a] * (dig[c][a] - 0.5 * (L.n[a] - 1)) / L.n[a];
        return 2.0 * kPi * s;
    };
    double norm = 1.0 / (static_cast<double>(Y) * Y);
    parallel_for(DD, [&](std::size_t b, std::size_t e) {
        Vec ph2(Y);
        for (std::size_t i1 = b; i1 < e; ++i1) {
            Vec ph1(Y);
            for (std::size_t c = 0; c < Y; ++c) ph1[c] = phase(diffs[i1], c);
            for (std::size_t i2 = 0; i2 < DD; ++i2) {
                for (std::size_t c = 0; c < Y; ++c) ph2[c] = phase(diffs[i2], c);
                double s = 0.0;
                for (std::size_t c1 = 0; c1 < Y; ++c1)
                    for (std::size_t c2 = 0; c2 < Y; ++c2) s += D2[c1 * Y + c2] * std::cos(ph1[c1] + ph2[c2]);
                t.two[i1 * DD + i2] = s * norm;
            }
        }
    }, 1);
    return t;
}

}  // namespace

SparseOperator assemble_commutator_friction(const ModelSpec& model, const Vec& P, const ChiDelta& chi,
                                            const FockBasis& basis, std::size_t entry_budget)
{
    model.validate();
    if (model.kind != ModelKind::friction)
        fail(ErrorKind::unsupported_model, "assemble_commutator_friction", "model is not friction");
    require_layout(model, basis, "assemble_commutator_friction");
    require(static_cast<int>(P.size()) == model.d, ErrorKind::input, "assemble_commutator_friction",
            "P has the wrong dimension");
    if (basis.n_max > 2)
        fail(ErrorKind::capacity, "assemble_commutator_friction",
             "position-representation transform supports n_max <= 2, got " + std::to_string(basis.n_max));
    XiLayout L(basis.grid, model.q, model.d);
    std::size_t X = L.total;
    if (basis.n_max == 2) {
        std::size_t s2 = basis.sector_begin[3] - basis.sector_begin[2];
        double estimate = static_cast<double>(s2) * static_cast<double>(X * X) * 2.0 / 2.0 + basis.size();
        if (estimate > static_cast<double>(entry_budget))
            fail(ErrorKind::capacity, "assemble_commutator_friction",
                 "two-boson sector needs about " + std::to_string(static_cast<long long>(estimate)) +
                     " entries, budget is " + std::to_string(entry_budget));
    }
    MprimeTables T = mprime_tables(L, P, chi, basis.n_max);
    double inv = 1.0 / (3.0 + chi.delta());
    int q = model.q, d = model.d;

    auto split = [&](std::uint32_t mode) { return std::pair<std::size_t, std::size_t>{mode / X, mode % X}; };
    auto diag_parts = [&](const Occupation& occ, double& kin, double& Q) {
        Vec rest = P;
        double kk = 0.0;
        for (auto m : occ) {
            const Vec& x = basis.modes[m];
            double a = 0.0;
            for (int i = 0; i < q; ++i) a += x[i] * x[i];
            kk += std::sqrt(a);
            for (int i = 0; i < d; ++i) rest[i] -= x[q + i];
        }
        kin = 2.0 * kk + dot(rest, rest);
        Q = dot(P, rest);
    };

    std::size_t dim = basis.size();
    std::vector<std::vector<Triplet>> rows(dim);
    std::vector<std::vector<int>> xdig(X);
    for (std::size_t b = 0; b < X; ++b) xdig[b] = L.digits(b);

    parallel_for(dim, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            const Occupation& occ = basis.states[s];
            if (occ.empty()) continue;  // vacuum row and column vanish
            double kin, Qs;
            diag_parts(occ, kin, Qs);
            auto& row = rows[s];
            if (occ.size() == 1) {
                row.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s), kin + inv * 2.0 * Qs * T.one_value});
                continue;
            }
            // two bosons: same k pair, any xi pair
            auto [a1, b1] = split(occ[0]);
            auto [a2, b2] = split(occ[1]);
            std::set<Occupation> targets;
            for (std::size_t c1 = 0; c1 < X; ++c1)
                for (std::size_t c2 = 0; c2 < X; ++c2) {
                    Occupation t{static_cast<std::uint32_t>(a1 * X + c1), static_cast<std::uint32_t>(a2 * X + c2)};
                    if (t[0] > t[1]) std::swap(t[0], t[1]);
                    targets.insert(t);
                }
            // orbit of the source: ordered pairs (x1, x2)
            std::vector<std::pair<std::uint32_t, std::uint32_t>> src{{occ[0], occ[1]}};
            if (occ[0] != occ[1]) src.push_back({occ[1], occ[0]});
            for (const Occupation& t : targets) {
                std::vector<std::pair<std::uint32_t, std::uint32_t>> dst{{t[0], t[1]}};
                if (t[0] != t[1]) dst.push_back({t[1], t[0]});
                double sum = 0.0;
                for (auto [x1, x2] : src)
                    for (auto [y1, y2] : dst) {
                        auto [ka, xa] = split(x1);
                        auto [kb, xb] = split(x2);
                        auto [kc, xc] = split(y1);
                        auto [kd, xd] = split(y2);
                        if (ka != kc || kb != kd) continue;
                        std::size_t i1 = L.diff_index(xdig[xa], xdig[xc]);
                        std::size_t i2 = L.diff_index(xdig[xb], xdig[xd]);
                        sum += T.two[i1 * T.D + i2];
                    }
                double tv = sum / std::sqrt(static_cast<double>(src.size() * dst.size()));
                std::size_t col = basis.find(t);
                double kt, Qt;
                diag_parts(t, kt, Qt);
                double v = inv * (Qs + Qt) * tv;
                if (col == s) v += kin;
                if (v != 0.0) row.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(col), v});
            }
        }
    }, 16);
    std::size_t total = 0;
    for (auto& r : rows) total += r.size();
    if (total > entry_budget)
        fail(ErrorKind::capacity, "assemble_commutator_friction",
             std::to_string(total) + " entries exceed the budget of " + std::to_string(entry_budget));
    std::vector<Triplet> all;
    all.reserve(total);
    for (auto& r : rows) {
        all.insert(all.end(), r.begin(), r.end());
        r.clear();
        r.shrink_to_fit();
    }
    SparseOperator K = from_triplets(dim, std::move(all), "friction commutator", true);
    // symmetrize: (K + K^T)/2, real by construction
    std::vector<Triplet> sym;
    sym.reserve(2 * K.nnz());
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t p = K.row_ptr[r]; p < K.row_ptr[r + 1]; ++p) {
            cplx v = 0.5 * K.values[p];
            sym.push_back({static_cast<std::uint32_t>(r), K.cols[p], v});
            sym.push_back({K.cols[p], static_cast<std::uint32_t>(r), std::conj(v)});
        }
    return from_triplets(dim, std::move(sym), "friction commutator", true);
}

CommutatorSpotCheck commutator_spot_check(const SparseOperator& K, const SparseOperator& H0, const Vec& P,
                                          double delta, std::size_t samples, std::uint64_t seed)
{
    require(K.dim == H0.dim, ErrorKind::input, "commutator_spot_check", "dimension mismatch");
    require(samples >= 1, ErrorKind::input, "commutator_spot_check", "need at least one sample");
    CommutatorSpotCheck rep;
    rep.samples = samples;
    double p = norm(P);
    rep.theory_C = p * p + (1.0 + delta) * p / (std::sqrt(2.0) * (3.0 + delta));
    Vec h = H0.diagonal();
    auto ratio = [&](CounterRng rng) {
        Vec u(K.dim);
        for (double& x : u) x = rng.normal();
        Vec Ku;
        K.apply_real(u, Ku);
        double num = 0.0, uu = 0.0, hu = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            num += u[i] * (Ku[i] - 2.0 * h[i] * u[i]);
            uu += u[i] * u[i];
            hu += h[i] * u[i] * u[i];
        }
        return std::abs(num) / (uu + hu);
    };
    CounterRng base(seed, 0x5343);
    for (std::size_t i = 0; i < samples; ++i) rep.fitted_C = std::max(rep.fitted_C, ratio(base.split(i)));
    for (std::size_t i = 0; i < samples; ++i) rep.verified_C = std::max(rep.verified_C, ratio(base.split(samples + i)));
    rep.pass = rep.fitted_C <= rep.theory_C && rep.verified_C <= rep.theory_C;
    return rep;
}

}  // namespace cherenkov
