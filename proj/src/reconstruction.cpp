#include "rdg/reconstruction.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rdg {

int OrderPair::poly_count() const {
    int n = k + 1;
    return dim == 2 ? n * n : n;
}

int OrderPair::moment_count() const {
    int n = m + 1;
    return dim == 2 ? n * n : n;
}

int OrderPair::stencil_size() const { return dim == 2 ? 9 : 3; }

OrderPair make_order_pair(int k, int dim) {
    if (k != 2 && k != 5)
        throw InvalidArgumentError("order " + std::to_string(k) +
                                   " unsupported: the moment system is square only for orders "
                                   "2 and 5 with a 3-wide stencil");
    if (dim != 1 && dim != 2) throw InvalidArgumentError("order pair: dim must be 1 or 2");
    return OrderPair{k, (k + 1) / 3 - 1, dim};
}

namespace {

// ((2r+1)/2) * integral over [-1,1] of L^r(t) L^l(a t + b) dt. The integrand
// has degree r + l, so a (k+2)-point rule is exact.
double entry_factor(int r, int l, double a, double b, const QuadratureRule& rule) {
    double sum = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
        const double t = rule.nodes[q];
        sum += rule.weights[q] * legendre_value(r, t) * legendre_value(l, a * t + b);
    }
    return 0.5 * (2.0 * r + 1.0) * sum;
}

// Per-direction stretch a = h_member/h_owner and offset b = 2(c_member - c_owner)/h_owner
// for the stencil member in the given line slot.
void member_stretch_offset(const TensorMesh& mesh, const Stencil& st, int dir, int slot,
                           double& a, double& b) {
    const int owner = st.owner.idx[dir];
    const int member = st.line[dir][slot];
    const double h_owner = mesh.size(dir, owner);
    a = mesh.size(dir, member) / h_owner;
    b = 2.0 * (mesh.center(dir, member) + st.shift[dir][slot] - mesh.center(dir, owner)) / h_owner;
}

} // namespace

DenseMatrix moment_matrix(const TensorMesh& mesh, const Stencil& stencil, const OrderPair& op) {
    const IndexSet moments(op.m, op.dim);
    const IndexSet polys(op.k, op.dim);
    const QuadratureRule rule = gauss_rule(default_quadrature_points(op.k));
    const int s = op.stencil_size();
    const int mc = op.moment_count();
    DenseMatrix mat(s * mc, op.poly_count());

    for (int ms = 0; ms < s; ++ms) {
        double a[2] = {1.0, 1.0}, b[2] = {0.0, 0.0};
        if (op.dim == 1) {
            member_stretch_offset(mesh, stencil, 0, ms, a[0], b[0]);
        } else {
            member_stretch_offset(mesh, stencil, 0, ms / 3, a[0], b[0]);
            member_stretch_offset(mesh, stencil, 1, ms % 3, a[1], b[1]);
        }
        for (int ri = 0; ri < mc; ++ri) {
            const int row = ms * mc + ri;
            for (int li = 0; li < polys.size(); ++li) {
                double v = entry_factor(moments[ri][0], polys[li][0], a[0], b[0], rule);
                if (op.dim == 2) v *= entry_factor(moments[ri][1], polys[li][1], a[1], b[1], rule);
                mat(row, li) = v;
            }
        }
    }
    return mat;
}

DenseMatrix moment_matrix(const TensorMesh& mesh, const ElementId& elem, const OrderPair& op) {
    return moment_matrix(mesh, mesh.stencil_of(elem), op);
}

namespace {

// Appendix-style closed forms per direction. a1/a2 are the size ratios of the
// two non-owner members relative to the owner, ordered by distance.
double line_det_oracle(int k, StencilKind kind, double a_near_lo, double a_near_hi) {
    // The exponent of the last factor for order 5 is 4, consistent with the
    // lower bounds 252 a^2 (a+1)^8 (2a+1)^4 and 4032 a^6 (a+1)^4 (2a+1)^4 at
    // equal ratios (verified symbolically; uniform center value 5225472).
    if (kind == StencilKind::Center) {
        const double al = a_near_lo, ar = a_near_hi;
        if (k == 2) return 2.0 * (ar + 1.0) * (al + 1.0) * (al + ar + 1.0);
        return 252.0 * al * ar * std::pow(ar + 1.0, 4) * std::pow(al + 1.0, 4) *
               std::pow(al + ar + 1.0, 4);
    }
    // Backward and forward are mirror images: a1 = nearest neighbor ratio,
    // a2 = second neighbor ratio.
    const double a1 = a_near_lo, a2 = a_near_hi;
    if (k == 2) return 2.0 * (a1 + 1.0) * (a1 + a2) * (a1 + a2 + 1.0);
    return 252.0 * a1 * a2 * std::pow(a1 + 1.0, 4) * std::pow(a1 + a2, 4) *
           std::pow(a1 + a2 + 1.0, 4);
}

} // namespace

double stencil_determinant_oracle(const TensorMesh& mesh, const Stencil& stencil,
                                  const OrderPair& op) {
    double det = 1.0;
    for (int d = 0; d < op.dim; ++d) {
        double a[3], b[3];
        for (int t = 0; t < 3; ++t) member_stretch_offset(mesh, stencil, d, t, a[t], b[t]);
        double line;
        switch (stencil.kind[d]) {
        case StencilKind::Center:
            line = line_det_oracle(op.k, StencilKind::Center, a[0], a[2]);
            break;
        case StencilKind::Backward:
            // owner in slot 2; slots 1, 0 hold the first and second neighbor
            line = line_det_oracle(op.k, StencilKind::Backward, a[1], a[0]);
            break;
        case StencilKind::Forward:
        default:
            line = line_det_oracle(op.k, StencilKind::Forward, a[1], a[2]);
            break;
        }
        det *= op.dim == 2 ? std::pow(line, op.k + 1) : line;
    }
    return det;
}

namespace {

// Equilibrate rows and columns, then factor: far stencil members carry
// entries of order |b|^k, and the scaling keeps the inverse accurate on
// strongly graded meshes. (Dr^-1 M Dc^-1)^-1 applied as Dc^-1 inv Dr^-1 is
// exactly M^-1. Throws SolveError on an exact zero pivot.
ReconstructionTable factor_equilibrated(const DenseMatrix& m) {
    const int n = m.rows();
    DenseMatrix scaled = m;
    std::vector<double> row_scale(n, 0.0), col_scale(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) row_scale[i] = std::max(row_scale[i], std::abs(scaled(i, j)));
        if (row_scale[i] == 0.0) row_scale[i] = 1.0;
        for (int j = 0; j < n; ++j) scaled(i, j) /= row_scale[i];
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) col_scale[j] = std::max(col_scale[j], std::abs(scaled(i, j)));
        if (col_scale[j] == 0.0) col_scale[j] = 1.0;
        for (int i = 0; i < n; ++i) scaled(i, j) /= col_scale[j];
    }
    LuFactorization lu(std::move(scaled));
    ReconstructionTable table;
    double det = lu.determinant();
    for (int i = 0; i < n; ++i) det *= row_scale[i] * col_scale[i];
    table.determinant = det;
    table.condition = lu.condition1();
    table.inverse = lu.inverse();
    for (int b = 0; b < n; ++b)
        for (int i = 0; i < n; ++i) table.inverse(b, i) /= col_scale[b] * row_scale[i];
    return table;
}

} // namespace

WellposednessReport check_wellposedness(const TensorMesh& mesh, const ElementId& elem,
                                        const OrderPair& op) {
    const Stencil st = mesh.stencil_of(elem);
    const DenseMatrix m = moment_matrix(mesh, st, op);
    WellposednessReport rep;
    try {
        const ReconstructionTable table = factor_equilibrated(m);
        rep.determinant = table.determinant;
        rep.condition = table.condition;
    } catch (const SolveError&) {
        rep.determinant = 0.0;
        rep.condition = std::numeric_limits<double>::infinity();
    }
    rep.oracle = std::abs(stencil_determinant_oracle(mesh, st, op));
    rep.rel_deviation = std::abs(std::abs(rep.determinant) - rep.oracle) / rep.oracle;
    rep.ok = std::isfinite(rep.condition) && rep.condition < kSingularConditionLimit;
    return rep;
}

ReconstructionTable build_reconstruction_table(const TensorMesh& mesh, const ElementId& elem,
                                               const OrderPair& op) {
    const DenseMatrix m = moment_matrix(mesh, elem, op);
    ReconstructionTable table;
    try {
        table = factor_equilibrated(m);
    } catch (const SolveError&) {
        throw SingularMatrixError("reconstruction: moment matrix is exactly singular (element " +
                                  std::to_string(elem.linear) + ")");
    }
    if (!(table.condition < kSingularConditionLimit))
        throw SingularMatrixError("reconstruction: moment matrix condition " +
                                  std::to_string(table.condition) +
                                  " exceeds the singularity threshold (element " +
                                  std::to_string(elem.linear) + ")");
    return table;
}

} // namespace rdg
