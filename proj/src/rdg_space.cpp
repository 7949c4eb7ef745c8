#include "rdg/rdg_space.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <unordered_map>

namespace rdg {

namespace {

// Geometry signature of a stencil: the per-member stretch/offset pairs,
// rounded so that elements with identical geometry (up to roundoff from
// breakpoint arithmetic) share one table.
std::string stencil_signature(const TensorMesh& mesh, const Stencil& st, int dim) {
    char buf[64];
    std::string key;
    key.reserve(dim * 3 * 28);
    for (int d = 0; d < dim; ++d) {
        const int owner = st.owner.idx[d];
        const double h_owner = mesh.size(d, owner);
        for (int t = 0; t < 3; ++t) {
            const int memb = st.line[d][t];
            const double a = mesh.size(d, memb) / h_owner;
            const double b =
                2.0 * (mesh.center(d, memb) + st.shift[d][t] - mesh.center(d, owner)) / h_owner;
            std::snprintf(buf, sizeof(buf), "%.12e,%.12e;", a, b);
            key += buf;
        }
    }
    return key;
}

} // namespace

RdgSpace::RdgSpace(TensorMesh mesh, int order, int threads)
    : mesh_(std::move(mesh)), order_(make_order_pair(order, mesh_.dim())),
      moment_set_(order_.m, order_.dim), poly_set_(order_.k, order_.dim) {
    (void)threads; // table construction is dominated by the shared-signature cache
    const long n_elem = mesh_.element_count();
    const int mc = order_.moment_count();
    tables_.resize(n_elem);
    gather_.resize(n_elem);

    std::unordered_map<std::string, const ReconstructionTable*> cache;
    for (long e = 0; e < n_elem; ++e) {
        const ElementId id = mesh_.element(e);
        const Stencil st = mesh_.stencil_of(id);
        const std::string key = stencil_signature(mesh_, st, order_.dim);
        auto it = cache.find(key);
        if (it == cache.end()) {
            table_pool_.push_back(
                std::make_unique<ReconstructionTable>(build_reconstruction_table(mesh_, id, order_)));
            it = cache.emplace(key, table_pool_.back().get()).first;
        }
        tables_[e] = it->second;

        auto& g = gather_[e];
        g.resize(static_cast<std::size_t>(st.member_count()) * mc);
        for (int ms = 0; ms < st.member_count(); ++ms)
            for (int a = 0; a < mc; ++a)
                g[static_cast<std::size_t>(ms) * mc + a] = dof_index(st.members[ms].linear, a);
    }

    // Dimension law of the reduced space: N (m+1)^d = N (k+1)^d / 3^d.
    const long reduced = n_elem * order_.moment_count();
    const long full = n_elem * order_.poly_count();
    if (reduced * order_.stencil_size() != full)
        throw Error("rdg_space: degree-of-freedom reduction law violated");
}

Vec RdgSpace::project(const std::function<double(const Point&)>& u0, int threads) const {
    const long n_elem = mesh_.element_count();
    const int mc = order_.moment_count();
    const QuadratureRule rule = gauss_rule(default_quadrature_points(order_.k));
    Vec dofs(dof_count());
    parallel_for(static_cast<std::size_t>(n_elem), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t el = b; el < e; ++el) {
            const ElementGeometry g = element_geometry(mesh_, mesh_.element(static_cast<long>(el)));
            for (int a = 0; a < mc; ++a)
                dofs[dof_index(static_cast<long>(el), a)] = moment(g, moment_set_[a], u0, rule);
        }
    });
    return dofs;
}

void RdgSpace::local_coeffs(const Vec& dofs, long elem, double* out) const {
    const auto& g = gather_[elem];
    double gathered[54]; // 3^d (m+1)^d <= 36
    for (std::size_t i = 0; i < g.size(); ++i) gathered[i] = dofs[g[i]];
    tables_[elem]->apply(gathered, out);
}

Vec RdgSpace::local_coeffs(const Vec& dofs, long elem) const {
    Vec out(order_.poly_count());
    local_coeffs(dofs, elem, out.data());
    return out;
}

std::vector<Vec> RdgSpace::all_local_coeffs(const Vec& dofs, int threads) const {
    const long n_elem = mesh_.element_count();
    std::vector<Vec> coeffs(n_elem);
    parallel_for(static_cast<std::size_t>(n_elem), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t el = b; el < e; ++el)
            coeffs[el] = local_coeffs(dofs, static_cast<long>(el));
    });
    return coeffs;
}

double RdgSpace::eval(const Vec& dofs, const Point& p, int side_bias) const {
    const ElementId e = mesh_.locate(p, side_bias);
    const Vec c = local_coeffs(dofs, e.linear);
    const ElementGeometry g = element_geometry(mesh_, e);
    double v = 0.0;
    for (int i = 0; i < poly_set_.size(); ++i) v += c[i] * scaled_basis_value(g, poly_set_[i], p);
    return v;
}

std::array<double, 2> RdgSpace::eval_gradient(const Vec& dofs, const Point& p,
                                              int side_bias) const {
    const ElementId e = mesh_.locate(p, side_bias);
    const Vec c = local_coeffs(dofs, e.linear);
    const ElementGeometry g = element_geometry(mesh_, e);
    std::array<double, 2> grad{0.0, 0.0};
    for (int d = 0; d < mesh_.dim(); ++d)
        for (int i = 0; i < poly_set_.size(); ++i)
            grad[d] += c[i] * scaled_basis_derivative(g, poly_set_[i], p, d);
    return grad;
}

SparseOperator RdgSpace::mass_matrix() const {
    const long n_elem = mesh_.element_count();
    const int pc = order_.poly_count();
    const int s = order_.stencil_size() * order_.moment_count();
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(n_elem) * s * s);
    DenseMatrix w(s, s);
    for (long e = 0; e < n_elem; ++e) {
        const auto h = mesh_.element_sizes(mesh_.element(e));
        const DenseMatrix& t = tables_[e]->inverse;
        // W = T^T D T with D the diagonal local mass of the Legendre basis
        for (int i = 0; i < s; ++i)
            for (int j = i; j < s; ++j) {
                double sum = 0.0;
                for (int b = 0; b < pc; ++b) {
                    double d = h[0] / (2.0 * poly_set_[b][0] + 1.0);
                    if (order_.dim == 2) d *= h[1] / (2.0 * poly_set_[b][1] + 1.0);
                    sum += t(b, i) * d * t(b, j);
                }
                w(i, j) = sum;
                w(j, i) = sum;
            }
        const auto& g = gather_[e];
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j)
                trips.push_back({static_cast<int>(g[i]), static_cast<int>(g[j]), w(i, j)});
    }
    return SparseOperator::from_triplets(static_cast<int>(dof_count()),
                                         static_cast<int>(dof_count()), std::move(trips));
}

namespace {

template <typename F>
double quadrature_sum(const TensorMesh& mesh, int nq, F&& per_point) {
    const QuadratureRule rule = gauss_rule(nq);
    double total = 0.0;
    const long n_elem = mesh.element_count();
    for (long e = 0; e < n_elem; ++e) {
        const ElementId id = mesh.element(e);
        const ElementGeometry g = element_geometry(mesh, id);
        double jac = 0.5 * g.size[0];
        if (mesh.dim() == 2) jac *= 0.5 * g.size[1];
        if (mesh.dim() == 1) {
            for (int q = 0; q < rule.size(); ++q) {
                const Point x{g.center[0] + 0.5 * g.size[0] * rule.nodes[q], 0.0};
                total += jac * rule.weights[q] * per_point(e, g, x);
            }
        } else {
            for (int q0 = 0; q0 < rule.size(); ++q0)
                for (int q1 = 0; q1 < rule.size(); ++q1) {
                    const Point x{g.center[0] + 0.5 * g.size[0] * rule.nodes[q0],
                                  g.center[1] + 0.5 * g.size[1] * rule.nodes[q1]};
                    total += jac * rule.weights[q0] * rule.weights[q1] * per_point(e, g, x);
                }
        }
    }
    return total;
}

} // namespace

double RdgSpace::l2_error(const Vec& dofs, const std::function<double(const Point&)>& exact,
                          int points_per_direction) const {
    const int nq = points_per_direction > 0 ? points_per_direction
                                            : default_quadrature_points(order_.k);
    const std::vector<Vec> coeffs = all_local_coeffs(dofs);
    const double sq = quadrature_sum(
        mesh_, nq, [&](long e, const ElementGeometry& g, const Point& x) {
            double v = 0.0;
            for (int i = 0; i < poly_set_.size(); ++i)
                v += coeffs[e][i] * scaled_basis_value(g, poly_set_[i], x);
            const double d = v - exact(x);
            return d * d;
        });
    return std::sqrt(sq);
}

double RdgSpace::h1_seminorm_error(
    const Vec& dofs, const std::function<std::array<double, 2>(const Point&)>& exact_grad,
    int points_per_direction) const {
    const int nq = points_per_direction > 0 ? points_per_direction
                                            : default_quadrature_points(order_.k);
    const std::vector<Vec> coeffs = all_local_coeffs(dofs);
    const double sq = quadrature_sum(
        mesh_, nq, [&](long e, const ElementGeometry& g, const Point& x) {
            const auto ge = exact_grad(x);
            double acc = 0.0;
            for (int d = 0; d < order_.dim; ++d) {
                double v = 0.0;
                for (int i = 0; i < poly_set_.size(); ++i)
                    v += coeffs[e][i] * scaled_basis_derivative(g, poly_set_[i], x, d);
                const double diff = v - ge[d];
                acc += diff * diff;
            }
            return acc;
        });
    return std::sqrt(sq);
}

double RdgSpace::l2_error_vector(const std::vector<Vec>& q,
                                 const std::function<std::array<double, 2>(const Point&)>& exact,
                                 double scale, int points_per_direction) const {
    const int nq = points_per_direction > 0 ? points_per_direction
                                            : default_quadrature_points(order_.k);
    std::vector<std::vector<Vec>> coeffs(q.size());
    for (std::size_t d = 0; d < q.size(); ++d) coeffs[d] = all_local_coeffs(q[d]);
    const double sq = quadrature_sum(
        mesh_, nq, [&](long e, const ElementGeometry& g, const Point& x) {
            const auto ge = exact(x);
            double acc = 0.0;
            for (std::size_t d = 0; d < q.size(); ++d) {
                double v = 0.0;
                for (int i = 0; i < poly_set_.size(); ++i)
                    v += coeffs[d][e][i] * scaled_basis_value(g, poly_set_[i], x);
                const double diff = scale * v - ge[d];
                acc += diff * diff;
            }
            return acc;
        });
    return std::sqrt(sq);
}

double RdgSpace::total_integral(const Vec& dofs) const {
    // The mean moment is the cell average, so the cell integral is |K| times it.
    double total = 0.0;
    const long n_elem = mesh_.element_count();
    for (long e = 0; e < n_elem; ++e) {
        const auto h = mesh_.element_sizes(mesh_.element(e));
        double measure = h[0];
        if (order_.dim == 2) measure *= h[1];
        total += measure * dofs[dof_index(e, 0)];
    }
    return total;
}

} // namespace rdg
