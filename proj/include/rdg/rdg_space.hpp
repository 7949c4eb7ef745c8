#pragma once

#include <functional>
#include <memory>

#include "rdg/linalg.hpp"
#include "rdg/mesh.hpp"
#include "rdg/polynomials.hpp"
#include "rdg/reconstruction.hpp"

namespace rdg {

// The reduced space over a tensor mesh: each element carries (m+1)^d Legendre
// moments as unknowns; the element-local polynomial of degree k per variable
// is rebuilt from the moments on the 3^d stencil. DoF layout is element-major
// (direction-1 fastest), moments trace-ascending inside an element.
class RdgSpace {
public:
    RdgSpace(TensorMesh mesh, int order, int threads = 1);

    const TensorMesh& mesh() const { return mesh_; }
    const OrderPair& orders() const { return order_; }
    const IndexSet& moment_indices() const { return moment_set_; }
    const IndexSet& poly_indices() const { return poly_set_; }

    int dofs_per_element() const { return order_.moment_count(); }
    long dof_count() const { return mesh_.element_count() * dofs_per_element(); }
    long dof_index(long elem, int alpha) const { return elem * dofs_per_element() + alpha; }

    const ReconstructionTable& table(long elem) const { return *tables_[elem]; }
    // Global dof ids feeding the reconstruction of one element
    // (member-major, trace order; matches the table's row blocking).
    const std::vector<long>& gather_indices(long elem) const { return gather_[elem]; }

    // DoFs of u0: per-element Legendre moments via the default quadrature.
    Vec project(const std::function<double(const Point&)>& u0, int threads = 1) const;

    // Legendre coefficients (trace order) of the element-local polynomial.
    Vec local_coeffs(const Vec& dofs, long elem) const;
    void local_coeffs(const Vec& dofs, long elem, double* out) const;
    std::vector<Vec> all_local_coeffs(const Vec& dofs, int threads = 1) const;

    // Pointwise evaluation; side_bias resolves interface points (-1 lower
    // element, +1 upper). Throws InvalidArgumentError outside the domain.
    double eval(const Vec& dofs, const Point& p, int side_bias = -1) const;
    std::array<double, 2> eval_gradient(const Vec& dofs, const Point& p, int side_bias = -1) const;

    // Gram matrix of the reconstruction basis; symmetric positive definite,
    // entries vanish beyond per-direction index distance 2.
    SparseOperator mass_matrix() const;

    double l2_error(const Vec& dofs, const std::function<double(const Point&)>& exact,
                    int points_per_direction = 0) const;
    double h1_seminorm_error(const Vec& dofs,
                             const std::function<std::array<double, 2>(const Point&)>& exact_grad,
                             int points_per_direction = 0) const;
    // Combined L2 distance between per-direction fields q_i (scaled by
    // `scale`) and an exact vector field.
    double l2_error_vector(const std::vector<Vec>& q,
                           const std::function<std::array<double, 2>(const Point&)>& exact,
                           double scale, int points_per_direction = 0) const;

    double total_integral(const Vec& dofs) const; // sum over elements of the cell integral

private:
    TensorMesh mesh_;
    OrderPair order_;
    IndexSet moment_set_, poly_set_;
    std::vector<const ReconstructionTable*> tables_;
    std::vector<std::unique_ptr<ReconstructionTable>> table_pool_;
    std::vector<std::vector<long>> gather_;
};

} // namespace rdg
