#pragma once

#include <array>
#include <functional>
#include <vector>

#include "rdg/errors.hpp"
#include "rdg/mesh.hpp"

namespace rdg {

// ============================================================================
// Legendre polynomials on [-1, 1], normalized so L^k(1) = 1.
// ============================================================================

// Value of order-k polynomial (three-term recurrence).
double legendre_value(int k, double x);

// Values of orders 0..k into out[0..k].
void legendre_values(int k, double x, double* out);

// Derivatives of orders 0..k into out[0..k] (recurrence L'_n = L'_{n-2} + (2n-1) L_{n-1}).
void legendre_derivatives(int k, double x, double* out);

// ============================================================================
// Gauss-Legendre quadrature on [-1, 1].
// ============================================================================

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int size() const { return static_cast<int>(nodes.size()); }
};

// n-point rule, exact for polynomials of degree <= 2n-1.
QuadratureRule gauss_rule(int n);

// ============================================================================
// Multi-indices and trace-ordered index sets.
// ============================================================================

struct MultiIndex {
    std::array<int, 2> a{0, 0};
    int dim = 1;

    int operator[](int d) const { return a[d]; }
    int trace() const { return a[0] + (dim == 2 ? a[1] : 0); }
    bool operator==(const MultiIndex& o) const { return dim == o.dim && a == o.a; }
};

// All alpha with 0 <= alpha_i <= order, sorted by ascending trace
// (ties broken lexicographically). Size (order+1)^dim.
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(int order, int dim);

    int order() const { return order_; }
    int dim() const { return dim_; }
    int size() const { return static_cast<int>(list_.size()); }
    const MultiIndex& operator[](int i) const { return list_[i]; }
    const std::vector<MultiIndex>& all() const { return list_; }

private:
    int order_ = 0, dim_ = 1;
    std::vector<MultiIndex> list_;
};

// ============================================================================
// Scaled element bases and Legendre moments.
// ============================================================================

// Geometry of one element; decouples basis evaluation from the mesh.
struct ElementGeometry {
    int dim = 1;
    std::array<double, 2> center{0.0, 0.0};
    std::array<double, 2> size{1.0, 1.0};

    double ref_coord(int d, double x) const { return 2.0 * (x - center[d]) / size[d]; }
};

ElementGeometry element_geometry(const TensorMesh& mesh, const ElementId& e);

// Product of per-direction scaled Legendre polynomials at x.
double scaled_basis_value(const ElementGeometry& g, const MultiIndex& alpha, const Point& x);

// d/dx_i of the scaled basis at x.
double scaled_basis_derivative(const ElementGeometry& g, const MultiIndex& alpha, const Point& x,
                               int dir);

// Legendre moment of f on the element: the (prod_i (2 alpha_i + 1)/h_i)-scaled
// projection, evaluated with the tensor product of `rule` per direction.
double moment(const ElementGeometry& g, const MultiIndex& alpha,
              const std::function<double(const Point&)>& f, const QuadratureRule& rule);

// Default quadrature point count per direction for order-k spaces: exact
// through degree 2k+3 so polynomial integrands carry no quadrature error.
inline int default_quadrature_points(int k) { return k + 2; }

} // namespace rdg
