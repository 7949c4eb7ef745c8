#pragma once

#include "rdg/linalg.hpp"
#include "rdg/mesh.hpp"
#include "rdg/polynomials.hpp"

namespace rdg {

// Order pair of the reduced space: polynomials of degree k per variable are
// rebuilt from moments of order m on the 3-wide stencil, with k+1 = 3(m+1).
struct OrderPair {
    int k = 2;
    int m = 0;
    int dim = 1;

    int poly_count() const; // (k+1)^dim
    int moment_count() const; // (m+1)^dim
    int stencil_size() const; // 3^dim
};

// Supported pairs: (k, m) in {(2,0), (5,1)}. Throws InvalidArgumentError.
OrderPair make_order_pair(int k, int dim);

// Square moment matrix of the local reconstruction system. Rows are blocked
// by stencil member (stencil order) with moments in trace order inside each
// block; columns run over the owner's Legendre coefficients in trace order.
DenseMatrix moment_matrix(const TensorMesh& mesh, const ElementId& elem, const OrderPair& op);
DenseMatrix moment_matrix(const TensorMesh& mesh, const Stencil& stencil, const OrderPair& op);

// Closed-form determinant for the assembled stencil (per-direction formulas;
// in 2D the product of the 1D determinants raised to the (k+1)th power).
double stencil_determinant_oracle(const TensorMesh& mesh, const Stencil& stencil,
                                  const OrderPair& op);

struct WellposednessReport {
    double determinant = 0.0;
    double condition = 0.0;
    double oracle = 0.0;       // closed-form |det|
    double rel_deviation = 0.0; // | |det| - oracle | / oracle
    bool ok = false;           // condition below the singularity threshold
};

// Condition threshold above which the system is declared singular.
inline constexpr double kSingularConditionLimit = 1e12;

WellposednessReport check_wellposedness(const TensorMesh& mesh, const ElementId& elem,
                                        const OrderPair& op);

// Map from stencil moment values (member-major, trace order) to the owner's
// Legendre coefficients (trace order). Stored as an explicit inverse; these
// matrices are at most 36x36 and reused every residual evaluation.
struct ReconstructionTable {
    DenseMatrix inverse;
    double determinant = 0.0;
    double condition = 0.0;

    // coeffs = inverse * moments
    void apply(const double* moments, double* coeffs) const {
        inverse.matvec(moments, coeffs);
    }
};

// Throws SingularMatrixError when the condition estimate exceeds
// kSingularConditionLimit.
ReconstructionTable build_reconstruction_table(const TensorMesh& mesh, const ElementId& elem,
                                               const OrderPair& op);

} // namespace rdg
