#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "rdg/errors.hpp"
#include "rdg/util.hpp"

namespace rdg {

// ============================================================================
// Dense kernels: small matrices (reconstruction systems are at most 36x36).
// ============================================================================

class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static DenseMatrix identity(int n) {
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::vector<double>& data() const { return data_; }

    DenseMatrix transposed() const;
    DenseMatrix multiply(const DenseMatrix& other) const;

    // y = A x (raw pointers so callers can use slices of larger buffers)
    void matvec(const double* x, double* y) const;
    // y = A^T x
    void matvec_transposed(const double* x, double* y) const;

    double max_abs() const;
    double norm1() const; // max column sum

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix kronecker(const DenseMatrix& a, const DenseMatrix& b);

// PA = LU with partial pivoting. Throws SolveError on an exact zero pivot.
class LuFactorization {
public:
    explicit LuFactorization(DenseMatrix a);

    double determinant() const { return det_; }
    double condition1() const; // ||A||_1 * ||A^-1||_1, computed exactly

    Vec solve(const Vec& rhs) const;
    void solve_in_place(double* x) const;
    DenseMatrix inverse() const;

private:
    DenseMatrix lu_;
    std::vector<int> piv_;
    double det_ = 0.0;
    double norm1_a_ = 0.0;
    mutable double cond_ = -1.0;
};

// ============================================================================
// Sparse storage and solvers.
// ============================================================================

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

// Compressed sparse row matrix; column indices sorted and deduplicated.
class SparseOperator {
public:
    SparseOperator() = default;
    static SparseOperator from_triplets(int rows, int cols, std::vector<Triplet> entries,
                                        double drop_tol = 0.0);
    static SparseOperator identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const { return col_.size(); }

    void apply(const Vec& x, Vec& y) const; // y = A x
    Vec apply(const Vec& x) const;

    // (lower, upper) bandwidth of the pattern
    std::pair<int, int> bandwidths() const;

    double max_abs() const;
    // max |A - A^T| entry; pattern asymmetric entries count with full magnitude
    double symmetry_error() const;

    const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_index() const { return col_; }
    const std::vector<double>& values() const { return val_; }
    std::vector<double>& values() { return val_; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<std::size_t> row_ptr_;
    std::vector<int> col_;
    std::vector<double> val_;
};

enum class SolveMethod { Auto, Direct, Iterative };

// Linear solver facade. Direct = banded LU with partial pivoting (used when
// the pattern fits a band within the memory budget); Iterative = BiCGSTAB
// preconditioned with ILU(0). Factorizations are built once at construction
// and reused across solves.
class SparseSolver {
public:
    SparseSolver(const SparseOperator& a, SolveMethod method = SolveMethod::Auto,
                 double tol = 1e-11, long max_iterations = 0);
    ~SparseSolver();
    SparseSolver(SparseSolver&&) noexcept;
    SparseSolver& operator=(SparseSolver&&) noexcept;

    void solve(const Vec& rhs, Vec& x) const; // throws SolveError
    Vec solve(const Vec& rhs) const;

    bool is_direct() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Vec sparse_solve(const SparseOperator& a, const Vec& rhs,
                 SolveMethod method = SolveMethod::Auto, double tol = 1e-11);

} // namespace rdg
