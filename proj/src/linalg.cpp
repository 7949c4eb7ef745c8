#include "rdg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rdg {

// ============================================================================
// DenseMatrix
// ============================================================================

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& other) const {
    DenseMatrix r(rows_, other.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (int j = 0; j < other.cols_; ++j) r(i, j) += a * other(k, j);
        }
    return r;
}

void DenseMatrix::matvec(const double* x, double* y) const {
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        const double* row = data_.data() + static_cast<std::size_t>(i) * cols_;
        for (int j = 0; j < cols_; ++j) s += row[j] * x[j];
        y[i] = s;
    }
}

void DenseMatrix::matvec_transposed(const double* x, double* y) const {
    for (int j = 0; j < cols_; ++j) y[j] = 0.0;
    for (int i = 0; i < rows_; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* row = data_.data() + static_cast<std::size_t>(i) * cols_;
        for (int j = 0; j < cols_; ++j) y[j] += row[j] * xi;
    }
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double DenseMatrix::norm1() const {
    double m = 0.0;
    for (int j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
        m = std::max(m, s);
    }
    return m;
}

DenseMatrix kronecker(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (int ia = 0; ia < a.rows(); ++ia)
        for (int ja = 0; ja < a.cols(); ++ja) {
            const double av = a(ia, ja);
            if (av == 0.0) continue;
            for (int ib = 0; ib < b.rows(); ++ib)
                for (int jb = 0; jb < b.cols(); ++jb)
                    k(ia * b.rows() + ib, ja * b.cols() + jb) = av * b(ib, jb);
        }
    return k;
}

// ============================================================================
// LuFactorization
// ============================================================================

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)) {
    if (lu_.rows() != lu_.cols())
        throw InvalidArgumentError("lu_factor: matrix must be square");
    const int n = lu_.rows();
    norm1_a_ = lu_.norm1();
    piv_.resize(n);
    det_ = 1.0;
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(lu_(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        piv_[k] = p;
        if (best == 0.0) throw SolveError("lu_factor: exact singular matrix (zero pivot)");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            det_ = -det_;
        }
        det_ *= lu_(k, k);
        const double inv_pivot = 1.0 / lu_(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double l = lu_(i, k) * inv_pivot;
            lu_(i, k) = l;
            if (l == 0.0) continue;
            for (int j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
        }
    }
}

void LuFactorization::solve_in_place(double* x) const {
    // rows were swapped in full during factorization, so apply all
    // interchanges first, then clean triangular solves
    const int n = lu_.rows();
    for (int k = 0; k < n; ++k)
        if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
    for (int k = 0; k < n; ++k)
        for (int i = k + 1; i < n; ++i) x[i] -= lu_(i, k) * x[k];
    for (int k = n - 1; k >= 0; --k) {
        for (int j = k + 1; j < n; ++j) x[k] -= lu_(k, j) * x[j];
        x[k] /= lu_(k, k);
    }
}

Vec LuFactorization::solve(const Vec& rhs) const {
    Vec x = rhs;
    solve_in_place(x.data());
    return x;
}

DenseMatrix LuFactorization::inverse() const {
    const int n = lu_.rows();
    DenseMatrix inv(n, n);
    Vec col(n);
    for (int j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = 1.0;
        solve_in_place(col.data());
        for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

double LuFactorization::condition1() const {
    if (cond_ < 0.0) cond_ = norm1_a_ * inverse().norm1();
    return cond_;
}

// ============================================================================
// SparseOperator
// ============================================================================

SparseOperator SparseOperator::from_triplets(int rows, int cols, std::vector<Triplet> entries,
                                             double drop_tol) {
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseOperator m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(rows + 1, 0);
    m.col_.reserve(entries.size());
    m.val_.reserve(entries.size());
    std::size_t i = 0;
    for (int r = 0; r < rows; ++r) {
        while (i < entries.size() && entries[i].row == r) {
            const int c = entries[i].col;
            double v = 0.0;
            while (i < entries.size() && entries[i].row == r && entries[i].col == c)
                v += entries[i++].value;
            if (std::abs(v) > drop_tol || c == r) {
                m.col_.push_back(c);
                m.val_.push_back(v);
            }
        }
        m.row_ptr_[r + 1] = m.col_.size();
    }
    return m;
}

SparseOperator SparseOperator::identity(int n) {
    std::vector<Triplet> t(n);
    for (int i = 0; i < n; ++i) t[i] = {i, i, 1.0};
    return from_triplets(n, n, std::move(t));
}

void SparseOperator::apply(const Vec& x, Vec& y) const {
    y.assign(rows_, 0.0);
    for (int r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += val_[k] * x[col_[k]];
        y[r] = s;
    }
}

Vec SparseOperator::apply(const Vec& x) const {
    Vec y;
    apply(x, y);
    return y;
}

std::pair<int, int> SparseOperator::bandwidths() const {
    int lower = 0, upper = 0;
    for (int r = 0; r < rows_; ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            lower = std::max(lower, r - col_[k]);
            upper = std::max(upper, col_[k] - r);
        }
    return {lower, upper};
}

double SparseOperator::max_abs() const {
    double m = 0.0;
    for (double v : val_) m = std::max(m, std::abs(v));
    return m;
}

double SparseOperator::symmetry_error() const {
    double worst = 0.0;
    for (int r = 0; r < rows_; ++r) {
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            const int c = col_[k];
            // binary search for (c, r)
            const auto b = col_.begin() + static_cast<long>(row_ptr_[c]);
            const auto e = col_.begin() + static_cast<long>(row_ptr_[c + 1]);
            const auto it = std::lower_bound(b, e, r);
            const double vt = (it != e && *it == r) ? val_[static_cast<std::size_t>(it - col_.begin())] : 0.0;
            worst = std::max(worst, std::abs(val_[k] - vt));
        }
    }
    return worst;
}

// ============================================================================
// Banded LU (LAPACK gbtrf-style storage with kl extra rows for pivot fill)
// ============================================================================

namespace {

class BandLu {
public:
    BandLu(const SparseOperator& a, int kl, int ku)
        : n_(a.rows()), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
          ab_(static_cast<std::size_t>(ldab_) * n_, 0.0), piv_(n_) {
        const auto& rp = a.row_ptr();
        const auto& ci = a.col_index();
        const auto& vv = a.values();
        for (int r = 0; r < n_; ++r)
            for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) at(r, ci[k]) = vv[k];
        factor();
    }

    void solve(Vec& x) const {
        for (int j = 0; j < n_; ++j) {
            if (piv_[j] != j) std::swap(x[j], x[piv_[j]]);
            const int iend = std::min(n_ - 1, j + kl_);
            for (int i = j + 1; i <= iend; ++i) x[i] -= at_c(i, j) * x[j];
        }
        for (int j = n_ - 1; j >= 0; --j) {
            const int cend = std::min(n_ - 1, j + kl_ + ku_);
            double s = x[j];
            for (int c = j + 1; c <= cend; ++c) s -= at_c(j, c) * x[c];
            x[j] = s / at_c(j, j);
        }
    }

private:
    // storage row index for entry (i, j): kl + ku + i - j, valid while
    // -(kl+ku) <= i - j <= kl
    double& at(int i, int j) { return ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)]; }
    double at_c(int i, int j) const {
        return ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)];
    }

    void factor() {
        for (int j = 0; j < n_; ++j) {
            const int iend = std::min(n_ - 1, j + kl_);
            int p = j;
            double best = std::abs(at_c(j, j));
            for (int i = j + 1; i <= iend; ++i) {
                const double v = std::abs(at_c(i, j));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (best == 0.0) throw SolveError("band_lu: exact singular matrix");
            piv_[j] = p;
            const int cend = std::min(n_ - 1, j + kl_ + ku_);
            if (p != j)
                for (int c = j; c <= cend; ++c) std::swap(at(j, c), at(p, c));
            const double inv_pivot = 1.0 / at_c(j, j);
            for (int i = j + 1; i <= iend; ++i) {
                const double l = at_c(i, j) * inv_pivot;
                at(i, j) = l;
                if (l == 0.0) continue;
                for (int c = j + 1; c <= cend; ++c) at(i, c) -= l * at_c(j, c);
            }
        }
    }

    int n_, kl_, ku_, ldab_;
    std::vector<double> ab_;
    std::vector<int> piv_;
};

// ILU(0): incomplete LU on the existing pattern, used as a preconditioner.
class Ilu0 {
public:
    explicit Ilu0(const SparseOperator& a)
        : n_(a.rows()), row_ptr_(a.row_ptr()), col_(a.col_index()), val_(a.values()), diag_(n_) {
        for (int r = 0; r < n_; ++r) {
            diag_[r] = find(r, r);
            if (diag_[r] < 0 || val_[diag_[r]] == 0.0)
                throw SolveError("ilu0: zero or missing diagonal");
        }
        for (int i = 1; i < n_; ++i) {
            for (std::size_t kk = row_ptr_[i]; kk < row_ptr_[i + 1]; ++kk) {
                const int k = col_[kk];
                if (k >= i) break;
                const double pivot = val_[diag_[k]];
                if (pivot == 0.0) throw SolveError("ilu0: zero pivot");
                const double lik = val_[kk] / pivot;
                val_[kk] = lik;
                for (std::size_t kj = static_cast<std::size_t>(diag_[k]) + 1; kj < row_ptr_[k + 1];
                     ++kj) {
                    const long pos = find(i, col_[kj]);
                    if (pos >= 0) val_[pos] -= lik * val_[kj];
                }
            }
            if (val_[diag_[i]] == 0.0) throw SolveError("ilu0: zero pivot");
        }
    }

    void apply(const Vec& r, Vec& z) const {
        z = r;
        for (int i = 0; i < n_; ++i)
            for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1] && col_[k] < i; ++k)
                z[i] -= val_[k] * z[col_[k]];
        for (int i = n_ - 1; i >= 0; --i) {
            double s = z[i];
            for (std::size_t k = static_cast<std::size_t>(diag_[i]) + 1; k < row_ptr_[i + 1]; ++k)
                s -= val_[k] * z[col_[k]];
            z[i] = s / val_[diag_[i]];
        }
    }

private:
    long find(int r, int c) const {
        const auto b = col_.begin() + static_cast<long>(row_ptr_[r]);
        const auto e = col_.begin() + static_cast<long>(row_ptr_[r + 1]);
        const auto it = std::lower_bound(b, e, c);
        if (it == e || *it != c) return -1;
        return it - col_.begin();
    }

    int n_;
    std::vector<std::size_t> row_ptr_;
    std::vector<int> col_;
    std::vector<double> val_;
    std::vector<long> diag_;
};

} // namespace

// ============================================================================
// SparseSolver
// ============================================================================

struct SparseSolver::Impl {
    SparseOperator a;
    double tol = 1e-11;
    long max_iter = 0;
    std::unique_ptr<BandLu> band;
    std::unique_ptr<Ilu0> ilu;

    void solve_iterative(const Vec& rhs, Vec& x) const {
        const int n = a.rows();
        x.assign(n, 0.0);
        const double bnorm = norm2(rhs);
        if (bnorm == 0.0) return;

        Vec r = rhs; // r = b - A*0
        Vec rhat = r, p(n, 0.0), v(n, 0.0), s(n), t(n), phat(n), shat(n);
        double rho = 1.0, alpha = 1.0, omega = 1.0;
        const long itmax = max_iter > 0 ? max_iter : std::max<long>(4000, 8L * n);
        for (long it = 0; it < itmax; ++it) {
            const double rho1 = dot(rhat, r);
            if (std::abs(rho1) < 1e-300) {
                // restart with the current residual
                rhat = r;
                p = r;
                rho = dot(rhat, r);
                omega = alpha = 1.0;
                std::fill(v.begin(), v.end(), 0.0);
                if (std::abs(rho) < 1e-300) break;
            } else {
                const double beta = (rho1 / rho) * (alpha / omega);
                for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
                rho = rho1;
            }
            ilu->apply(p, phat);
            a.apply(phat, v);
            const double rv = dot(rhat, v);
            if (std::abs(rv) < 1e-300) throw SolveError("bicgstab: breakdown (rhat.v = 0)");
            alpha = rho / rv;
            for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
            if (norm2(s) <= tol * bnorm) {
                axpy(alpha, phat, x);
                if (check(rhs, x, bnorm)) return;
            }
            ilu->apply(s, shat);
            a.apply(shat, t);
            const double tt = dot(t, t);
            if (tt == 0.0) throw SolveError("bicgstab: breakdown (t = 0)");
            omega = dot(t, s) / tt;
            for (int i = 0; i < n; ++i) x[i] += alpha * phat[i] + omega * shat[i];
            for (int i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
            if (norm2(r) <= tol * bnorm && check(rhs, x, bnorm)) return;
            if (omega == 0.0) throw SolveError("bicgstab: breakdown (omega = 0)");
        }
        if (!check(rhs, x, bnorm, 10.0))
            throw SolveError("bicgstab: not converged within iteration limit");
    }

    bool check(const Vec& rhs, const Vec& x, double bnorm, double slack = 1.0) const {
        Vec ax;
        a.apply(x, ax);
        double s = 0.0;
        for (std::size_t i = 0; i < ax.size(); ++i) {
            const double d = rhs[i] - ax[i];
            s += d * d;
        }
        return std::sqrt(s) <= slack * tol * bnorm;
    }
};

SparseSolver::SparseSolver(const SparseOperator& a, SolveMethod method, double tol,
                           long max_iterations)
    : impl_(std::make_unique<Impl>()) {
    if (a.rows() != a.cols()) throw InvalidArgumentError("sparse_solver: matrix must be square");
    impl_->a = a;
    impl_->tol = tol;
    impl_->max_iter = max_iterations;

    const auto [kl, ku] = a.bandwidths();
    const std::size_t band_mem =
        static_cast<std::size_t>(2 * kl + ku + 1) * static_cast<std::size_t>(a.rows());
    const bool band_feasible = band_mem <= 40u * 1000u * 1000u; // ~320 MB of doubles
    if (method == SolveMethod::Direct && !band_feasible)
        throw InvalidArgumentError("sparse_solver: direct factorization exceeds the band budget");
    // A wide band (periodic wraparound) makes banded elimination cost
    // n*(kl+ku)^2; prefer the preconditioned iteration unless the band is
    // narrow or the system is small.
    const bool band_narrow = kl + ku + 1 <= std::max(600, a.rows() / 3);
    const bool direct = (method == SolveMethod::Direct) ||
                        (method == SolveMethod::Auto && band_feasible && band_narrow);
    if (direct)
        impl_->band = std::make_unique<BandLu>(a, kl, ku);
    else
        impl_->ilu = std::make_unique<Ilu0>(a);
}

SparseSolver::~SparseSolver() = default;
SparseSolver::SparseSolver(SparseSolver&&) noexcept = default;
SparseSolver& SparseSolver::operator=(SparseSolver&&) noexcept = default;

bool SparseSolver::is_direct() const { return impl_->band != nullptr; }

void SparseSolver::solve(const Vec& rhs, Vec& x) const {
    if (static_cast<int>(rhs.size()) != impl_->a.rows())
        throw InvalidArgumentError("sparse_solver: rhs size mismatch");
    if (impl_->band) {
        x = rhs;
        impl_->band->solve(x);
        return;
    }
    impl_->solve_iterative(rhs, x);
}

Vec SparseSolver::solve(const Vec& rhs) const {
    Vec x;
    solve(rhs, x);
    return x;
}

Vec sparse_solve(const SparseOperator& a, const Vec& rhs, SolveMethod method, double tol) {
    return SparseSolver(a, method, tol).solve(rhs);
}

} // namespace rdg
