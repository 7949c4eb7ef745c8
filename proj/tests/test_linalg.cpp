#include <doctest.h>

#include <random>

#include "rdg/linalg.hpp"

using namespace rdg;

TEST_CASE("lu: identity") {
    LuFactorization lu(DenseMatrix::identity(4));
    CHECK(lu.determinant() == doctest::Approx(1.0));
    CHECK(lu.condition1() == doctest::Approx(1.0));
}

TEST_CASE("lu: reconstruction system determinant is 24") {
    DenseMatrix a(3, 3);
    const double rows[3][3] = {{1, -2, 6}, {1, 0, 0}, {1, 2, 6}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = rows[i][j];
    LuFactorization lu(a);
    CHECK(lu.determinant() == doctest::Approx(24.0).epsilon(1e-14));
}

TEST_CASE("lu: exact singular matrix throws") {
    DenseMatrix a(2, 2, 1.0);
    CHECK_THROWS_AS(LuFactorization{a}, SolveError);
}

TEST_CASE("lu: solve and inverse on random well-conditioned matrices") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int n : {2, 5, 9, 23, 36}) {
        DenseMatrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = dist(rng) + (i == j ? 3.0 : 0.0);
        Vec x_true(n);
        for (auto& v : x_true) v = dist(rng);
        Vec rhs(n);
        a.matvec(x_true.data(), rhs.data());
        LuFactorization lu(a);
        const Vec x = lu.solve(rhs);
        for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-11));
        const DenseMatrix residual = a.multiply(lu.inverse());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(residual(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
    }
}

TEST_CASE("kronecker determinant multiplicativity") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int n = 3, m = 4;
    DenseMatrix a(n, n), b(m, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = dist(rng) + (i == j ? 2.0 : 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) b(i, j) = dist(rng) + (i == j ? 2.0 : 0.0);
    const double da = LuFactorization(a).determinant();
    const double db = LuFactorization(b).determinant();
    const double dk = LuFactorization(kronecker(a, b)).determinant();
    CHECK(dk == doctest::Approx(std::pow(da, m) * std::pow(db, n)).epsilon(1e-10));
}

TEST_CASE("sparse: triplets are merged and sorted") {
    SparseOperator m = SparseOperator::from_triplets(
        2, 2, {{0, 1, 2.0}, {0, 1, 3.0}, {1, 0, 1.0}, {0, 0, 1.0}});
    CHECK(m.nnz() == 3);
    const Vec y = m.apply({1.0, 1.0});
    CHECK(y[0] == doctest::Approx(6.0));
    CHECK(y[1] == doctest::Approx(1.0));
    CHECK(m.bandwidths() == std::pair<int, int>{1, 1});
}

TEST_CASE("sparse solve: identity returns the rhs") {
    const SparseOperator id = SparseOperator::identity(7);
    const Vec rhs{1, 2, 3, 4, 5, 6, 7};
    for (auto method : {SolveMethod::Direct, SolveMethod::Iterative}) {
        const Vec x = sparse_solve(id, rhs, method);
        for (int i = 0; i < 7; ++i) CHECK(x[i] == doctest::Approx(rhs[i]));
    }
}

namespace {

SparseOperator random_spd_banded(int n, int half_band, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Triplet> trips;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j <= std::min(n - 1, i + half_band); ++j) {
            const double v = dist(rng);
            trips.push_back({i, j, v});
            trips.push_back({j, i, v});
        }
    for (int i = 0; i < n; ++i) trips.push_back({i, i, 2.0 * half_band + 1.0});
    return SparseOperator::from_triplets(n, n, std::move(trips));
}

} // namespace

TEST_CASE("sparse solve: direct and iterative agree on an SPD banded system") {
    std::mt19937 rng(3);
    const SparseOperator a = random_spd_banded(120, 4, rng);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vec rhs(120);
    for (auto& v : rhs) v = dist(rng);
    const Vec xd = sparse_solve(a, rhs, SolveMethod::Direct);
    const Vec xi = sparse_solve(a, rhs, SolveMethod::Iterative, 1e-12);
    for (int i = 0; i < 120; ++i) CHECK(xd[i] == doctest::Approx(xi[i]).epsilon(1e-8));
    const Vec ax = a.apply(xd);
    for (int i = 0; i < 120; ++i) CHECK(ax[i] == doctest::Approx(rhs[i]).epsilon(1e-10));
}

TEST_CASE("sparse solve: iteration cap raises a solve failure") {
    // five-point grid Laplacian: the no-fill factorization is inexact, so a
    // single capped iteration cannot reach the requested residual
    const int g = 24, n = g * g;
    std::vector<Triplet> trips;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            const int r = i * g + j;
            trips.push_back({r, r, 4.0});
            if (i > 0) trips.push_back({r, r - g, -1.0});
            if (i + 1 < g) trips.push_back({r, r + g, -1.0});
            if (j > 0) trips.push_back({r, r - 1, -1.0});
            if (j + 1 < g) trips.push_back({r, r + 1, -1.0});
        }
    const SparseOperator a = SparseOperator::from_triplets(n, n, std::move(trips));
    Vec rhs(n, 1.0);
    SparseSolver capped(a, SolveMethod::Iterative, 1e-14, 1);
    CHECK_THROWS_AS(capped.solve(rhs), SolveError);
}

TEST_CASE("symmetry error detects asymmetric entries") {
    SparseOperator m = SparseOperator::from_triplets(2, 2, {{0, 1, 2.0}, {1, 0, 2.5}});
    CHECK(m.symmetry_error() == doctest::Approx(0.5));
}
