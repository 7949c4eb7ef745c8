#include <doctest.h>

#include <cmath>
#include <random>

#include "rdg/rdg_space.hpp"

using namespace rdg;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("space: dimension law N (m+1)^d = N (k+1)^d / 3^d") {
    for (int k : {2, 5})
        for (int dim : {1, 2}) {
            const int n = 6;
            auto mesh = uniform_mesh(dim, {n, n}, {0, 0}, {1, 1}, {true, true});
            RdgSpace space(std::move(mesh), k);
            const long n_elem = space.mesh().element_count();
            const long full = n_elem * space.orders().poly_count();
            CHECK(space.dof_count() == n_elem * space.orders().moment_count());
            CHECK(space.dof_count() * (dim == 2 ? 9 : 3) == full);
        }
}

TEST_CASE("project: constants and single basis functions") {
    auto mesh = uniform_mesh(1, {6, 1}, {0, 0}, {3, 0}, {true, false});
    RdgSpace space(std::move(mesh), 5);
    const Vec c = space.project([](const Point&) { return 4.25; });
    for (long e = 0; e < 6; ++e) {
        CHECK(c[space.dof_index(e, 0)] == doctest::Approx(4.25));
        CHECK(c[space.dof_index(e, 1)] == doctest::Approx(0.0));
    }
    // a single first-moment basis bump on element 2
    const ElementGeometry g = element_geometry(space.mesh(), space.mesh().element(2));
    const Vec d = space.project([&](const Point& x) {
        if (x[0] < g.center[0] - 0.5 * g.size[0] || x[0] > g.center[0] + 0.5 * g.size[0])
            return 0.0;
        return scaled_basis_value(g, space.moment_indices()[1], x);
    });
    for (long e = 0; e < 6; ++e)
        for (int a = 0; a < 2; ++a)
            CHECK(d[space.dof_index(e, a)] ==
                  doctest::Approx(e == 2 && a == 1 ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("project: mean of sin over the first cell") {
    auto mesh = uniform_mesh(1, {16, 1}, {0, 0}, {2 * kPi, 0}, {true, false});
    RdgSpace space(std::move(mesh), 2);
    const Vec dofs = space.project([](const Point& x) { return std::sin(x[0]); });
    const double expected = (8.0 / kPi) * (1.0 - std::cos(kPi / 8.0));
    CHECK(dofs[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("local polynomial: projecting x reproduces x on interior elements") {
    auto mesh = uniform_mesh(1, {8, 1}, {0, 0}, {8, 0}, {false, false});
    RdgSpace space(std::move(mesh), 2);
    const Vec dofs = space.project([](const Point& x) { return x[0]; });
    for (double x : {0.4, 2.3, 4.5, 7.9}) {
        CHECK(space.eval(dofs, {x, 0}) == doctest::Approx(x).epsilon(1e-12));
        CHECK(space.eval_gradient(dofs, {x, 0})[0] == doctest::Approx(1.0).epsilon(1e-11));
    }
    const Vec zero(space.dof_count(), 0.0);
    CHECK(space.eval(zero, {1.0, 0}) == doctest::Approx(0.0));
}

TEST_CASE("local polynomial and eval are linear in the dofs") {
    auto mesh = uniform_mesh(2, {4, 4}, {0, 0}, {1, 1}, {true, true});
    RdgSpace space(std::move(mesh), 2);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vec a(space.dof_count()), b(space.dof_count()), combo(space.dof_count());
    for (long i = 0; i < space.dof_count(); ++i) {
        a[i] = dist(rng);
        b[i] = dist(rng);
        combo[i] = 2.5 * a[i] - 1.25 * b[i];
    }
    for (const Point p : {Point{0.31, 0.77}, Point{0.5, 0.201}}) {
        const double lhs = space.eval(combo, p);
        const double rhs = 2.5 * space.eval(a, p) - 1.25 * space.eval(b, p);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("mass matrix: symmetric positive definite with the expected pattern") {
    auto mesh = uniform_mesh(1, {8, 1}, {0, 0}, {2 * kPi, 0}, {true, false});
    RdgSpace space(std::move(mesh), 2);
    const SparseOperator m = space.mass_matrix();
    CHECK(m.symmetry_error() < 1e-12 * m.max_abs());
    // interior row: 5 (m+1) nonzero columns
    const auto& rp = m.row_ptr();
    CHECK(rp[4] - rp[3] == 5);
    // positive definiteness via dense Cholesky (no pivoting)
    const int n = m.rows();
    DenseMatrix dense(n, n);
    for (int r = 0; r < n; ++r)
        for (std::size_t k = rp[r]; k < rp[r + 1]; ++k)
            dense(r, m.col_index()[k]) = m.values()[k];
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < k; ++j)
            for (int i = k; i < n; ++i) dense(i, k) -= dense(i, j) * dense(k, j);
        REQUIRE(dense(k, k) > 0.0);
        const double s = std::sqrt(dense(k, k));
        for (int i = k; i < n; ++i) dense(i, k) /= s;
    }
    // constants integrate to the domain measure: 1^T M 1 = |domain|
    const Vec ones(space.dof_count(), 1.0);
    const Vec m1 = m.apply(ones);
    CHECK(dot(ones, m1) == doctest::Approx(2 * kPi).epsilon(1e-12));
}

TEST_CASE("mass matrix: 2d constants reproduce the measure") {
    auto mesh = uniform_mesh(2, {4, 5}, {0, 0}, {2, 3}, {true, true});
    RdgSpace space(std::move(mesh), 2);
    const SparseOperator m = space.mass_matrix();
    Vec pattern(space.dof_count(), 0.0);
    for (long e = 0; e < space.mesh().element_count(); ++e) pattern[space.dof_index(e, 0)] = 1.0;
    CHECK(dot(pattern, m.apply(pattern)) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("moment round trip: recomputing moments of the reconstruction returns the dofs") {
    for (int dim : {1, 2}) {
        auto mesh = uniform_mesh(dim, {5, 4}, {0, 0}, {1, 1}, {true, true});
        RdgSpace space(std::move(mesh), 5);
        std::mt19937 rng(77);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Vec dofs(space.dof_count());
        for (auto& v : dofs) v = dist(rng);
        const std::vector<Vec> coeffs = space.all_local_coeffs(dofs);
        const QuadratureRule rule = gauss_rule(7);
        const int mc = space.dofs_per_element();
        for (long e = 0; e < space.mesh().element_count(); ++e) {
            const ElementGeometry g = element_geometry(space.mesh(), space.mesh().element(e));
            for (int a = 0; a < mc; ++a) {
                const double recomputed = moment(
                    g, space.moment_indices()[a],
                    [&](const Point& x) {
                        double v = 0.0;
                        for (int b = 0; b < space.poly_indices().size(); ++b)
                            v += coeffs[e][b] * scaled_basis_value(g, space.poly_indices()[b], x);
                        return v;
                    },
                    rule);
                CHECK(recomputed == doctest::Approx(dofs[space.dof_index(e, a)]).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("l2 error: projection of sin converges at order k+1") {
    double prev = 0.0;
    for (int i = 0; i < 2; ++i) {
        const int n = 16 << i;
        auto mesh = uniform_mesh(1, {n, 1}, {0, 0}, {2 * kPi, 0}, {true, false});
        RdgSpace space(std::move(mesh), 2);
        const Vec dofs = space.project([](const Point& x) { return std::sin(x[0]); });
        const double err = space.l2_error(dofs, [](const Point& x) { return std::sin(x[0]); });
        if (i == 1) CHECK(prev / err == doctest::Approx(8.0).epsilon(0.15));
        prev = err;
    }
}

TEST_CASE("reconstruction error study: L2 rate k+1 and H1 rate k") {
    for (int k : {2, 5}) {
        Vec l2err, h1err;
        for (int n : {16, 32, 64}) {
            auto mesh = uniform_mesh(1, {n, 1}, {0, 0}, {2 * kPi, 0}, {true, false});
            RdgSpace space(std::move(mesh), k);
            const Vec dofs = space.project([](const Point& x) { return std::sin(x[0]); });
            l2err.push_back(space.l2_error(dofs, [](const Point& x) { return std::sin(x[0]); }));
            h1err.push_back(space.h1_seminorm_error(dofs, [](const Point& x) {
                return std::array<double, 2>{std::cos(x[0]), 0.0};
            }));
        }
        const double rate_l2 = std::log2(l2err[1] / l2err[2]);
        const double rate_h1 = std::log2(h1err[1] / h1err[2]);
        CHECK(rate_l2 == doctest::Approx(k + 1.0).epsilon(0.04));
        CHECK(rate_h1 == doctest::Approx(static_cast<double>(k)).epsilon(0.04));
        // a polynomial that lies in the space is reproduced to machine precision
        auto mesh = uniform_mesh(1, {16, 1}, {0, 0}, {2 * kPi, 0}, {false, false});
        RdgSpace space(std::move(mesh), k);
        const Vec dofs = space.project([](const Point& x) { return 1.0 + x[0] * x[0]; });
        CHECK(space.l2_error(dofs, [](const Point& x) { return 1.0 + x[0] * x[0]; }) < 1e-11);
    }
}

TEST_CASE("total integral uses the mean moments") {
    auto mesh = uniform_mesh(1, {5, 1}, {0, 0}, {10, 0}, {true, false});
    RdgSpace space(std::move(mesh), 2);
    const Vec dofs = space.project([](const Point& x) { return 3.0 + std::sin(x[0]); });
    CHECK(space.total_integral(dofs) ==
          doctest::Approx(30.0 + (1.0 - std::cos(10.0))).epsilon(1e-6));
}

TEST_CASE("threaded evaluation matches single-threaded") {
    auto mesh = uniform_mesh(2, {6, 6}, {0, 0}, {1, 1}, {true, true});
    RdgSpace space(std::move(mesh), 2);
    const Vec d1 = space.project([](const Point& x) { return std::sin(3 * x[0]) * x[1]; }, 1);
    const Vec d4 = space.project([](const Point& x) { return std::sin(3 * x[0]) * x[1]; }, 4);
    REQUIRE(d1.size() == d4.size());
    for (std::size_t i = 0; i < d1.size(); ++i) CHECK(d1[i] == d4[i]);
}
