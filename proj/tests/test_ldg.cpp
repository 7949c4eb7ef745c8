#include <doctest.h>

#include <cmath>
#include <random>

#include "rdg/ldg.hpp"
#include "rdg/problems.hpp"

using namespace rdg;

namespace {

constexpr double kPi = 3.14159265358979323846;

double burgers(double u) { return 0.5 * u * u; }
double burgers_du(double u) { return u; }
double ident(double u) { return u; }
double ident_du(double) { return 1.0; }

PdeProblem heat_1d(double eps) {
    PdeProblem p;
    p.dim = 1;
    p.epsilon = eps;
    p.initial = [](const Point& x) { return std::sin(x[0]); };
    return p;
}

} // namespace

TEST_CASE("lax-friedrichs flux: consistency, upwinding, arithmetic") {
    CHECK(lax_friedrichs_flux(0.7, 0.7, burgers, burgers_du) == doctest::Approx(burgers(0.7)));
    // linear advection with positive speed picks the upwind value
    CHECK(lax_friedrichs_flux(1.3, -2.0, ident, ident_du, 1.0) == doctest::Approx(1.3));
    // direct formula arithmetic
    CHECK(lax_friedrichs_flux(1.0, -0.1, burgers, burgers_du) == doctest::Approx(0.8025));
}

TEST_CASE("lax-friedrichs flux: monotone in both arguments") {
    for (double bn : {1.0, -0.8}) {
        for (double um = -1.0; um <= 1.0; um += 0.25)
            for (double up = -1.0; up <= 1.0; up += 0.25) {
                const double d = 1e-6;
                const double base = lax_friedrichs_flux(um, up, burgers, burgers_du, bn);
                CHECK(lax_friedrichs_flux(um + d, up, burgers, burgers_du, bn) >= base - 1e-12);
                CHECK(lax_friedrichs_flux(um, up + d, burgers, burgers_du, bn) <= base + 1e-12);
            }
    }
}

TEST_CASE("diffusion: gradient of a constant vanishes") {
    auto mesh = uniform_mesh(1, {8, 1}, {0, 0}, {2 * kPi, 0}, {true, false});
    RdgSpace space(std::move(mesh), 2);
    LdgSystem sys(space, heat_1d(1.0));
    const Vec u = space.project([](const Point&) { return 2.0; });
    const auto q = sys.solve_gradient(u, 0.0);
    REQUIRE(q.size() == 1);
    for (double v : q[0]) CHECK(v == doctest::Approx(0.0).epsilon(1e-11));
}

TEST_CASE("diffusion: auxiliary gradient approximates sqrt(eps) u_x at order k+1") {
    const double eps = 0.5;
    Vec errs;
    for (int n : {16, 32}) {
        auto mesh = uniform_mesh(1, {n, 1}, {0, 0}, {2 * kPi, 0}, {true, false});
        RdgSpace space(std::move(mesh), 2);
        LdgSystem sys(space, heat_1d(eps));
        const Vec u = space.project([](const Point& x) { return std::sin(x[0]); });
        const auto q = sys.solve_gradient(u, 0.0);
        errs.push_back(space.l2_error(
            q[0], [&](const Point& x) { return std::sqrt(eps) * std::cos(x[0]); }));
    }
    CHECK(std::log2(errs[0] / errs[1]) > 2.6);
}

TEST_CASE("diffusion: discrete adjoint structure under periodic boundaries") {
    for (int dim : {1, 2}) {
        auto mesh = uniform_mesh(dim, {6, 5}, {0, 0}, {1, 2}, {true, true});
        RdgSpace space(std::move(mesh), 2);
        PdeProblem p;
        p.dim = dim;
        p.epsilon = 0.7;
        p.initial = [](const Point&) { return 0.0; };
        LdgSystem sys(space, p);
        for (int d = 0; d < dim; ++d) {
            const SparseOperator& a = sys.diffusion_matrix(d);
            const SparseOperator& b = sys.gradient_matrix(d);
            // A = -B^T entrywise
            double worst = 0.0;
            const auto& rp = a.row_ptr();
            for (int r = 0; r < a.rows(); ++r)
                for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
                    const int c = a.col_index()[k];
                    // find (c, r) in B
                    double bt = 0.0;
                    for (std::size_t kb = b.row_ptr()[c]; kb < b.row_ptr()[c + 1]; ++kb)
                        if (b.col_index()[kb] == r) bt = b.values()[kb];
                    worst = std::max(worst, std::abs(a.values()[k] + bt));
                }
            CHECK(worst < 1e-12 * a.max_abs());
        }
    }
}

TEST_CASE("residual: constant state with constant velocity telescopes to zero") {
    auto mesh = uniform_mesh(2, {5, 5}, {0, 0}, {1, 1}, {true, true});
    RdgSpace space(std::move(mesh), 2);
    PdeProblem p;
    p.dim = 2;
    p.epsilon = 0.0;
    p.velocity = [](const Point&, double* b) { b[0] = 0.8; b[1] = -0.3; };
    p.flux = ident;
    p.flux_deriv = ident_du;
    p.initial = [](const Point&) { return 3.0; };
    LdgSystem sys(space, p);
    const Vec u = space.project(p.initial);
    Vec res;
    sys.explicit_residual(0.0, u, res);
    for (double v : res) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("residual: reaction r(u) = u against a constant state") {
    auto mesh = uniform_mesh(1, {6, 1}, {0, 0}, {3, 0}, {true, false});
    RdgSpace space(std::move(mesh), 2);
    PdeProblem p;
    p.dim = 1;
    p.epsilon = 0.0;
    p.reaction = [](const Point&, double u) { return u; };
    p.initial = [](const Point&) { return 1.0; };
    LdgSystem sys(space, p);
    const Vec ones = space.project(p.initial);
    Vec res;
    sys.explicit_residual(0.0, ones, res);
    const Vec m1 = sys.mass().apply(ones);
    for (long i = 0; i < space.dof_count(); ++i)
        CHECK(res[i] == doctest::Approx(-m1[i]).epsilon(1e-12));
}

TEST_CASE("semidiscrete rhs: manufactured consistency at order k+1") {
    const TestCase& tc = find_problem("1d-test1");
    Vec errs;
    for (int n : {16, 32}) {
        auto mesh = uniform_mesh(1, {n, 1}, tc.lo, tc.hi, {true, false});
        RdgSpace space(std::move(mesh), 2);
        LdgSystem sys(space, tc.pde);
        const Vec u = space.project([&](const Point& x) { return tc.exact(x, 0.0); });
        Vec du_dt;
        std::vector<Vec> q;
        sys.semidiscrete_rhs(0.0, u, du_dt, q);
        errs.push_back(
            space.l2_error(du_dt, [&](const Point& x) { return tc.exact_dt(x, 0.0); }));
    }
    CHECK(std::log2(errs[0] / errs[1]) > 2.5);
}

TEST_CASE("dirichlet: zero data and zero source keep the zero state") {
    auto mesh = uniform_mesh(1, {8, 1}, {0, 0}, {1, 0}, {false, false});
    RdgSpace space(std::move(mesh), 2);
    PdeProblem p;
    p.dim = 1;
    p.epsilon = 0.01;
    p.velocity = [](const Point&, double* b) { b[0] = 1.0; b[1] = 1.0; };
    p.flux = burgers;
    p.flux_deriv = burgers_du;
    auto zero = [](const Point&, double) { return 0.0; };
    p.bc = {BoundaryCondition::dirichlet(zero), BoundaryCondition::periodic()};
    p.initial = [](const Point&) { return 0.0; };
    LdgSystem sys(space, p);
    Vec u(space.dof_count(), 0.0);
    Vec du_dt;
    std::vector<Vec> q;
    sys.semidiscrete_rhs(0.0, u, du_dt, q);
    for (double v : du_dt) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("boundary condition validation") {
    auto mesh = uniform_mesh(1, {4, 1}, {0, 0}, {1, 0}, {false, false});
    RdgSpace space(std::move(mesh), 2);
    PdeProblem p;
    p.dim = 1;
    p.epsilon = 1.0;
    p.initial = [](const Point&) { return 0.0; };
    // periodic problem on a non-periodic mesh
    CHECK_THROWS_AS(LdgSystem(space, p), InvalidArgumentError);
}

TEST_CASE("residual is independent of the thread count") {
    const TestCase& tc = find_problem("2d-test2");
    auto mesh = uniform_mesh(2, {6, 6}, tc.lo, tc.hi, {true, true});
    RdgSpace space(std::move(mesh), 2);
    LdgSystem sys1(space, tc.pde, 1e-11, 1);
    LdgSystem sys4(space, tc.pde, 1e-11, 4);
    const Vec u = space.project([&](const Point& x) { return tc.exact(x, 0.0); });
    Vec r1, r4;
    sys1.explicit_residual(0.3, u, r1);
    sys4.explicit_residual(0.3, u, r4);
    for (long i = 0; i < space.dof_count(); ++i) CHECK(r1[i] == r4[i]);
}
