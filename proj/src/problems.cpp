#include "rdg/problems.hpp"

#include <cmath>

namespace rdg {

namespace {

constexpr double kPi = 3.14159265358979323846;

void unit_velocity(const Point&, double* b) {
    b[0] = 1.0;
    b[1] = 1.0;
}

double identity_flux(double u) { return u; }
double identity_flux_deriv(double) { return 1.0; }
double burgers_flux(double u) { return 0.5 * u * u; }
double burgers_flux_deriv(double u) { return u; }

TestCase linear_1d() {
    TestCase tc;
    tc.name = "1d-test1";
    tc.description = "linear convection-diffusion, travelling sine wave";
    tc.dim = 1;
    tc.lo = {0.0, 0.0};
    tc.hi = {2.0 * kPi, 0.0};
    tc.pde.dim = 1;
    tc.pde.epsilon = 1.0;
    tc.pde.velocity = unit_velocity;
    tc.pde.flux = identity_flux;
    tc.pde.flux_deriv = identity_flux_deriv;
    tc.pde.source = [](const Point& x, double t) { return std::sin(x[0] - t); };
    tc.pde.initial = [](const Point& x) { return std::sin(x[0]); };
    tc.pde.bc = {BoundaryCondition::periodic(), BoundaryCondition::periodic()};
    tc.has_exact = true;
    tc.exact = [](const Point& x, double t) { return std::sin(x[0] - t); };
    tc.exact_gradient = [](const Point& x, double t) {
        return std::array<double, 2>{std::cos(x[0] - t), 0.0};
    };
    tc.exact_dt = [](const Point& x, double t) { return -std::cos(x[0] - t); };
    tc.exact_laplacian = [](const Point& x, double t) { return -std::sin(x[0] - t); };
    tc.default_cfl = 1.0;
    return tc;
}

TestCase burgers_1d() {
    TestCase tc = linear_1d();
    tc.name = "1d-test2";
    tc.description = "Burgers convection-diffusion, travelling sine wave";
    tc.lo = {-kPi, 0.0};
    tc.hi = {kPi, 0.0};
    tc.pde.flux = burgers_flux;
    tc.pde.flux_deriv = burgers_flux_deriv;
    // u_t + u u_x - u_xx with u = sin(x-t)
    tc.pde.source = [](const Point& x, double t) {
        const double s = x[0] - t;
        return -std::cos(s) + std::sin(s) * std::cos(s) + std::sin(s);
    };
    return tc;
}

TestCase travelling_wave_1d() {
    TestCase tc;
    tc.name = "1d-test3";
    tc.description = "bistable reaction-diffusion travelling tanh front";
    tc.dim = 1;
    tc.lo = {-1.0, 0.0};
    tc.hi = {1.0, 0.0};
    const double nu = 0.1; // diffusion nu^2 = 0.01
    const double speed = 3.0 * nu / std::sqrt(2.0);
    const double width = 2.0 * std::sqrt(2.0) * nu;
    auto profile = [=](const Point& x, double t) {
        return 0.5 * (1.0 - std::tanh((x[0] - speed * t) / width));
    };
    tc.pde.dim = 1;
    tc.pde.epsilon = nu * nu;
    tc.pde.reaction = [](const Point&, double u) { return u * u * u - u; };
    tc.pde.initial = [=](const Point& x) { return profile(x, 0.0); };
    tc.pde.bc = {BoundaryCondition::dirichlet(profile), BoundaryCondition::periodic()};
    tc.has_exact = true;
    tc.exact = profile;
    tc.exact_gradient = [=](const Point& x, double t) {
        const double th = std::tanh((x[0] - speed * t) / width);
        return std::array<double, 2>{-0.5 * (1.0 - th * th) / width, 0.0};
    };
    tc.exact_dt = [=](const Point& x, double t) {
        const double th = std::tanh((x[0] - speed * t) / width);
        return 0.5 * speed * (1.0 - th * th) / width;
    };
    tc.exact_laplacian = [=](const Point& x, double t) {
        const double th = std::tanh((x[0] - speed * t) / width);
        return th * (1.0 - th * th) / (8.0 * nu * nu);
    };
    tc.default_cfl = 1.0;
    tc.feature_length = nu;
    return tc;
}

TestCase layer_burgers_1d() {
    TestCase tc;
    tc.name = "1d-test4";
    tc.description = "viscous Burgers with step data and cosine reaction";
    tc.dim = 1;
    tc.lo = {0.0, 0.0};
    tc.hi = {1.0, 0.0};
    const double nu = 1e-3;
    tc.pde.dim = 1;
    tc.pde.epsilon = nu;
    tc.pde.velocity = unit_velocity;
    tc.pde.flux = burgers_flux;
    tc.pde.flux_deriv = burgers_flux_deriv;
    tc.pde.reaction = [](const Point& x, double u) { return kPi * std::cos(kPi * x[0]) * u; };
    tc.pde.initial = [](const Point& x) { return x[0] <= 0.3 ? 1.0 : -0.1; };
    tc.pde.bc = {BoundaryCondition::dirichlet(
                     [](const Point& x, double) { return x[0] < 0.5 ? 1.0 : -0.1; }),
                 BoundaryCondition::periodic()};
    tc.default_cfl = 0.5;
    tc.feature_length = nu;
    return tc;
}

TestCase linear_2d() {
    TestCase tc;
    tc.name = "2d-test1";
    tc.description = "2D linear convection-diffusion, travelling sine wave";
    tc.dim = 2;
    tc.lo = {0.0, 0.0};
    tc.hi = {2.0 * kPi, 2.0 * kPi};
    tc.pde.dim = 2;
    tc.pde.epsilon = 1.0;
    tc.pde.velocity = unit_velocity;
    tc.pde.flux = identity_flux;
    tc.pde.flux_deriv = identity_flux_deriv;
    tc.pde.source = [](const Point& x, double t) { return 2.0 * std::sin(x[0] + x[1] - 2.0 * t); };
    tc.pde.initial = [](const Point& x) { return std::sin(x[0] + x[1]); };
    tc.pde.bc = {BoundaryCondition::periodic(), BoundaryCondition::periodic()};
    tc.has_exact = true;
    tc.exact = [](const Point& x, double t) { return std::sin(x[0] + x[1] - 2.0 * t); };
    tc.exact_gradient = [](const Point& x, double t) {
        const double c = std::cos(x[0] + x[1] - 2.0 * t);
        return std::array<double, 2>{c, c};
    };
    tc.exact_dt = [](const Point& x, double t) { return -2.0 * std::cos(x[0] + x[1] - 2.0 * t); };
    tc.exact_laplacian = [](const Point& x, double t) {
        return -2.0 * std::sin(x[0] + x[1] - 2.0 * t);
    };
    tc.default_cfl = 0.5;
    return tc;
}

TestCase burgers_2d() {
    TestCase tc = linear_2d();
    tc.name = "2d-test2";
    tc.description = "2D Burgers convection-diffusion, travelling sine wave";
    tc.pde.flux = burgers_flux;
    tc.pde.flux_deriv = burgers_flux_deriv;
    tc.pde.source = [](const Point& x, double t) {
        const double s = x[0] + x[1] - 2.0 * t;
        return -2.0 * std::cos(s) + 2.0 * std::sin(s) * std::cos(s) + 2.0 * std::sin(s);
    };
    return tc;
}

TestCase allen_cahn_2d() {
    TestCase tc;
    tc.name = "2d-test3";
    tc.description = "Allen-Cahn with manufactured decaying sine";
    tc.dim = 2;
    tc.lo = {0.0, 0.0};
    tc.hi = {2.0 * kPi, 2.0 * kPi};
    const double nu = 0.3;
    const double inv_nu2 = 1.0 / (nu * nu);
    tc.pde.dim = 2;
    tc.pde.epsilon = 1.0;
    tc.pde.reaction = [=](const Point&, double u) { return inv_nu2 * (u * u * u - u); };
    tc.pde.source = [=](const Point& x, double t) {
        const double s = std::sin(x[0] + x[1]);
        const double e2 = std::exp(-2.0 * t);
        return inv_nu2 * (e2 * e2 * e2 * s * s * s - e2 * s);
    };
    tc.pde.initial = [](const Point& x) { return std::sin(x[0] + x[1]); };
    tc.pde.bc = {BoundaryCondition::periodic(), BoundaryCondition::periodic()};
    tc.has_exact = true;
    tc.exact = [](const Point& x, double t) { return std::exp(-2.0 * t) * std::sin(x[0] + x[1]); };
    tc.exact_gradient = [](const Point& x, double t) {
        const double c = std::exp(-2.0 * t) * std::cos(x[0] + x[1]);
        return std::array<double, 2>{c, c};
    };
    tc.exact_dt = [](const Point& x, double t) {
        return -2.0 * std::exp(-2.0 * t) * std::sin(x[0] + x[1]);
    };
    tc.exact_laplacian = [](const Point& x, double t) {
        return -2.0 * std::exp(-2.0 * t) * std::sin(x[0] + x[1]);
    };
    tc.default_cfl = 0.2;
    return tc;
}

TestCase layer_burgers_2d() {
    TestCase tc;
    tc.name = "2d-test4";
    tc.description = "2D viscous Burgers with boundary layers along x=1, y=1";
    tc.dim = 2;
    tc.lo = {0.0, 0.0};
    tc.hi = {1.0, 1.0};
    const double nu = 1e-2;
    auto p = [=](double x) { return x * std::tanh((1.0 - x) / nu); };
    auto dp = [=](double x) {
        const double th = std::tanh((1.0 - x) / nu);
        return th - x * (1.0 - th * th) / nu;
    };
    auto ddp = [=](double x) {
        const double th = std::tanh((1.0 - x) / nu);
        const double s2 = 1.0 - th * th;
        return -2.0 * s2 / nu - 2.0 * x * th * s2 / (nu * nu);
    };
    auto amp = [](double t) { return std::exp(t) - 1.0; };
    auto exact = [=](const Point& x, double t) { return amp(t) * p(x[0]) * p(x[1]); };
    tc.pde.dim = 2;
    tc.pde.epsilon = nu;
    tc.pde.velocity = unit_velocity;
    tc.pde.flux = burgers_flux;
    tc.pde.flux_deriv = burgers_flux_deriv;
    tc.pde.source = [=](const Point& x, double t) {
        const double u = exact(x, t);
        const double ut = std::exp(t) * p(x[0]) * p(x[1]);
        const double ux = amp(t) * dp(x[0]) * p(x[1]);
        const double uy = amp(t) * p(x[0]) * dp(x[1]);
        const double lap = amp(t) * (ddp(x[0]) * p(x[1]) + p(x[0]) * ddp(x[1]));
        return ut + u * (ux + uy) - nu * lap;
    };
    tc.pde.initial = [](const Point&) { return 0.0; };
    auto zero = [](const Point&, double) { return 0.0; };
    tc.pde.bc = {BoundaryCondition::dirichlet(zero), BoundaryCondition::dirichlet(zero)};
    tc.has_exact = true;
    tc.exact = exact;
    tc.exact_gradient = [=](const Point& x, double t) {
        return std::array<double, 2>{amp(t) * dp(x[0]) * p(x[1]), amp(t) * p(x[0]) * dp(x[1])};
    };
    tc.exact_dt = [=](const Point& x, double t) { return std::exp(t) * p(x[0]) * p(x[1]); };
    tc.exact_laplacian = [=](const Point& x, double t) {
        return amp(t) * (ddp(x[0]) * p(x[1]) + p(x[0]) * ddp(x[1]));
    };
    tc.default_cfl = 0.2;
    tc.feature_length = nu;
    return tc;
}

TestCase rotation_2d() {
    TestCase tc;
    tc.name = "2d-test5";
    tc.description = "rigid rotation of a slotted disk, cone and hump with weak diffusion";
    tc.dim = 2;
    tc.lo = {-2.0 * kPi, -2.0 * kPi};
    tc.hi = {2.0 * kPi, 2.0 * kPi};
    const double nu = 1e-3;
    tc.pde.dim = 2;
    tc.pde.epsilon = nu;
    tc.pde.velocity = [](const Point& x, double* b) {
        b[0] = -x[1];
        b[1] = x[0];
    };
    tc.pde.flux = identity_flux;
    tc.pde.flux_deriv = identity_flux_deriv;
    // Classical rotating-bodies data scaled to the domain: radius 0.6*pi,
    // slotted disk at (0, pi) with slot half-width r/6 reaching 2r/3 above
    // the center, cone at (0, -pi), cosine hump at (-pi, 0).
    tc.pde.initial = [](const Point& x) {
        const double r0 = 0.6 * kPi;
        auto dist = [&](double cx, double cy) {
            return std::hypot(x[0] - cx, x[1] - cy);
        };
        const double rd = dist(0.0, kPi);
        if (rd <= r0 && !(std::abs(x[0]) < r0 / 6.0 && x[1] < kPi + 2.0 * r0 / 3.0)) return 1.0;
        const double rc = dist(0.0, -kPi);
        if (rc <= r0) return 1.0 - rc / r0;
        const double rh = dist(-kPi, 0.0);
        if (rh <= r0) return 0.25 * (1.0 + std::cos(kPi * rh / r0));
        return 0.0;
    };
    auto zero = [](const Point&, double) { return 0.0; };
    tc.pde.bc = {BoundaryCondition::dirichlet(zero), BoundaryCondition::dirichlet(zero)};
    tc.default_cfl = 0.1;
    return tc;
}

} // namespace

const std::vector<TestCase>& problem_catalog() {
    static const std::vector<TestCase> cases = {
        linear_1d(),    burgers_1d(), travelling_wave_1d(), layer_burgers_1d(), linear_2d(),
        burgers_2d(),   allen_cahn_2d(), layer_burgers_2d(), rotation_2d(),
    };
    return cases;
}

const TestCase& find_problem(const std::string& name) {
    for (const auto& tc : problem_catalog())
        if (tc.name == name) return tc;
    std::string known;
    for (const auto& tc : problem_catalog()) known += " " + tc.name;
    throw InvalidArgumentError("unknown problem '" + name + "'; available:" + known);
}

std::vector<std::string> problem_names() {
    std::vector<std::string> names;
    for (const auto& tc : problem_catalog()) names.push_back(tc.name);
    return names;
}

double manufactured_residual(const TestCase& tc, const Point& x, double t) {
    if (!tc.has_exact) throw InvalidArgumentError("manufactured_residual: no exact solution");
    const double u = tc.exact(x, t);
    double res = tc.exact_dt(x, t) - tc.pde.epsilon * tc.exact_laplacian(x, t);
    if (tc.pde.has_convection()) {
        // div(b f(u)) = f'(u) b . grad(u) for divergence-free b (all cases here)
        double b[2] = {0.0, 0.0};
        tc.pde.velocity(x, b);
        const auto g = tc.exact_gradient(x, t);
        res += tc.pde.flux_deriv(u) * (b[0] * g[0] + (tc.dim == 2 ? b[1] * g[1] : 0.0));
    }
    if (tc.pde.reaction) res += tc.pde.reaction(x, u);
    if (tc.pde.source) res -= tc.pde.source(x, t);
    return res;
}

double manufactured_residual_fd(const TestCase& tc, const Point& x, double t) {
    if (!tc.has_exact) throw InvalidArgumentError("manufactured_residual_fd: no exact solution");
    const double hs = 1e-2 * tc.feature_length;
    const double ht = 1e-4;
    auto d1 = [](auto&& f, double h) {
        // five-point first derivative at 0
        return (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
    };
    auto d2 = [](auto&& f, double h) {
        return (-f(-2.0 * h) + 16.0 * f(-h) - 30.0 * f(0.0) + 16.0 * f(h) - f(2.0 * h)) /
               (12.0 * h * h);
    };

    const double u = tc.exact(x, t);
    const double ut = d1([&](double s) { return tc.exact(x, t + s); }, ht);
    double lap = d2([&](double s) { return tc.exact({x[0] + s, x[1]}, t); }, hs);
    if (tc.dim == 2) lap += d2([&](double s) { return tc.exact({x[0], x[1] + s}, t); }, hs);

    double res = ut - tc.pde.epsilon * lap;
    double scale = std::abs(ut) + std::abs(tc.pde.epsilon * lap);
    if (tc.pde.has_convection()) {
        auto bf = [&](int dir, double s) {
            Point xs = x;
            xs[dir] += s;
            double b[2] = {0.0, 0.0};
            tc.pde.velocity(xs, b);
            return b[dir] * tc.pde.flux(tc.exact(xs, t));
        };
        double div = d1([&](double s) { return bf(0, s); }, hs);
        if (tc.dim == 2) div += d1([&](double s) { return bf(1, s); }, hs);
        res += div;
        scale += std::abs(div);
    }
    if (tc.pde.reaction) {
        res += tc.pde.reaction(x, u);
        scale += std::abs(tc.pde.reaction(x, u));
    }
    if (tc.pde.source) {
        res -= tc.pde.source(x, t);
        scale += std::abs(tc.pde.source(x, t));
    }
    return res / (1.0 + scale);
}

} // namespace rdg
