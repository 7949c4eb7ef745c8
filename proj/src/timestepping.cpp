#include "rdg/timestepping.hpp"

#include <cmath>
#include <string>

namespace rdg {

double ImexTableau::order_condition_residual() const {
    auto weighted = [&](const std::array<double, 4>& w, const std::array<double, 4>& x) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) s += w[i] * x[i];
        return s;
    };
    std::array<double, 4> c2{};
    for (int i = 0; i < 4; ++i) c2[i] = c[i] * c[i];
    std::array<double, 4> ac{}, ahat_c{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            ac[i] += a[i][j] * c[j];
            ahat_c[i] += ahat[i][j] * c[j];
        }
    double r = 0.0;
    r = std::max(r, std::abs(weighted(b, {1, 1, 1, 1}) - 1.0));
    r = std::max(r, std::abs(weighted(bhat, {1, 1, 1, 1}) - 1.0));
    r = std::max(r, std::abs(weighted(b, c) - 0.5));
    r = std::max(r, std::abs(weighted(bhat, c) - 0.5));
    r = std::max(r, std::abs(weighted(b, c2) - 1.0 / 3.0));
    r = std::max(r, std::abs(weighted(bhat, c2) - 1.0 / 3.0));
    // coupled third-order conditions
    r = std::max(r, std::abs(weighted(b, ac) - 1.0 / 6.0));
    r = std::max(r, std::abs(weighted(b, ahat_c) - 1.0 / 6.0));
    r = std::max(r, std::abs(weighted(bhat, ac) - 1.0 / 6.0));
    r = std::max(r, std::abs(weighted(bhat, ahat_c) - 1.0 / 6.0));
    // row sums must match the abscissae
    for (int i = 0; i < 4; ++i) {
        double sa = 0.0, sh = 0.0;
        for (int j = 0; j < 4; ++j) {
            sa += a[i][j];
            sh += ahat[i][j];
        }
        r = std::max(r, std::abs(sa - c[i]));
        r = std::max(r, std::abs(sh - c[i]));
    }
    return r;
}

ImexTableau build_imex_tableau() {
    ImexTableau t;
    // gamma is the root of g^3 - 3g^2 + 3g/2 - 1/6 near 0.435866521508459;
    // refine to full double precision so the order conditions close.
    double g = 0.435866521508459;
    for (int it = 0; it < 8; ++it) {
        const double f = ((g - 3.0) * g + 1.5) * g - 1.0 / 6.0;
        const double df = (3.0 * g - 6.0) * g + 1.5;
        g -= f / df;
    }
    t.gamma = g;
    t.beta1 = -1.5 * g * g + 4.0 * g - 0.25;
    t.beta2 = 1.5 * g * g - 5.0 * g + 1.25;
    t.alpha1 = -0.35;
    t.alpha2 = (1.0 / 3.0 - 2.0 * g * g - 2.0 * t.beta2 * t.alpha1 * g) / (g * (1.0 - g));

    t.c = {0.0, g, 0.5 * (1.0 + g), 1.0};
    t.b = {0.0, t.beta1, t.beta2, g};
    t.bhat = t.b;

    t.a[1][1] = g;
    t.a[2][1] = 0.5 * (1.0 - g);
    t.a[2][2] = g;
    t.a[3][1] = t.beta1;
    t.a[3][2] = t.beta2;
    t.a[3][3] = g;

    t.ahat[1][0] = g;
    t.ahat[2][0] = 0.5 * (1.0 + g) - t.alpha1;
    t.ahat[2][1] = t.alpha1;
    t.ahat[3][1] = 1.0 - t.alpha2;
    t.ahat[3][2] = t.alpha2;

    const double r = t.order_condition_residual();
    if (r > 1e-12)
        throw Error("imex tableau: order condition violation " + std::to_string(r));
    return t;
}

void ImexIntegrator::step(double t, double dt, Vec& u) {
    const long n = ops_.unknowns();
    const int d = ops_.gradient_blocks();
    const auto& tb = tableau_;

    if (dt != prepared_dt_) {
        ops_.prepare_stage(dt * tb.gamma);
        prepared_dt_ = dt;
    }

    Vec mass_u(n);
    ops_.mass_apply(u, mass_u);

    std::array<Vec, 4> aq;       // A q at each stage (stage 0 never used)
    std::array<Vec, 4> residual; // explicit residual at each stage
    residual[0].assign(n, 0.0);
    ops_.explicit_residual(t + tb.c[0] * dt, u, residual[0]);

    Vec stage_u(n), rhs(n);
    std::vector<Vec> stage_q;
    for (int i = 1; i < 4; ++i) {
        rhs = mass_u;
        for (int j = 1; j < i; ++j)
            if (tb.a[i][j] != 0.0) axpy(dt * tb.a[i][j], aq[j], rhs);
        for (int j = 0; j < i; ++j)
            if (tb.ahat[i][j] != 0.0) axpy(dt * tb.ahat[i][j], residual[j], rhs);
        ops_.solve_stage(t + tb.c[i] * dt, rhs, stage_u, stage_q);
        if (d > 0) {
            aq[i].assign(n, 0.0);
            ops_.diffusion_apply(stage_q, aq[i]);
        } else {
            aq[i].assign(n, 0.0);
        }
        residual[i].assign(n, 0.0);
        ops_.explicit_residual(t + tb.c[i] * dt, stage_u, residual[i]);
    }

    Vec acc(n, 0.0);
    for (int i = 1; i < 4; ++i)
        if (tb.b[i] != 0.0) axpy(tb.b[i], aq[i], acc);
    for (int i = 0; i < 4; ++i)
        if (tb.bhat[i] != 0.0) axpy(tb.bhat[i], residual[i], acc);
    Vec z(n);
    ops_.mass_solve(acc, z);
    axpy(dt, z, u);
    if (!all_finite(u))
        throw NonFiniteStateError("imex step: non-finite state at t = " + std::to_string(t + dt));
}

AdvanceLog ImexIntegrator::advance(double t0, double t_final, double dt, Vec& u,
                                   const std::function<void(long, double, const Vec&)>& observer) {
    if (dt <= 0.0) throw InvalidArgumentError("advance: step size must be positive");
    AdvanceLog log;
    log.dt_nominal = dt;
    double t = t0;
    const double tiny = 1e-12 * std::max(1.0, std::abs(t_final));
    while (t < t_final - tiny) {
        const double step_dt = std::min(dt, t_final - t);
        step(t, step_dt, u);
        t += step_dt;
        ++log.steps;
        if (observer) observer(log.steps, t, u);
    }
    log.t_final = t;
    return log;
}

} // namespace rdg
