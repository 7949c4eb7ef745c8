#pragma once

#include <array>
#include <functional>
#include <vector>

#include "rdg/errors.hpp"
#include "rdg/util.hpp"

namespace rdg {

// Three-stage, third-order additive Runge-Kutta pair: a stiffly accurate
// SDIRK part for the linear diffusion and an explicit part for convection,
// reaction and source, sharing the weights b.
struct ImexTableau {
    double gamma = 0.0, beta1 = 0.0, beta2 = 0.0, alpha1 = 0.0, alpha2 = 0.0;
    std::array<double, 4> c{}, b{}, bhat{};
    std::array<std::array<double, 4>, 4> a{};    // implicit (diagonal gamma from stage 2)
    std::array<std::array<double, 4>, 4> ahat{}; // explicit (strictly lower)

    // Largest violation over all order conditions through order three,
    // including the coupled ones.
    double order_condition_residual() const;
};

// Builds the tableau and verifies every order condition to 1e-12; throws
// Error on violation.
ImexTableau build_imex_tableau();

// What the integrator needs from a semi-discrete system
//   M du/dt = A q + N(t, u),   M q_i = B_i u + l_i(t),
// with the convention that A q vanishes when gradient_blocks() == 0.
class ImexOps {
public:
    virtual ~ImexOps() = default;

    virtual long unknowns() const = 0;
    virtual int gradient_blocks() const = 0;

    virtual void mass_apply(const Vec& x, Vec& out) const = 0;
    virtual void mass_solve(const Vec& rhs, Vec& out) const = 0;

    // out = A q (stacked per direction)
    virtual void diffusion_apply(const std::vector<Vec>& q, Vec& out) const = 0;
    // Nonlinear residual: convection + reaction + source, tested moments.
    virtual void explicit_residual(double t, const Vec& u, Vec& out) const = 0;

    // Factor the stage system [M, -dt_gamma A; -B, M] for reuse; called
    // whenever the step size changes.
    virtual void prepare_stage(double dt_gamma) = 0;
    // Solve the coupled stage system with the q-equation right-hand side
    // taken at t_stage (Dirichlet lifts). q_out has gradient_blocks() entries.
    virtual void solve_stage(double t_stage, const Vec& rhs_u, Vec& u_out,
                             std::vector<Vec>& q_out) const = 0;
};

struct AdvanceLog {
    long steps = 0;
    double dt_nominal = 0.0;
    double t_final = 0.0;
};

class ImexIntegrator {
public:
    explicit ImexIntegrator(ImexOps& ops) : ops_(ops), tableau_(build_imex_tableau()) {}
    ImexIntegrator(ImexOps& ops, ImexTableau tableau) : ops_(ops), tableau_(tableau) {}

    const ImexTableau& tableau() const { return tableau_; }

    // One step u(t) -> u(t + dt). Throws NonFiniteStateError if the state
    // leaves the finite range.
    void step(double t, double dt, Vec& u);

    // Repeated steps with the last one clipped to land exactly on t_final.
    // The observer (if set) runs after every step with (step, t_new, u).
    AdvanceLog advance(double t0, double t_final, double dt, Vec& u,
                       const std::function<void(long, double, const Vec&)>& observer = {});

private:
    ImexOps& ops_;
    ImexTableau tableau_;
    double prepared_dt_ = -1.0;
};

} // namespace rdg
