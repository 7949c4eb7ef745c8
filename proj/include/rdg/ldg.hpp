#pragma once

#include <functional>
#include <memory>

#include "rdg/linalg.hpp"
#include "rdg/rdg_space.hpp"
#include "rdg/timestepping.hpp"

namespace rdg {

struct BoundaryCondition {
    enum class Type { Periodic, Dirichlet };
    Type type = Type::Periodic;
    std::function<double(const Point&, double)> value; // Dirichlet data g(x, t)

    static BoundaryCondition periodic() { return {}; }
    static BoundaryCondition dirichlet(std::function<double(const Point&, double)> data) {
        return {Type::Dirichlet, std::move(data)};
    }
};

// u_t + div(b(x) f(u)) - eps Lap(u) + r(x, u) = g(x, t)
struct PdeProblem {
    int dim = 1;
    double epsilon = 0.0;
    std::function<void(const Point&, double*)> velocity; // b(x); empty => no convection
    std::function<double(double)> flux;                  // f(u)
    std::function<double(double)> flux_deriv;            // f'(u)
    std::function<double(const Point&, double)> reaction; // r(x, u); empty => none
    std::function<double(const Point&, double)> source;   // g(x, t); empty => none
    std::function<double(const Point&)> initial;
    std::array<BoundaryCondition, 2> bc;

    bool has_convection() const { return static_cast<bool>(velocity); }
};

// Monotone two-point flux in viscosity form,
//   0.5 (b_n f(u-) + b_n f(u+) - alpha (u+ - u-)),
// with alpha = |b_n| max(|f'(u-)|, |f'(u+)|). Consistent: equal states give
// b_n f(u).
double lax_friedrichs_flux(double u_minus, double u_plus,
                           const std::function<double(double)>& f,
                           const std::function<double(double)>& df, double b_dot_n = 1.0);

// Semi-discrete LDG operators over the reduced space:
//   M du/dt = sum_i A_i q_i + N(t, u),   M q_i = B_i u + l_i(t),
// with alternating diffusion fluxes (u from the lower side, q from the upper
// side), a local Lax-Friedrichs convection flux, and Dirichlet data entering
// through the u-flux lift and the convection exterior state.
class LdgSystem final : public ImexOps {
public:
    LdgSystem(const RdgSpace& space, PdeProblem problem, double solver_tol = 1e-11,
              int threads = 1);
    ~LdgSystem() override;

    // ImexOps
    long unknowns() const override;
    int gradient_blocks() const override;
    void mass_apply(const Vec& x, Vec& out) const override;
    void mass_solve(const Vec& rhs, Vec& out) const override;
    void diffusion_apply(const std::vector<Vec>& q, Vec& out) const override;
    void explicit_residual(double t, const Vec& u, Vec& out) const override;
    void prepare_stage(double dt_gamma) override;
    void solve_stage(double t_stage, const Vec& rhs_u, Vec& u_out,
                     std::vector<Vec>& q_out) const override;

    const RdgSpace& space() const;
    const PdeProblem& problem() const;
    const SparseOperator& mass() const;
    const SparseOperator& diffusion_matrix(int dir) const; // A_i (u-equation)
    const SparseOperator& gradient_matrix(int dir) const;  // B_i (q-equation)
    Vec gradient_lift(int dir, double t) const;            // l_i(t)

    // q_i = M^{-1} (B_i u + l_i(t))
    std::vector<Vec> solve_gradient(const Vec& u, double t) const;
    // du/dt and the auxiliary gradient at (t, u)
    void semidiscrete_rhs(double t, const Vec& u, Vec& du_dt, std::vector<Vec>& q) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace rdg
