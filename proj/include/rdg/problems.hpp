#pragma once

#include <string>
#include <vector>

#include "rdg/ldg.hpp"

namespace rdg {

// One benchmark: the PDE data, the domain, and (when known) the exact
// solution with its derivatives for error measurement and source checks.
struct TestCase {
    std::string name;
    std::string description;
    int dim = 1;
    Point lo{0.0, 0.0}, hi{1.0, 0.0};
    PdeProblem pde;

    bool has_exact = false;
    std::function<double(const Point&, double)> exact;
    std::function<std::array<double, 2>(const Point&, double)> exact_gradient;
    std::function<double(const Point&, double)> exact_dt;        // time derivative
    std::function<double(const Point&, double)> exact_laplacian;

    double default_t_final = 1.0;
    double default_cfl = 1.0;
    double feature_length = 1.0; // smallest solution length scale (step sizes for
                                 // finite-difference cross-checks)
};

const std::vector<TestCase>& problem_catalog();
const TestCase& find_problem(const std::string& name);
std::vector<std::string> problem_names();

// PDE residual of the exact solution using the case's hand-coded derivatives;
// vanishes to roundoff when the source term is consistent.
double manufactured_residual(const TestCase& tc, const Point& x, double t);

// Same residual with all derivatives replaced by finite differences of the
// exact solution: an independent check of the hand-coded formulas. Returns
// the residual scaled by 1/(1 + max term magnitude).
double manufactured_residual_fd(const TestCase& tc, const Point& x, double t);

} // namespace rdg
