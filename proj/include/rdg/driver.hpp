#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rdg/problems.hpp"
#include "rdg/rdg_space.hpp"

namespace rdg {

struct RunConfig {
    std::string problem;
    int order = 2;
    std::vector<int> cells;      // per-direction element counts (list => sweep)
    double cfl = -1.0;           // <= 0: problem default
    double dt_power = 1.0;       // dt = cfl * h_min^dt_power (2 reveals spatial
                                 // order beyond the integrator's order 3)
    double t_final = -1.0;       // < 0: problem default
    int threads = 1;
    double solver_tol = 1e-11;
    std::string output_dir;      // "" => no files written
    int samples_per_element = 4; // plot-grid resolution per direction
    std::string reference_path;  // solution dump used as surrogate exact
    double grading = 1.0;        // wellposedness audit: alternating size ratio
};

struct RunResult {
    int cells = 0;
    double h = 0.0;
    double dt = 0.0;
    long steps = 0;
    double error_u = -1.0; // -1: no exact/reference available
    double error_q = -1.0;
    double wall_seconds = 0.0;
    double t_final = 0.0;
    std::shared_ptr<RdgSpace> space;
    Vec dofs;
    std::vector<Vec> gradient; // q scaled by sqrt(eps); empty when eps = 0
};

// Solve one case end to end; writes dump/sample/summary files when
// config.output_dir is set.
RunResult run_case(const TestCase& tc, int cells, const RunConfig& config);

struct ConvergenceRow {
    int cells = 0;
    double h = 0.0;
    double error_u = 0.0, rate_u = 0.0;
    double error_q = 0.0, rate_q = 0.0;
};

// Sweep over config.cells (at least two sizes) and tabulate errors/rates.
std::vector<ConvergenceRow> convergence_study(const RunConfig& config,
                                              std::vector<RunResult>* runs = nullptr);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

struct AuditEntry {
    long element = 0;
    std::string kinds;
    double determinant = 0.0;
    double oracle = 0.0;
    double rel_deviation = 0.0;
    double condition = 0.0;
    double paper_lower_bound = 0.0; // closed-form bound at the mesh's min ratio
    bool ok = false;
};

struct AuditReport {
    std::vector<AuditEntry> entries; // one per distinct stencil signature
    double max_rel_deviation = 0.0;
    double max_condition = 0.0;
    long singular_count = 0;
    bool all_above_bounds = true;
};

// Determinant audit of every stencil on the configured mesh against the
// closed forms, including the lower bounds at the minimum size ratio.
AuditReport wellposedness_audit(const RunConfig& config);

// Solution dump: one header line with mesh metadata, then
// "elem_index,alpha_index,coefficient" rows (the coefficients are the
// Legendre-moment unknowns).
void write_solution_dump(const std::string& path, const RdgSpace& space, const Vec& dofs,
                         double time);
struct LoadedSolution {
    std::shared_ptr<RdgSpace> space;
    Vec dofs;
    double time = 0.0;
};
LoadedSolution load_solution_dump(const std::string& path);

// Long-format sample grid "x[,y],value" at uniform points per element.
void write_sample_grid(const std::string& path, const RdgSpace& space, const Vec& dofs,
                       int samples_per_element);

// L2 distance between a solution and a reference dump (evaluated pointwise).
double error_vs_reference(const RdgSpace& space, const Vec& dofs, const LoadedSolution& ref);

// Max of u_h - above and below - over the sample grid; used for layer tests.
struct RangeReport {
    double min_value = 0.0;
    double max_value = 0.0;
};
RangeReport sample_range(const RdgSpace& space, const Vec& dofs, int samples_per_element);

} // namespace rdg
