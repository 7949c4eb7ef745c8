#include "rdg/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "rdg/timestepping.hpp"

namespace rdg {

namespace {

TensorMesh mesh_for(const TestCase& tc, int cells) {
    std::array<bool, 2> periodic{tc.pde.bc[0].type == BoundaryCondition::Type::Periodic,
                                 tc.pde.bc[1].type == BoundaryCondition::Type::Periodic};
    return uniform_mesh(tc.dim, {cells, cells}, tc.lo, tc.hi, periodic);
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

} // namespace

namespace {

// Surrogate exact solution for cases without a closed form: the same solver
// on a mesh at least 4x the requested resolution, cached on disk.
std::string resolve_reference(const TestCase& tc, int cells, const RunConfig& config) {
    if (config.reference_path != "auto") return config.reference_path;
    const int ref_cells = 4 * cells;
    const std::string dir = config.output_dir.empty() ? "rdg_refs" : config.output_dir;
    std::filesystem::create_directories(dir);
    const std::string path =
        (std::filesystem::path(dir) / (tc.name + "_k" + std::to_string(config.order) + "_n" +
                                       std::to_string(ref_cells) + "_ref.dump"))
            .string();
    if (!std::filesystem::exists(path)) {
        RunConfig ref_config = config;
        ref_config.reference_path.clear();
        ref_config.output_dir.clear();
        const RunResult ref = run_case(tc, ref_cells, ref_config);
        write_solution_dump(path, *ref.space, ref.dofs, ref.t_final);
    }
    return path;
}

} // namespace

RunResult run_case(const TestCase& tc, int cells, const RunConfig& config) {
    const auto t_start = std::chrono::steady_clock::now();
    RunResult result;
    result.cells = cells;

    auto space = std::make_shared<RdgSpace>(mesh_for(tc, cells), config.order, config.threads);
    result.space = space;
    result.h = space->mesh().max_size();

    LdgSystem system(*space, tc.pde, config.solver_tol, config.threads);
    Vec dofs = space->project(tc.pde.initial, config.threads);

    const double cfl = config.cfl > 0.0 ? config.cfl : tc.default_cfl;
    const double t_final = config.t_final >= 0.0 ? config.t_final : tc.default_t_final;
    const double dt = cfl * std::pow(space->mesh().min_size(), config.dt_power);
    result.dt = dt;
    result.t_final = t_final;

    ImexIntegrator integrator(system);
    if (t_final > 0.0) {
        const AdvanceLog log = integrator.advance(0.0, t_final, dt, dofs);
        result.steps = log.steps;
    }
    result.dofs = dofs;

    if (tc.pde.epsilon > 0.0) {
        result.gradient = system.solve_gradient(dofs, t_final);
        // report the gradient approximation itself, not the scaled auxiliary
        const double scale = 1.0 / std::sqrt(tc.pde.epsilon);
        for (auto& q : result.gradient)
            for (double& v : q) v *= scale;
    }

    if (tc.has_exact) {
        const double tf = t_final;
        result.error_u =
            space->l2_error(dofs, [&](const Point& x) { return tc.exact(x, tf); });
        if (!result.gradient.empty() && tc.exact_gradient) {
            std::vector<Vec> unscaled = result.gradient;
            result.error_q = space->l2_error_vector(
                unscaled, [&](const Point& x) { return tc.exact_gradient(x, tf); }, 1.0);
        }
    } else if (!config.reference_path.empty()) {
        const LoadedSolution ref = load_solution_dump(resolve_reference(tc, cells, config));
        result.error_u = error_vs_reference(*space, dofs, ref);
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    if (!config.output_dir.empty()) {
        std::filesystem::create_directories(config.output_dir);
        const std::string stem = tc.name + "_k" + std::to_string(config.order) + "_n" +
                                 std::to_string(cells);
        write_solution_dump(join_path(config.output_dir, stem + ".dump"), *space, dofs, t_final);
        write_sample_grid(join_path(config.output_dir, stem + "_samples.csv"), *space, dofs,
                          config.samples_per_element);
        std::ofstream summary(join_path(config.output_dir, stem + "_summary.txt"));
        char line[512];
        std::snprintf(line, sizeof(line),
                      "problem=%s order=%d cells=%d h=%.6e dt=%.6e steps=%ld error_u=%.6e "
                      "error_q=%.6e wall_seconds=%.3f\n",
                      tc.name.c_str(), config.order, cells, result.h, result.dt, result.steps,
                      result.error_u, result.error_q, result.wall_seconds);
        summary << line;
    }
    return result;
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& config,
                                              std::vector<RunResult>* runs) {
    if (config.cells.size() < 2)
        throw InvalidArgumentError("convergence: need at least two mesh sizes");
    const TestCase& tc = find_problem(config.problem);
    std::vector<ConvergenceRow> rows;
    double prev_h = 0.0, prev_eu = 0.0, prev_eq = 0.0;
    for (std::size_t i = 0; i < config.cells.size(); ++i) {
        const RunResult r = run_case(tc, config.cells[i], config);
        ConvergenceRow row;
        row.cells = r.cells;
        row.h = r.h;
        row.error_u = r.error_u;
        row.error_q = r.error_q;
        if (i > 0) {
            const double lh = std::log(prev_h / r.h);
            if (r.error_u > 0.0 && prev_eu > 0.0) row.rate_u = std::log(prev_eu / r.error_u) / lh;
            if (r.error_q > 0.0 && prev_eq > 0.0) row.rate_q = std::log(prev_eq / r.error_q) / lh;
        }
        prev_h = r.h;
        prev_eu = r.error_u;
        prev_eq = r.error_q;
        rows.push_back(row);
        if (runs) runs->push_back(r);
    }
    return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::ostringstream os;
    os << "N,h,error_u,rate_u,error_q,rate_q\n";
    char line[256];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        std::snprintf(line, sizeof(line), "%d,%.12e,%.12e,", r.cells, r.h, r.error_u);
        os << line;
        if (i > 0) os << r.rate_u;
        os << ",";
        if (r.error_q >= 0.0) {
            std::snprintf(line, sizeof(line), "%.12e", r.error_q);
            os << line;
        }
        os << ",";
        if (i > 0 && r.error_q >= 0.0) os << r.rate_q;
        os << "\n";
    }
    return os.str();
}

namespace {

const char* kind_letter(StencilKind k) {
    switch (k) {
    case StencilKind::Center: return "c";
    case StencilKind::Backward: return "b";
    default: return "f";
    }
}

double paper_lower_bound(int k, StencilKind kind, double am) {
    if (k == 2) {
        if (kind == StencilKind::Center) return 2.0 * (am + 1.0) * (am + 1.0) * (2.0 * am + 1.0);
        return 4.0 * am * (am + 1.0) * (2.0 * am + 1.0);
    }
    if (kind == StencilKind::Center)
        return 252.0 * am * am * std::pow(am + 1.0, 8) * std::pow(2.0 * am + 1.0, 4);
    return 4032.0 * std::pow(am, 6) * std::pow(am + 1.0, 4) * std::pow(2.0 * am + 1.0, 4);
}

} // namespace

AuditReport wellposedness_audit(const RunConfig& config) {
    const TestCase& tc = find_problem(config.problem);
    std::array<bool, 2> periodic{tc.pde.bc[0].type == BoundaryCondition::Type::Periodic,
                                 tc.pde.bc[1].type == BoundaryCondition::Type::Periodic};
    if (config.cells.empty()) throw InvalidArgumentError("audit: need a cell count");
    const int n = config.cells.front();

    std::array<std::vector<double>, 2> bp;
    for (int d = 0; d < tc.dim; ++d) {
        bp[d].resize(n + 1);
        bp[d][0] = tc.lo[d];
        // alternating sizes h, grading*h
        double unit = 0.0;
        for (int i = 0; i < n; ++i) unit += (i % 2 == 0 ? 1.0 : config.grading);
        const double h0 = (tc.hi[d] - tc.lo[d]) / unit;
        for (int i = 0; i < n; ++i)
            bp[d][i + 1] = bp[d][i] + (i % 2 == 0 ? h0 : config.grading * h0);
        bp[d][n] = tc.hi[d];
    }
    TensorMesh mesh(tc.dim, bp, periodic);
    const OrderPair op = make_order_pair(config.order, tc.dim);

    // minimum size ratio over adjacent elements bounds every stencil ratio
    double am = 1e300;
    for (int d = 0; d < tc.dim; ++d)
        for (int i = 0; i + 1 < mesh.cells(d); ++i) {
            const double r = mesh.size(d, i + 1) / mesh.size(d, i);
            am = std::min({am, r, 1.0 / r});
        }

    AuditReport report;
    std::map<std::string, bool> seen;
    for (long e = 0; e < mesh.element_count(); ++e) {
        const ElementId id = mesh.element(e);
        const Stencil st = mesh.stencil_of(id);
        std::string kinds = kind_letter(st.kind[0]);
        if (tc.dim == 2) kinds += kind_letter(st.kind[1]);

        const WellposednessReport wp = check_wellposedness(mesh, id, op);
        report.max_rel_deviation = std::max(report.max_rel_deviation, wp.rel_deviation);
        report.max_condition = std::max(report.max_condition, wp.condition);
        if (!wp.ok) ++report.singular_count;

        double bound = 1.0;
        for (int d = 0; d < tc.dim; ++d) {
            const double line = paper_lower_bound(config.order, st.kind[d], am);
            bound *= tc.dim == 2 ? std::pow(line, config.order + 1) : line;
        }
        // the bound is attained when every stencil ratio equals the minimum
        if (std::abs(wp.determinant) < bound * (1.0 - 1e-12))
            report.all_above_bounds = false;

        char sig[64];
        std::snprintf(sig, sizeof(sig), "%s_%.8e", kinds.c_str(), wp.determinant);
        if (!seen.emplace(sig, true).second) continue;
        AuditEntry entry;
        entry.element = e;
        entry.kinds = kinds;
        entry.determinant = wp.determinant;
        entry.oracle = wp.oracle;
        entry.rel_deviation = wp.rel_deviation;
        entry.condition = wp.condition;
        entry.paper_lower_bound = bound;
        entry.ok = wp.ok;
        report.entries.push_back(entry);
    }
    return report;
}

void write_solution_dump(const std::string& path, const RdgSpace& space, const Vec& dofs,
                         double time) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    const auto& mesh = space.mesh();
    out << "# rdg-solution dim=" << mesh.dim() << " order=" << space.orders().k << " cells="
        << mesh.cells(0);
    if (mesh.dim() == 2) out << "," << mesh.cells(1);
    char buf[256];
    std::snprintf(buf, sizeof(buf), " domain=%.17g,%.17g", mesh.lo(0), mesh.hi(0));
    out << buf;
    if (mesh.dim() == 2) {
        std::snprintf(buf, sizeof(buf), ",%.17g,%.17g", mesh.lo(1), mesh.hi(1));
        out << buf;
    }
    out << " periodic=" << (mesh.periodic(0) ? 1 : 0);
    if (mesh.dim() == 2) out << "," << (mesh.periodic(1) ? 1 : 0);
    std::snprintf(buf, sizeof(buf), " time=%.17g", time);
    out << buf << "\n";
    out << "elem_index,alpha_index,coefficient\n";
    const int mc = space.dofs_per_element();
    for (long e = 0; e < mesh.element_count(); ++e)
        for (int a = 0; a < mc; ++a) {
            std::snprintf(buf, sizeof(buf), "%ld,%d,%.17g\n", e, a,
                          dofs[space.dof_index(e, a)]);
            out << buf;
        }
}

namespace {

std::vector<double> split_doubles(const std::string& s) {
    std::vector<double> vals;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    return vals;
}

std::string header_field(const std::string& header, const std::string& key) {
    const std::string tag = key + "=";
    const auto pos = header.find(tag);
    if (pos == std::string::npos) throw Error("solution dump: missing header field " + key);
    const auto end = header.find(' ', pos);
    return header.substr(pos + tag.size(), end - pos - tag.size());
}

} // namespace

LoadedSolution load_solution_dump(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::string header;
    std::getline(in, header);
    if (header.rfind("# rdg-solution", 0) != 0) throw Error("not a solution dump: " + path);

    const int dim = static_cast<int>(std::stol(header_field(header, "dim")));
    const int order = static_cast<int>(std::stol(header_field(header, "order")));
    const auto cells_v = split_doubles(header_field(header, "cells"));
    const auto domain = split_doubles(header_field(header, "domain"));
    const auto periodic_v = split_doubles(header_field(header, "periodic"));
    LoadedSolution loaded;
    loaded.time = std::stod(header_field(header, "time"));

    std::array<int, 2> cells{static_cast<int>(cells_v[0]),
                             cells_v.size() > 1 ? static_cast<int>(cells_v[1]) : 1};
    Point lo{domain[0], dim == 2 ? domain[2] : 0.0};
    Point hi{domain[1], dim == 2 ? domain[3] : 0.0};
    std::array<bool, 2> periodic{periodic_v[0] != 0.0,
                                 periodic_v.size() > 1 && periodic_v[1] != 0.0};
    loaded.space =
        std::make_shared<RdgSpace>(uniform_mesh(dim, cells, lo, hi, periodic), order);

    loaded.dofs.assign(loaded.space->dof_count(), 0.0);
    std::string line;
    std::getline(in, line); // column header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        long e = 0;
        int a = 0;
        double v = 0.0;
        if (std::sscanf(line.c_str(), "%ld,%d,%lf", &e, &a, &v) != 3)
            throw Error("solution dump: malformed row '" + line + "'");
        loaded.dofs[loaded.space->dof_index(e, a)] = v;
    }
    return loaded;
}

void write_sample_grid(const std::string& path, const RdgSpace& space, const Vec& dofs,
                       int samples_per_element) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    const auto& mesh = space.mesh();
    out << (mesh.dim() == 2 ? "x,y,value\n" : "x,value\n");
    const int s = std::max(1, samples_per_element);
    const std::vector<Vec> coeffs = space.all_local_coeffs(dofs);
    char buf[128];
    for (long e = 0; e < mesh.element_count(); ++e) {
        const ElementId id = mesh.element(e);
        const ElementGeometry g = element_geometry(mesh, id);
        const int s1 = mesh.dim() == 2 ? s : 1;
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s1; ++j) {
                Point x{g.center[0] + g.size[0] * ((i + 0.5) / s - 0.5), 0.0};
                if (mesh.dim() == 2) x[1] = g.center[1] + g.size[1] * ((j + 0.5) / s1 - 0.5);
                double v = 0.0;
                for (int b = 0; b < space.poly_indices().size(); ++b)
                    v += coeffs[e][b] * scaled_basis_value(g, space.poly_indices()[b], x);
                if (mesh.dim() == 2)
                    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", x[0], x[1], v);
                else
                    std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", x[0], v);
                out << buf;
            }
    }
}

double error_vs_reference(const RdgSpace& space, const Vec& dofs, const LoadedSolution& ref) {
    return space.l2_error(dofs,
                          [&](const Point& x) { return ref.space->eval(ref.dofs, x); });
}

RangeReport sample_range(const RdgSpace& space, const Vec& dofs, int samples_per_element) {
    RangeReport r;
    const auto& mesh = space.mesh();
    const int s = std::max(1, samples_per_element);
    const std::vector<Vec> coeffs = space.all_local_coeffs(dofs);
    bool first = true;
    for (long e = 0; e < mesh.element_count(); ++e) {
        const ElementGeometry g = element_geometry(mesh, mesh.element(e));
        const int s1 = mesh.dim() == 2 ? s : 1;
        for (int i = 0; i <= s; ++i)
            for (int j = 0; j <= (mesh.dim() == 2 ? s1 : 0); ++j) {
                Point x{g.center[0] + g.size[0] * (static_cast<double>(i) / s - 0.5), 0.0};
                if (mesh.dim() == 2)
                    x[1] = g.center[1] + g.size[1] * (static_cast<double>(j) / s1 - 0.5);
                double v = 0.0;
                for (int b = 0; b < space.poly_indices().size(); ++b)
                    v += coeffs[e][b] * scaled_basis_value(g, space.poly_indices()[b], x);
                if (first || v < r.min_value) r.min_value = v;
                if (first || v > r.max_value) r.max_value = v;
                first = false;
            }
    }
    return r;
}

} // namespace rdg
