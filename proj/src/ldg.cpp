#include "rdg/ldg.hpp"

#include <cmath>

namespace rdg {

double lax_friedrichs_flux(double u_minus, double u_plus, const std::function<double(double)>& f,
                           const std::function<double(double)>& df, double b_dot_n) {
    const double alpha = std::abs(b_dot_n) * std::max(std::abs(df(u_minus)), std::abs(df(u_plus)));
    return 0.5 * (b_dot_n * (f(u_minus) + f(u_plus)) - alpha * (u_plus - u_minus));
}

namespace {

struct Face {
    long left = -1, right = -1; // element linear ids, -1 at a domain boundary
    double coord = 0.0;
    int cross = 0; // cross-direction element index (2D)
};

inline double endpoint_sign(int order, int side) {
    return side == 1 ? 1.0 : (order % 2 == 0 ? 1.0 : -1.0);
}

} // namespace

struct LdgSystem::Impl {
    const RdgSpace& space;
    PdeProblem problem;
    double tol;
    int threads;

    int dim, pc, mc, nq, nvol, nface_q;
    long n_elem, n_u;
    double sqrt_eps = 0.0;

    QuadratureRule rule;
    std::vector<double> vol_w;                          // [q]
    std::vector<double> vol_val;                        // [q*pc + beta]
    std::array<std::vector<double>, 2> vol_dref;        // reference derivative per direction
    std::array<std::array<std::vector<double>, 2>, 2> trace_val; // [dir][side][fc*pc + beta]

    std::array<std::vector<Face>, 2> faces;

    SparseOperator mass_op;
    std::unique_ptr<SparseSolver> mass_solver;
    std::array<SparseOperator, 2> a_op, b_op;

    SparseOperator stage_op;
    std::unique_ptr<SparseSolver> stage_solver;
    double stage_dt_gamma = -1.0;

    Impl(const RdgSpace& sp, PdeProblem prob, double solver_tol, int nthreads)
        : space(sp), problem(std::move(prob)), tol(solver_tol), threads(nthreads) {
        dim = space.mesh().dim();
        if (problem.dim != dim) throw InvalidArgumentError("ldg: problem/mesh dimension mismatch");
        for (int d = 0; d < dim; ++d) {
            const bool per = space.mesh().periodic(d);
            if (per != (problem.bc[d].type == BoundaryCondition::Type::Periodic))
                throw InvalidArgumentError("ldg: boundary condition type does not match mesh periodicity");
            if (!per && !problem.bc[d].value)
                throw InvalidArgumentError("ldg: Dirichlet boundary needs a data function");
        }
        if (problem.has_convection() && (!problem.flux || !problem.flux_deriv))
            throw InvalidArgumentError("ldg: convection needs f and f'");
        if (problem.epsilon < 0.0) throw InvalidArgumentError("ldg: negative diffusion");

        pc = space.orders().poly_count();
        mc = space.orders().moment_count();
        n_elem = space.mesh().element_count();
        n_u = space.dof_count();
        sqrt_eps = std::sqrt(problem.epsilon);

        build_tables();
        build_faces();
        mass_op = space.mass_matrix();
        mass_solver = std::make_unique<SparseSolver>(mass_op, SolveMethod::Auto,
                                                     std::min(tol, 1e-12));
        if (problem.epsilon > 0.0) assemble_diffusion();
    }

    // ------------------------------------------------------------------
    // Reference basis tables at volume and face quadrature points
    // ------------------------------------------------------------------
    void build_tables() {
        const int k = space.orders().k;
        nq = default_quadrature_points(k);
        rule = gauss_rule(nq);
        nvol = dim == 2 ? nq * nq : nq;
        nface_q = dim == 2 ? nq : 1;
        const auto& polys = space.poly_indices();

        std::vector<double> lv((k + 1) * nq), ld((k + 1) * nq);
        for (int q = 0; q < nq; ++q) {
            legendre_values(k, rule.nodes[q], &lv[q * (k + 1)]);
            legendre_derivatives(k, rule.nodes[q], &ld[q * (k + 1)]);
        }
        auto val1 = [&](int q, int n) { return lv[q * (k + 1) + n]; };
        auto der1 = [&](int q, int n) { return ld[q * (k + 1) + n]; };

        vol_w.resize(nvol);
        vol_val.resize(static_cast<std::size_t>(nvol) * pc);
        for (int d = 0; d < dim; ++d) vol_dref[d].resize(static_cast<std::size_t>(nvol) * pc);
        for (int q = 0; q < nvol; ++q) {
            const int q0 = dim == 2 ? q / nq : q;
            const int q1 = dim == 2 ? q % nq : 0;
            vol_w[q] = rule.weights[q0] * (dim == 2 ? rule.weights[q1] : 1.0);
            for (int b = 0; b < pc; ++b) {
                const auto& beta = polys[b];
                if (dim == 1) {
                    vol_val[q * pc + b] = val1(q0, beta[0]);
                    vol_dref[0][q * pc + b] = der1(q0, beta[0]);
                } else {
                    vol_val[q * pc + b] = val1(q0, beta[0]) * val1(q1, beta[1]);
                    vol_dref[0][q * pc + b] = der1(q0, beta[0]) * val1(q1, beta[1]);
                    vol_dref[1][q * pc + b] = val1(q0, beta[0]) * der1(q1, beta[1]);
                }
            }
        }

        for (int d = 0; d < dim; ++d)
            for (int side = 0; side < 2; ++side) {
                auto& tab = trace_val[d][side];
                tab.resize(static_cast<std::size_t>(nface_q) * pc);
                for (int fc = 0; fc < nface_q; ++fc)
                    for (int b = 0; b < pc; ++b) {
                        const auto& beta = polys[b];
                        double v = endpoint_sign(beta[d], side);
                        if (dim == 2) v *= val1(fc, beta[1 - d]);
                        tab[fc * pc + b] = v;
                    }
            }
    }

    void build_faces() {
        const auto& mesh = space.mesh();
        for (int d = 0; d < dim; ++d) {
            const int n = mesh.cells(d);
            const bool per = mesh.periodic(d);
            const int npos = per ? n : n + 1;
            const int ncross = dim == 2 ? mesh.cells(1 - d) : 1;
            auto& list = faces[d];
            list.reserve(static_cast<std::size_t>(npos) * ncross);
            for (int c = 0; c < ncross; ++c)
                for (int p = 0; p < npos; ++p) {
                    Face f;
                    f.coord = mesh.breakpoints(d)[p];
                    f.cross = c;
                    const int il = per ? (p + n - 1) % n : p - 1;
                    const int ir = per ? p : (p < n ? p : -1);
                    auto linear = [&](int i) -> long {
                        if (i < 0) return -1;
                        if (dim == 1) return i;
                        return d == 0 ? mesh.linear_index(i, c) : mesh.linear_index(c, i);
                    };
                    f.left = linear(il);
                    f.right = linear(ir);
                    list.push_back(f);
                }
        }
    }

    // ------------------------------------------------------------------
    // Element geometry helpers
    // ------------------------------------------------------------------
    ElementGeometry geometry(long e) const {
        return element_geometry(space.mesh(), space.mesh().element(e));
    }

    double cross_size(int dir, int cross) const {
        return dim == 2 ? space.mesh().size(1 - dir, cross) : 1.0;
    }
    double cross_center(int dir, int cross) const {
        return dim == 2 ? space.mesh().center(1 - dir, cross) : 0.0;
    }

    Point face_point(int dir, const Face& f, int fc) const {
        Point x{f.coord, 0.0};
        if (dim == 2) {
            const double y = cross_center(dir, f.cross) +
                             0.5 * cross_size(dir, f.cross) * rule.nodes[fc];
            if (dir == 0)
                x = {f.coord, y};
            else
                x = {y, f.coord};
        }
        return x;
    }

    // ------------------------------------------------------------------
    // Linear diffusion operators (assembled once)
    // ------------------------------------------------------------------
    void assemble_diffusion() {
        const auto& polys = space.poly_indices();
        // S1[a][b] = integral of L^b (L^a)' over the reference interval
        DenseMatrix s1(pc == 0 ? 0 : space.orders().k + 1, space.orders().k + 1);
        {
            const int k = space.orders().k;
            for (int a = 0; a <= k; ++a)
                for (int b = 0; b <= k; ++b) {
                    double sum = 0.0;
                    for (int q = 0; q < nq; ++q) {
                        double vals[8], ders[8];
                        legendre_values(k, rule.nodes[q], vals);
                        legendre_derivatives(k, rule.nodes[q], ders);
                        sum += rule.weights[q] * vals[b] * ders[a];
                    }
                    s1(a, b) = sum;
                }
        }

        auto cross_mass = [&](const MultiIndex& bt, const MultiIndex& bu, int dir,
                              const std::array<double, 2>& h) -> double {
            // product of the orthogonality factors in the directions != dir
            if (dim == 1) return 1.0;
            const int j = 1 - dir;
            if (bt[j] != bu[j]) return 0.0;
            return h[j] / (2.0 * bt[j] + 1.0);
        };

        for (int dirc = 0; dirc < dim; ++dirc) {
            std::vector<Triplet> ta, tb;
            const std::size_t est = static_cast<std::size_t>(n_elem) * pc * pc * 3;
            ta.reserve(est);
            tb.reserve(est);

            DenseMatrix local(pc, pc), tmp(pc, pc), block(pc, pc);

            auto scatter = [&](std::vector<Triplet>& out, long e_test, long e_trial,
                               const DenseMatrix& loc) {
                const DenseMatrix& t_test = space.table(e_test).inverse;
                const DenseMatrix& t_trial = space.table(e_trial).inverse;
                tmp = loc.multiply(t_trial);
                block = t_test.transposed().multiply(tmp);
                const auto& gr = space.gather_indices(e_test);
                const auto& gc = space.gather_indices(e_trial);
                for (int i = 0; i < pc; ++i)
                    for (int j = 0; j < pc; ++j)
                        if (block(i, j) != 0.0)
                            out.push_back({static_cast<int>(gr[i]), static_cast<int>(gc[j]),
                                           block(i, j)});
            };

            // volume part, shared by A_i and B_i:
            // -(sqrt_eps) * integral of (trial) d(test)/dx_i
            for (long e = 0; e < n_elem; ++e) {
                const auto h = space.mesh().element_sizes(space.mesh().element(e));
                for (int i = 0; i < pc; ++i)
                    for (int j = 0; j < pc; ++j) {
                        const auto& bt = polys[i]; // test
                        const auto& bu = polys[j]; // trial
                        local(i, j) = -sqrt_eps * s1(bt[dirc], bu[dirc]) *
                                      cross_mass(bt, bu, dirc, h);
                    }
                scatter(ta, e, e, local);
                scatter(tb, e, e, local);
            }

            // face part
            auto face_block = [&](int side_test, int side_trial, const std::array<double, 2>& h,
                                  double sign) {
                for (int i = 0; i < pc; ++i)
                    for (int j = 0; j < pc; ++j) {
                        const auto& bt = polys[i];
                        const auto& bu = polys[j];
                        local(i, j) = sign * sqrt_eps * endpoint_sign(bt[dirc], side_test) *
                                      endpoint_sign(bu[dirc], side_trial) *
                                      cross_mass(bt, bu, dirc, h);
                    }
            };

            for (const Face& f : faces[dirc]) {
                // cross sizes are shared by both neighbors on a tensor mesh
                std::array<double, 2> h{1.0, 1.0};
                if (dim == 2) h[1 - dirc] = cross_size(dirc, f.cross);
                if (f.left >= 0 && f.right >= 0) {
                    // B_i: u-hat from the lower side, tested from both sides
                    face_block(1, 1, h, +1.0);
                    scatter(tb, f.left, f.left, local);
                    face_block(0, 1, h, -1.0);
                    scatter(tb, f.right, f.left, local);
                    // A_i: q-hat from the upper side
                    face_block(1, 0, h, +1.0);
                    scatter(ta, f.left, f.right, local);
                    face_block(0, 0, h, -1.0);
                    scatter(ta, f.right, f.right, local);
                } else if (f.left < 0) {
                    // domain left boundary: u-hat is Dirichlet data (lift only);
                    // q-hat is the interior trace
                    face_block(0, 0, h, -1.0);
                    scatter(ta, f.right, f.right, local);
                } else {
                    // domain right boundary
                    face_block(1, 1, h, +1.0);
                    scatter(ta, f.left, f.left, local);
                }
            }

            const int n = static_cast<int>(n_u);
            a_op[dirc] = SparseOperator::from_triplets(n, n, std::move(ta), 1e-300);
            b_op[dirc] = SparseOperator::from_triplets(n, n, std::move(tb), 1e-300);
        }
    }

    Vec lift(int dirc, double t) const {
        Vec l(n_u, 0.0);
        if (problem.epsilon == 0.0 || space.mesh().periodic(dirc)) return l;
        const auto& data = problem.bc[dirc].value;
        std::vector<double> acc(pc), tmp(pc);
        for (const Face& f : faces[dirc]) {
            if (f.left >= 0 && f.right >= 0) continue;
            const bool left_boundary = f.left < 0;
            const long e = left_boundary ? f.right : f.left;
            const int side = left_boundary ? 0 : 1;
            const double sign = left_boundary ? -sqrt_eps : +sqrt_eps;
            const double meas = dim == 2 ? 0.5 * cross_size(dirc, f.cross) : 1.0;
            std::fill(acc.begin(), acc.end(), 0.0);
            for (int fc = 0; fc < nface_q; ++fc) {
                const double w = (dim == 2 ? rule.weights[fc] : 1.0) * meas;
                const double g = data(face_point(dirc, f, fc), t);
                const double* tr = &trace_val[dirc][side][static_cast<std::size_t>(fc) * pc];
                for (int b = 0; b < pc; ++b) acc[b] += w * g * tr[b];
            }
            space.table(e).inverse.matvec_transposed(acc.data(), tmp.data());
            const auto& g = space.gather_indices(e);
            for (int i = 0; i < pc; ++i) l[g[i]] += sign * tmp[i];
        }
        return l;
    }

    // ------------------------------------------------------------------
    // Nonlinear residual: convection + reaction + source
    // ------------------------------------------------------------------
    void residual(double t, const Vec& u, Vec& out) const {
        const std::vector<Vec> coeffs = space.all_local_coeffs(u, threads);
        std::vector<double> fe(static_cast<std::size_t>(n_elem) * pc, 0.0);

        const bool conv = problem.has_convection();
        const bool reac = static_cast<bool>(problem.reaction);
        const bool src = static_cast<bool>(problem.source);

        if (conv || reac || src) {
            parallel_for(static_cast<std::size_t>(n_elem), threads,
                         [&](std::size_t eb, std::size_t ee) {
                for (std::size_t el = eb; el < ee; ++el) {
                    const ElementGeometry g = geometry(static_cast<long>(el));
                    double jac = 0.5 * g.size[0];
                    if (dim == 2) jac *= 0.5 * g.size[1];
                    const double* c = coeffs[el].data();
                    double* f_el = &fe[el * pc];
                    for (int q = 0; q < nvol; ++q) {
                        const int q0 = dim == 2 ? q / nq : q;
                        const int q1 = dim == 2 ? q % nq : 0;
                        Point x{g.center[0] + 0.5 * g.size[0] * rule.nodes[q0], 0.0};
                        if (dim == 2) x[1] = g.center[1] + 0.5 * g.size[1] * rule.nodes[q1];
                        const double* bv = &vol_val[static_cast<std::size_t>(q) * pc];
                        double u_val = 0.0;
                        for (int b = 0; b < pc; ++b) u_val += c[b] * bv[b];
                        const double wj = vol_w[q] * jac;
                        if (conv) {
                            double vel[2] = {0.0, 0.0};
                            problem.velocity(x, vel);
                            const double fu = problem.flux(u_val);
                            for (int d = 0; d < dim; ++d) {
                                const double s = wj * fu * vel[d] * 2.0 / g.size[d];
                                const double* dr = &vol_dref[d][static_cast<std::size_t>(q) * pc];
                                for (int b = 0; b < pc; ++b) f_el[b] += s * dr[b];
                            }
                        }
                        double point_src = 0.0;
                        if (reac) point_src -= problem.reaction(x, u_val);
                        if (src) point_src += problem.source(x, t);
                        if (point_src != 0.0) {
                            const double s = wj * point_src;
                            for (int b = 0; b < pc; ++b) f_el[b] += s * bv[b];
                        }
                    }
                }
            });
        }

        if (conv) {
            for (int d = 0; d < dim; ++d) {
                const auto& list = faces[d];
                std::vector<double> contrib(list.size() * 2 * pc, 0.0);
                parallel_for(list.size(), threads, [&](std::size_t fb, std::size_t feend) {
                    double ul[8], ur[8], bn[8];
                    for (std::size_t fi = fb; fi < feend; ++fi) {
                        const Face& f = list[fi];
                        const double meas = dim == 2 ? 0.5 * cross_size(d, f.cross) : 1.0;
                        double amax = 0.0, bmax = 0.0;
                        for (int fc = 0; fc < nface_q; ++fc) {
                            const Point x = face_point(d, f, fc);
                            double vel[2] = {0.0, 0.0};
                            problem.velocity(x, vel);
                            bn[fc] = vel[d];
                            const double* trp = &trace_val[d][1][static_cast<std::size_t>(fc) * pc];
                            const double* trm = &trace_val[d][0][static_cast<std::size_t>(fc) * pc];
                            double vl = 0.0, vr = 0.0;
                            if (f.left >= 0) {
                                const double* c = coeffs[f.left].data();
                                for (int b = 0; b < pc; ++b) vl += c[b] * trp[b];
                            }
                            if (f.right >= 0) {
                                const double* c = coeffs[f.right].data();
                                for (int b = 0; b < pc; ++b) vr += c[b] * trm[b];
                            }
                            // inflow iff the characteristic speed b.n f'(u)
                            // points into the domain at the interior trace
                            if (f.left < 0)
                                vl = bn[fc] * problem.flux_deriv(vr) > 0.0
                                         ? problem.bc[d].value(x, t)
                                         : vr;
                            if (f.right < 0)
                                vr = bn[fc] * problem.flux_deriv(vl) < 0.0
                                         ? problem.bc[d].value(x, t)
                                         : vl;
                            ul[fc] = vl;
                            ur[fc] = vr;
                            amax = std::max(amax, std::max(std::abs(problem.flux_deriv(vl)),
                                                           std::abs(problem.flux_deriv(vr))));
                            bmax = std::max(bmax, std::abs(bn[fc]));
                        }
                        const double alpha = amax * bmax;
                        double* cl = &contrib[fi * 2 * pc];
                        double* cr = cl + pc;
                        for (int fc = 0; fc < nface_q; ++fc) {
                            const double w = (dim == 2 ? rule.weights[fc] : 1.0) * meas;
                            const double flux_val =
                                0.5 * (bn[fc] * (problem.flux(ul[fc]) + problem.flux(ur[fc])) -
                                       alpha * (ur[fc] - ul[fc]));
                            const double* trp = &trace_val[d][1][static_cast<std::size_t>(fc) * pc];
                            const double* trm = &trace_val[d][0][static_cast<std::size_t>(fc) * pc];
                            for (int b = 0; b < pc; ++b) {
                                cl[b] += w * flux_val * trp[b];
                                cr[b] += w * flux_val * trm[b];
                            }
                        }
                    }
                });
                for (std::size_t fi = 0; fi < list.size(); ++fi) {
                    const Face& f = list[fi];
                    const double* cl = &contrib[fi * 2 * pc];
                    const double* cr = cl + pc;
                    if (f.left >= 0) {
                        double* f_el = &fe[static_cast<std::size_t>(f.left) * pc];
                        for (int b = 0; b < pc; ++b) f_el[b] -= cl[b];
                    }
                    if (f.right >= 0) {
                        double* f_el = &fe[static_cast<std::size_t>(f.right) * pc];
                        for (int b = 0; b < pc; ++b) f_el[b] += cr[b];
                    }
                }
            }
        }

        out.assign(n_u, 0.0);
        std::vector<double> tmp(pc);
        for (long e = 0; e < n_elem; ++e) {
            space.table(e).inverse.matvec_transposed(&fe[static_cast<std::size_t>(e) * pc],
                                                     tmp.data());
            const auto& g = space.gather_indices(e);
            for (int i = 0; i < pc; ++i) out[g[i]] += tmp[i];
        }
    }

    // ------------------------------------------------------------------
    // Coupled stage system [M, -dt_gamma A; -B, M] in per-element interleaved
    // layout so Dirichlet problems stay banded.
    // ------------------------------------------------------------------
    int blocks() const { return 1 + (problem.epsilon > 0.0 ? dim : 0); }

    long imap(long udof, int comp) const {
        const long e = udof / mc;
        const int a = static_cast<int>(udof % mc);
        return (e * blocks() + comp) * mc + a;
    }

    void build_stage(double dt_gamma) {
        const int nb = blocks();
        const long n_s = n_u * nb;
        std::vector<Triplet> trips;
        trips.reserve(mass_op.nnz() * nb + (problem.epsilon > 0.0 ? 2 * dim * a_op[0].nnz() : 0));

        auto add = [&](const SparseOperator& op, int row_comp, int col_comp, double scale) {
            const auto& rp = op.row_ptr();
            const auto& ci = op.col_index();
            const auto& vv = op.values();
            for (int r = 0; r < op.rows(); ++r)
                for (std::size_t kk = rp[r]; kk < rp[r + 1]; ++kk)
                    trips.push_back({static_cast<int>(imap(r, row_comp)),
                                     static_cast<int>(imap(ci[kk], col_comp)), scale * vv[kk]});
        };

        add(mass_op, 0, 0, 1.0);
        for (int d = 0; d < dim && problem.epsilon > 0.0; ++d) {
            add(a_op[d], 0, 1 + d, -dt_gamma);
            add(b_op[d], 1 + d, 0, -1.0);
            add(mass_op, 1 + d, 1 + d, 1.0);
        }
        stage_op = SparseOperator::from_triplets(static_cast<int>(n_s), static_cast<int>(n_s),
                                                 std::move(trips));
        stage_solver = std::make_unique<SparseSolver>(stage_op, SolveMethod::Auto, tol);
        stage_dt_gamma = dt_gamma;
    }
};

LdgSystem::LdgSystem(const RdgSpace& space, PdeProblem problem, double solver_tol, int threads)
    : impl_(std::make_unique<Impl>(space, std::move(problem), solver_tol, threads)) {}

LdgSystem::~LdgSystem() = default;

long LdgSystem::unknowns() const { return impl_->n_u; }
int LdgSystem::gradient_blocks() const { return impl_->problem.epsilon > 0.0 ? impl_->dim : 0; }
const RdgSpace& LdgSystem::space() const { return impl_->space; }
const PdeProblem& LdgSystem::problem() const { return impl_->problem; }
const SparseOperator& LdgSystem::mass() const { return impl_->mass_op; }

const SparseOperator& LdgSystem::diffusion_matrix(int dir) const {
    if (impl_->problem.epsilon == 0.0) throw InvalidArgumentError("ldg: no diffusion operators");
    return impl_->a_op[dir];
}

const SparseOperator& LdgSystem::gradient_matrix(int dir) const {
    if (impl_->problem.epsilon == 0.0) throw InvalidArgumentError("ldg: no diffusion operators");
    return impl_->b_op[dir];
}

Vec LdgSystem::gradient_lift(int dir, double t) const { return impl_->lift(dir, t); }

void LdgSystem::mass_apply(const Vec& x, Vec& out) const { impl_->mass_op.apply(x, out); }

void LdgSystem::mass_solve(const Vec& rhs, Vec& out) const { impl_->mass_solver->solve(rhs, out); }

void LdgSystem::diffusion_apply(const std::vector<Vec>& q, Vec& out) const {
    out.assign(impl_->n_u, 0.0);
    if (impl_->problem.epsilon == 0.0) return;
    Vec tmp;
    for (int d = 0; d < impl_->dim; ++d) {
        impl_->a_op[d].apply(q[d], tmp);
        axpy(1.0, tmp, out);
    }
}

void LdgSystem::explicit_residual(double t, const Vec& u, Vec& out) const {
    impl_->residual(t, u, out);
}

void LdgSystem::prepare_stage(double dt_gamma) {
    if (impl_->problem.epsilon == 0.0) return;
    if (dt_gamma != impl_->stage_dt_gamma) impl_->build_stage(dt_gamma);
}

void LdgSystem::solve_stage(double t_stage, const Vec& rhs_u, Vec& u_out,
                            std::vector<Vec>& q_out) const {
    if (impl_->problem.epsilon == 0.0) {
        mass_solve(rhs_u, u_out);
        q_out.clear();
        return;
    }
    if (!impl_->stage_solver) throw Error("ldg: stage solver not prepared");
    const int nb = impl_->blocks();
    Vec rhs(impl_->n_u * nb, 0.0);
    for (long r = 0; r < impl_->n_u; ++r) rhs[impl_->imap(r, 0)] = rhs_u[r];
    for (int d = 0; d < impl_->dim; ++d) {
        const Vec l = impl_->lift(d, t_stage);
        for (long r = 0; r < impl_->n_u; ++r) rhs[impl_->imap(r, 1 + d)] = l[r];
    }
    Vec x;
    impl_->stage_solver->solve(rhs, x);
    u_out.resize(impl_->n_u);
    q_out.assign(impl_->dim, Vec(impl_->n_u));
    for (long r = 0; r < impl_->n_u; ++r) {
        u_out[r] = x[impl_->imap(r, 0)];
        for (int d = 0; d < impl_->dim; ++d) q_out[d][r] = x[impl_->imap(r, 1 + d)];
    }
}

std::vector<Vec> LdgSystem::solve_gradient(const Vec& u, double t) const {
    if (impl_->problem.epsilon == 0.0) return {};
    std::vector<Vec> q(impl_->dim);
    Vec rhs;
    for (int d = 0; d < impl_->dim; ++d) {
        impl_->b_op[d].apply(u, rhs);
        const Vec l = impl_->lift(d, t);
        axpy(1.0, l, rhs);
        impl_->mass_solver->solve(rhs, q[d]);
    }
    return q;
}

void LdgSystem::semidiscrete_rhs(double t, const Vec& u, Vec& du_dt, std::vector<Vec>& q) const {
    q = solve_gradient(u, t);
    Vec acc;
    explicit_residual(t, u, acc);
    if (impl_->problem.epsilon > 0.0) {
        Vec aq;
        diffusion_apply(q, aq);
        axpy(1.0, aq, acc);
    }
    mass_solve(acc, du_dt);
}

} // namespace rdg
