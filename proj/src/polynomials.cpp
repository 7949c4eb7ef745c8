#include "rdg/polynomials.hpp"

#include <algorithm>
#include <cmath>

namespace rdg {

double legendre_value(int k, double x) {
    if (k == 0) return 1.0;
    if (k == 1) return x;
    double prev = 1.0, cur = x;
    for (int n = 2; n <= k; ++n) {
        const double next = ((2.0 * n - 1.0) * x * cur - (n - 1.0) * prev) / n;
        prev = cur;
        cur = next;
    }
    return cur;
}

void legendre_values(int k, double x, double* out) {
    out[0] = 1.0;
    if (k >= 1) out[1] = x;
    for (int n = 2; n <= k; ++n)
        out[n] = ((2.0 * n - 1.0) * x * out[n - 1] - (n - 1.0) * out[n - 2]) / n;
}

void legendre_derivatives(int k, double x, double* out) {
    out[0] = 0.0;
    if (k >= 1) out[1] = 1.0;
    if (k < 2) return;
    // L'_n = L'_{n-2} + (2n-1) L_{n-1}; exact at the endpoints too
    double lm2 = 1.0, lm1 = x;
    for (int n = 2; n <= k; ++n) {
        out[n] = out[n - 2] + (2.0 * n - 1.0) * lm1;
        const double ln = ((2.0 * n - 1.0) * x * lm1 - (n - 1.0) * lm2) / n;
        lm2 = lm1;
        lm1 = ln;
    }
}

QuadratureRule gauss_rule(int n) {
    if (n < 1) throw InvalidArgumentError("gauss_rule: need at least one point");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev initial guess, then Newton on L_n
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            double prev = 1.0, cur = x;
            for (int m = 2; m <= n; ++m) {
                const double next = ((2.0 * m - 1.0) * x * cur - (m - 1.0) * prev) / m;
                prev = cur;
                cur = next;
            }
            const double p = n == 1 ? x : cur;
            const double pm1 = n == 1 ? 1.0 : prev;
            dp = n * (x * p - pm1) / (x * x - 1.0);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                converged = true;
                break;
            }
        }
        if (!converged) throw SolveError("gauss_rule: node iteration did not converge");
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

IndexSet::IndexSet(int order, int dim) : order_(order), dim_(dim) {
    if (dim != 1 && dim != 2) throw InvalidArgumentError("index_set: dim must be 1 or 2");
    if (dim == 1) {
        for (int i = 0; i <= order; ++i) list_.push_back(MultiIndex{{i, 0}, 1});
    } else {
        for (int i = 0; i <= order; ++i)
            for (int j = 0; j <= order; ++j) list_.push_back(MultiIndex{{i, j}, 2});
        std::stable_sort(list_.begin(), list_.end(), [](const MultiIndex& a, const MultiIndex& b) {
            if (a.trace() != b.trace()) return a.trace() < b.trace();
            return a.a < b.a;
        });
    }
}

ElementGeometry element_geometry(const TensorMesh& mesh, const ElementId& e) {
    ElementGeometry g;
    g.dim = mesh.dim();
    g.center = mesh.element_center(e);
    auto h = mesh.element_sizes(e);
    g.size = {h[0], g.dim == 2 ? h[1] : 1.0};
    return g;
}

double scaled_basis_value(const ElementGeometry& g, const MultiIndex& alpha, const Point& x) {
    double v = legendre_value(alpha[0], g.ref_coord(0, x[0]));
    if (g.dim == 2) v *= legendre_value(alpha[1], g.ref_coord(1, x[1]));
    return v;
}

double scaled_basis_derivative(const ElementGeometry& g, const MultiIndex& alpha, const Point& x,
                               int dir) {
    double buf[16];
    legendre_derivatives(alpha[dir], g.ref_coord(dir, x[dir]), buf);
    double v = buf[alpha[dir]] * 2.0 / g.size[dir];
    if (g.dim == 2) {
        const int other = 1 - dir;
        v *= legendre_value(alpha[other], g.ref_coord(other, x[other]));
    }
    return v;
}

double moment(const ElementGeometry& g, const MultiIndex& alpha,
              const std::function<double(const Point&)>& f, const QuadratureRule& rule) {
    const int nq = rule.size();
    double sum = 0.0;
    if (g.dim == 1) {
        for (int q = 0; q < nq; ++q) {
            const Point x{g.center[0] + 0.5 * g.size[0] * rule.nodes[q], 0.0};
            sum += rule.weights[q] * legendre_value(alpha[0], rule.nodes[q]) * f(x);
        }
        return sum * (2.0 * alpha[0] + 1.0) / 2.0;
    }
    for (int q0 = 0; q0 < nq; ++q0)
        for (int q1 = 0; q1 < nq; ++q1) {
            const Point x{g.center[0] + 0.5 * g.size[0] * rule.nodes[q0],
                          g.center[1] + 0.5 * g.size[1] * rule.nodes[q1]};
            sum += rule.weights[q0] * rule.weights[q1] * legendre_value(alpha[0], rule.nodes[q0]) *
                   legendre_value(alpha[1], rule.nodes[q1]) * f(x);
        }
    return sum * (2.0 * alpha[0] + 1.0) * (2.0 * alpha[1] + 1.0) / 4.0;
}

} // namespace rdg
