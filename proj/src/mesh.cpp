#include "rdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rdg {

TensorMesh::TensorMesh(int dim, std::array<std::vector<double>, 2> breakpoints,
                       std::array<bool, 2> periodic)
    : dim_(dim), breakpoints_(std::move(breakpoints)), periodic_(periodic) {
    if (dim_ != 1 && dim_ != 2) throw MeshError("mesh: dimension must be 1 or 2");
    for (int d = 0; d < dim_; ++d) {
        const auto& bp = breakpoints_[d];
        if (bp.size() < 4)
            throw MeshError("mesh: too few elements in direction " + std::to_string(d + 1) +
                            " (need at least 3, the stencil width)");
        for (std::size_t i = 0; i + 1 < bp.size(); ++i)
            if (!(bp[i] < bp[i + 1]))
                throw MeshError("mesh: breakpoints not strictly increasing in direction " +
                                std::to_string(d + 1));
        size_[d].resize(bp.size() - 1);
        center_[d].resize(bp.size() - 1);
        for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
            size_[d][i] = bp[i + 1] - bp[i];
            center_[d][i] = 0.5 * (bp[i] + bp[i + 1]);
        }
    }
}

long TensorMesh::element_count() const {
    long n = cells(0);
    if (dim_ == 2) n *= cells(1);
    return n;
}

double TensorMesh::measure() const {
    double m = extent(0);
    if (dim_ == 2) m *= extent(1);
    return m;
}

double TensorMesh::max_size() const {
    double m = 0.0;
    for (int d = 0; d < dim_; ++d)
        for (double h : size_[d]) m = std::max(m, h);
    return m;
}

double TensorMesh::min_size() const {
    double m = size_[0][0];
    for (int d = 0; d < dim_; ++d)
        for (double h : size_[d]) m = std::min(m, h);
    return m;
}

long TensorMesh::linear_index(int i0, int i1) const {
    return static_cast<long>(i1) * cells(0) + i0;
}

ElementId TensorMesh::element(long linear) const {
    ElementId e;
    e.linear = linear;
    e.idx[0] = static_cast<int>(linear % cells(0));
    e.idx[1] = dim_ == 2 ? static_cast<int>(linear / cells(0)) : 0;
    return e;
}

std::array<double, 2> TensorMesh::element_sizes(const ElementId& e) const {
    std::array<double, 2> h{size_[0][e.idx[0]], 0.0};
    if (dim_ == 2) h[1] = size_[1][e.idx[1]];
    return h;
}

std::array<double, 2> TensorMesh::element_center(const ElementId& e) const {
    std::array<double, 2> c{center_[0][e.idx[0]], 0.0};
    if (dim_ == 2) c[1] = center_[1][e.idx[1]];
    return c;
}

Stencil TensorMesh::stencil_of(const ElementId& e) const {
    Stencil s;
    s.owner = e;
    for (int d = 0; d < dim_; ++d) {
        const int n = cells(d);
        const int i = e.idx[d];
        if (i < 0 || i >= n) throw InvalidArgumentError("stencil_of: element index out of range");
        if (periodic_[d]) {
            s.kind[d] = StencilKind::Center;
            s.line[d] = {(i + n - 1) % n, i, (i + 1) % n};
            s.shift[d] = {i == 0 ? -extent(d) : 0.0, 0.0, i == n - 1 ? extent(d) : 0.0};
        } else if (i == 0) {
            s.kind[d] = StencilKind::Forward;
            s.line[d] = {i, i + 1, i + 2};
            s.shift[d] = {0.0, 0.0, 0.0};
        } else if (i == n - 1) {
            s.kind[d] = StencilKind::Backward;
            s.line[d] = {i - 2, i - 1, i};
            s.shift[d] = {0.0, 0.0, 0.0};
        } else {
            s.kind[d] = StencilKind::Center;
            s.line[d] = {i - 1, i, i + 1};
            s.shift[d] = {0.0, 0.0, 0.0};
        }
    }
    if (dim_ == 1) {
        s.members.resize(3);
        for (int t = 0; t < 3; ++t) s.members[t] = element(s.line[0][t]);
    } else {
        s.members.resize(9);
        for (int t0 = 0; t0 < 3; ++t0)
            for (int t1 = 0; t1 < 3; ++t1)
                s.members[t0 * 3 + t1] = element(linear_index(s.line[0][t0], s.line[1][t1]));
    }
    return s;
}

ElementId TensorMesh::locate(const Point& p, int side_bias) const {
    std::array<int, 2> idx{0, 0};
    for (int d = 0; d < dim_; ++d) {
        const auto& bp = breakpoints_[d];
        const double snap = 1e-12 * std::max(1.0, extent(d));
        double x = p[d];
        if (x < bp.front() - snap || x > bp.back() + snap)
            throw InvalidArgumentError("locate: point outside domain");
        x = std::clamp(x, bp.front(), bp.back());
        auto it = std::upper_bound(bp.begin(), bp.end(), x);
        int i = static_cast<int>(it - bp.begin()) - 1;
        i = std::clamp(i, 0, cells(d) - 1);
        if (side_bias < 0 && i > 0 && x <= bp[i] + snap) --i;
        if (side_bias > 0 && i < cells(d) - 1 && x >= bp[i + 1] - snap) ++i;
        idx[d] = i;
    }
    ElementId e;
    e.idx = idx;
    e.linear = linear_index(idx[0], idx[1]);
    return e;
}

TensorMesh build_mesh(int dim, std::array<std::vector<double>, 2> breakpoints,
                      std::array<bool, 2> periodic) {
    return TensorMesh(dim, std::move(breakpoints), periodic);
}

TensorMesh uniform_mesh(int dim, std::array<int, 2> cells, Point lo, Point hi,
                        std::array<bool, 2> periodic) {
    std::array<std::vector<double>, 2> bp;
    for (int d = 0; d < dim; ++d) {
        if (cells[d] < 1) throw MeshError("uniform_mesh: cell count must be positive");
        bp[d].resize(cells[d] + 1);
        for (int i = 0; i <= cells[d]; ++i)
            bp[d][i] = lo[d] + (hi[d] - lo[d]) * static_cast<double>(i) / cells[d];
        bp[d].back() = hi[d];
    }
    return TensorMesh(dim, std::move(bp), periodic);
}

} // namespace rdg
