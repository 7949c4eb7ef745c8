#pragma once

#include <array>
#include <vector>

#include "rdg/errors.hpp"

namespace rdg {

// Physical point; in 1D only the first component is used.
using Point = std::array<double, 2>;

struct ElementId {
    std::array<int, 2> idx{0, 0}; // 0-based index per direction
    long linear = 0;              // element-major, direction-1 fastest
};

enum class StencilKind { Center, Backward, Forward };

// The 3^d-element patch around an owner element. Members are ordered as the
// tensor product of the per-direction lines, direction-2 index fastest; each
// line lists element indices ascending along its direction.
struct Stencil {
    ElementId owner;
    std::array<StencilKind, 2> kind{StencilKind::Center, StencilKind::Center};
    std::array<std::array<int, 3>, 2> line{};       // element index per direction
    std::array<std::array<double, 3>, 2> shift{};   // periodic wrap offset of member centers
    std::vector<ElementId> members;

    int member_count() const { return static_cast<int>(members.size()); }
};

// Tensor-product rectangular mesh in 1 or 2 dimensions.
class TensorMesh {
public:
    TensorMesh(int dim, std::array<std::vector<double>, 2> breakpoints,
               std::array<bool, 2> periodic);

    int dim() const { return dim_; }
    int cells(int dir) const { return static_cast<int>(size_[dir].size()); }
    long element_count() const;
    bool periodic(int dir) const { return periodic_[dir]; }

    const std::vector<double>& breakpoints(int dir) const { return breakpoints_[dir]; }
    double lo(int dir) const { return breakpoints_[dir].front(); }
    double hi(int dir) const { return breakpoints_[dir].back(); }
    double extent(int dir) const { return hi(dir) - lo(dir); }
    double measure() const;

    double size(int dir, int i) const { return size_[dir][i]; }
    double center(int dir, int i) const { return center_[dir][i]; }

    double max_size() const;
    double min_size() const;
    double regularity_ratio() const { return max_size() / min_size(); }

    long linear_index(int i0, int i1 = 0) const;
    ElementId element(long linear) const;
    std::array<double, 2> element_sizes(const ElementId& e) const;
    std::array<double, 2> element_center(const ElementId& e) const;

    Stencil stencil_of(const ElementId& e) const;

    // Element containing p. side_bias picks the lower (-1) or upper (+1)
    // neighbor when p sits on an interior breakpoint. Throws
    // InvalidArgumentError for points outside the domain.
    ElementId locate(const Point& p, int side_bias = -1) const;

private:
    int dim_;
    std::array<std::vector<double>, 2> breakpoints_;
    std::array<bool, 2> periodic_{false, false};
    std::array<std::vector<double>, 2> size_;
    std::array<std::vector<double>, 2> center_;
};

TensorMesh build_mesh(int dim, std::array<std::vector<double>, 2> breakpoints,
                      std::array<bool, 2> periodic);

// Uniform mesh with `cells[dir]` elements per direction on [lo, hi].
TensorMesh uniform_mesh(int dim, std::array<int, 2> cells, Point lo, Point hi,
                        std::array<bool, 2> periodic);

} // namespace rdg
