#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace volflow {

inline constexpr int kMaxDim = 3;

/// Symmetric tensor grid over the box [-R_1, R_1] x ... x [-R_n, R_n].
///
/// Every axis has an odd node count so that the origin is a node and the
/// reflection x -> -x maps nodes onto nodes exactly. Node coordinates are
/// computed as (i - c) * h with c the center index, which makes the grid
/// bitwise symmetric. Values on the grid are stored row-major with the
/// last axis varying fastest.
class GridSpec {
public:
    GridSpec() = default;

    int dim() const { return dim_; }
    double half_width(int axis) const { return half_width_[axis]; }
    int points(int axis) const { return points_[axis]; }
    double spacing(int axis) const { return spacing_[axis]; }
    int center(int axis) const { return (points_[axis] - 1) / 2; }

    double coord(int axis, int i) const { return (i - center(axis)) * spacing_[axis]; }
    std::vector<double> axis_coords(int axis) const;

    std::size_t total() const;
    std::size_t stride(int axis) const;

    std::array<int, kMaxDim> unravel(std::size_t index) const;
    std::size_t ravel(const std::array<int, kMaxDim>& idx) const;
    /// Index of the node at -x.
    std::size_t mirror(std::size_t index) const;
    /// True if the node touches the outer face of the box on some axis.
    bool on_boundary(std::size_t index) const;
    std::array<double, kMaxDim> node(std::size_t index) const;

    /// Product of spacings (cell volume).
    double cell_volume() const;

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.dim_ == b.dim_ && a.points_ == b.points_ && a.spacing_ == b.spacing_;
    }

private:
    friend GridSpec make_grid(std::span<const double>, std::span<const int>);
    friend GridSpec make_grid_with_spacing(std::span<const double>, std::span<const int>);

    int dim_ = 0;
    std::array<double, kMaxDim> half_width_{};
    std::array<int, kMaxDim> points_{1, 1, 1};
    std::array<double, kMaxDim> spacing_{};
};

/// Isotropic grid. Throws std::invalid_argument on an even or too small
/// point count, a nonpositive half width, or dim outside {1,2,3}.
GridSpec make_grid(int dim, double half_width, int points);

/// Per-axis grid; both spans must have length dim.
GridSpec make_grid(std::span<const double> half_widths, std::span<const int> points);

/// Grid with a prescribed spacing per axis; half widths follow as c * h.
GridSpec make_grid_with_spacing(std::span<const double> spacings, std::span<const int> points);

}  // namespace volflow
