#include "volflow/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace volflow {

std::vector<double> GridSpec::axis_coords(int axis) const {
    std::vector<double> out(static_cast<std::size_t>(points_[axis]));
    for (int i = 0; i < points_[axis]; ++i) out[static_cast<std::size_t>(i)] = coord(axis, i);
    return out;
}

std::size_t GridSpec::total() const {
    std::size_t n = 1;
    for (int k = 0; k < dim_; ++k) n *= static_cast<std::size_t>(points_[k]);
    return n;
}

std::size_t GridSpec::stride(int axis) const {
    std::size_t s = 1;
    for (int k = dim_ - 1; k > axis; --k) s *= static_cast<std::size_t>(points_[k]);
    return s;
}

std::array<int, kMaxDim> GridSpec::unravel(std::size_t index) const {
    std::array<int, kMaxDim> idx{};
    for (int k = dim_ - 1; k >= 0; --k) {
        const auto n = static_cast<std::size_t>(points_[k]);
        idx[k] = static_cast<int>(index % n);
        index /= n;
    }
    return idx;
}

std::size_t GridSpec::ravel(const std::array<int, kMaxDim>& idx) const {
    std::size_t index = 0;
    for (int k = 0; k < dim_; ++k) index = index * static_cast<std::size_t>(points_[k]) + static_cast<std::size_t>(idx[k]);
    return index;
}

std::size_t GridSpec::mirror(std::size_t index) const {
    auto idx = unravel(index);
    for (int k = 0; k < dim_; ++k) idx[k] = points_[k] - 1 - idx[k];
    return ravel(idx);
}

bool GridSpec::on_boundary(std::size_t index) const {
    const auto idx = unravel(index);
    for (int k = 0; k < dim_; ++k)
        if (idx[k] == 0 || idx[k] == points_[k] - 1) return true;
    return false;
}

std::array<double, kMaxDim> GridSpec::node(std::size_t index) const {
    const auto idx = unravel(index);
    std::array<double, kMaxDim> x{};
    for (int k = 0; k < dim_; ++k) x[k] = coord(k, idx[k]);
    return x;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int k = 0; k < dim_; ++k) v *= spacing_[k];
    return v;
}

namespace {

void check_axis(double half_width, int points) {
    if (points < 3 || points % 2 == 0)
        throw std::invalid_argument("grid axis needs an odd point count >= 3, got " + std::to_string(points));
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("grid half width must be positive and finite");
}

}  // namespace

GridSpec make_grid(std::span<const double> half_widths, std::span<const int> points) {
    if (half_widths.size() != points.size())
        throw std::invalid_argument("make_grid: half_widths and points differ in length");
    const int dim = static_cast<int>(points.size());
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("make_grid: dim must be 1, 2 or 3");
    GridSpec g;
    g.dim_ = dim;
    for (int k = 0; k < dim; ++k) {
        check_axis(half_widths[k], points[k]);
        g.half_width_[k] = half_widths[k];
        g.points_[k] = points[k];
        g.spacing_[k] = 2.0 * half_widths[k] / (points[k] - 1);
    }
    return g;
}

GridSpec make_grid(int dim, double half_width, int points) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("make_grid: dim must be 1, 2 or 3");
    std::array<double, kMaxDim> hw{};
    std::array<int, kMaxDim> np{};
    hw.fill(half_width);
    np.fill(points);
    return make_grid(std::span<const double>(hw.data(), static_cast<std::size_t>(dim)),
                     std::span<const int>(np.data(), static_cast<std::size_t>(dim)));
}

GridSpec make_grid_with_spacing(std::span<const double> spacings, std::span<const int> points) {
    std::array<double, kMaxDim> hw{};
    for (std::size_t k = 0; k < spacings.size() && k < hw.size(); ++k) {
        if (!(spacings[k] > 0.0)) throw std::invalid_argument("grid spacing must be positive");
        hw[k] = spacings[k] * ((points[k] - 1) / 2);
    }
    GridSpec g = make_grid(std::span<const double>(hw.data(), spacings.size()), points);
    // keep the requested spacing exactly; the half width is derived from it
    for (std::size_t k = 0; k < spacings.size(); ++k) g.spacing_[k] = spacings[k];
    return g;
}

}  // namespace volflow
