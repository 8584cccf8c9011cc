#include "volflow/contract.hpp"

#include <stdexcept>

#include "volflow/logsumexp.hpp"
#include "volflow/quadrature.hpp"

namespace volflow {

std::vector<double> contract_axes(const GridSpec& in, const GridSpec& out, std::vector<double> log_values,
                                  const std::vector<const AxisKernel*>& kernels) {
    const int n = in.dim();
    if (out.dim() != n || static_cast<int>(kernels.size()) != n)
        throw std::invalid_argument("contract_axes: dimension mismatch");
    if (log_values.size() != in.total()) throw std::invalid_argument("contract_axes: value count mismatch");

    std::array<int, kMaxDim> shape{1, 1, 1};
    for (int k = 0; k < n; ++k) shape[k] = in.points(k);
    auto strides = [n](const std::array<int, kMaxDim>& s) {
        std::array<std::size_t, kMaxDim> st{1, 1, 1};
        for (int k = n - 2; k >= 0; --k) st[k] = st[k + 1] * static_cast<std::size_t>(s[k + 1]);
        return st;
    };

    std::vector<double> next;
    std::vector<double> buf;
    for (int axis = 0; axis < n; ++axis) {
        const AxisKernel& ker = *kernels[static_cast<std::size_t>(axis)];
        if (ker.in_points != shape[axis] || ker.out_points != out.points(axis))
            throw std::invalid_argument("contract_axes: kernel shape mismatch");
        auto out_shape = shape;
        out_shape[axis] = ker.out_points;
        const auto in_st = strides(shape);
        const auto out_st = strides(out_shape);
        std::size_t out_total = 1, lines = 1;
        for (int k = 0; k < n; ++k) {
            out_total *= static_cast<std::size_t>(out_shape[k]);
            if (k != axis) lines *= static_cast<std::size_t>(shape[k]);
        }
        next.assign(out_total, -kInf);
        buf.resize(static_cast<std::size_t>(ker.in_points));
        for (std::size_t l = 0; l < lines; ++l) {
            std::size_t rem = l, in_base = 0, out_base = 0;
            for (int k = n - 1; k >= 0; --k) {
                if (k == axis) continue;
                const auto sk = static_cast<std::size_t>(shape[k]);
                const std::size_t ik = rem % sk;
                rem /= sk;
                in_base += ik * in_st[k];
                out_base += ik * out_st[k];
            }
            bool any = false;
            for (int i = 0; i < ker.in_points; ++i) any = any || log_values[in_base + static_cast<std::size_t>(i) * in_st[axis]] != -kInf;
            if (!any) continue;
            for (int j = 0; j < ker.out_points; ++j) {
                for (int i = 0; i < ker.in_points; ++i)
                    buf[static_cast<std::size_t>(i)] = ker.at(j, i) + log_values[in_base + static_cast<std::size_t>(i) * in_st[axis]];
                next[out_base + static_cast<std::size_t>(j) * out_st[axis]] = logsumexp_symmetric(buf);
            }
        }
        log_values.swap(next);
        shape = out_shape;
    }
    return log_values;
}

AxisKernel exponential_kernel(const GridSpec& out, const GridSpec& in, int axis, double scale) {
    AxisKernel k;
    k.out_points = out.points(axis);
    k.in_points = in.points(axis);
    const auto x = out.axis_coords(axis);
    const auto z = in.axis_coords(axis);
    const auto lw = trapezoid_log_weights(in, axis);
    k.log_w.resize(static_cast<std::size_t>(k.out_points) * static_cast<std::size_t>(k.in_points));
    for (int j = 0; j < k.out_points; ++j)
        for (int i = 0; i < k.in_points; ++i)
            k.log_w[static_cast<std::size_t>(j) * static_cast<std::size_t>(k.in_points) + static_cast<std::size_t>(i)] =
                scale * x[static_cast<std::size_t>(j)] * z[static_cast<std::size_t>(i)] + lw[static_cast<std::size_t>(i)];
    return k;
}

}  // namespace volflow
