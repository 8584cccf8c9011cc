#pragma once

#include <cmath>
#include <span>

#include "volflow/log_quad.hpp"

namespace volflow {

/// log(sum exp(v)), skipping -inf entries. Returns -inf when nothing is left.
double logsumexp(std::span<const double> v);

/// Same reduction, but summed outward from the middle entry in mirrored
/// pairs: v[c] + (v[c-1] + v[c+1]) + (v[c-2] + v[c+2]) + ...
/// Reversing v gives a bitwise identical result, which keeps symmetric
/// contractions exactly even. v.size() must be odd.
double logsumexp_symmetric(std::span<const double> v);

/// Strided variant of logsumexp_symmetric over n values base[0], base[stride], ...
double logsumexp_symmetric(const double* base, std::size_t n, std::size_t stride);

/// log(exp(a) + exp(b)).
inline double logaddexp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(-std::fabs(a - b)));
}

}  // namespace volflow
