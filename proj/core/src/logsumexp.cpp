#include "volflow/logsumexp.hpp"

#include <algorithm>
#include <stdexcept>

namespace volflow {

double logsumexp(std::span<const double> v) {
    double m = -kInf;
    for (double x : v) m = std::max(m, x);
    if (m == -kInf) return -kInf;
    if (m == kInf) return kInf;
    double s = 0.0;
    for (double x : v)
        if (x != -kInf) s += std::exp(x - m);
    return m + std::log(s);
}

double logsumexp_symmetric(const double* base, std::size_t n, std::size_t stride) {
    if (n % 2 == 0) throw std::invalid_argument("logsumexp_symmetric: odd length required");
    double m = -kInf;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, base[i * stride]);
    if (m == -kInf) return -kInf;
    if (m == kInf) return kInf;
    const std::size_t c = n / 2;
    auto term = [&](std::size_t i) {
        const double x = base[i * stride];
        return x == -kInf ? 0.0 : std::exp(x - m);
    };
    double s = term(c);
    for (std::size_t k = 1; k <= c; ++k) s += term(c - k) + term(c + k);
    return m + std::log(s);
}

double logsumexp_symmetric(std::span<const double> v) {
    return logsumexp_symmetric(v.data(), v.size(), 1);
}

}  // namespace volflow
