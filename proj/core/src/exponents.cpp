#include "volflow/exponents.hpp"

#include <cmath>
#include <stdexcept>

namespace volflow {

ExponentSchedule ExponentSchedule::endpoint(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("ExponentSchedule: s must be positive");
    ExponentSchedule e;
    e.s = s;
    e.p = -std::expm1(-2.0 * s);
    e.q = -std::expm1(2.0 * s);
    e.c1 = 1.0 / e.p;
    // q' = q/(q-1) equals p at the endpoint; use it directly so c1 == c2 exactly
    e.c2 = 1.0 / e.p;
    return e;
}

ExponentSchedule ExponentSchedule::custom(double s, double p, double q) {
    if (!(s > 0.0)) throw std::invalid_argument("ExponentSchedule: s must be positive");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("ExponentSchedule: need 0 < p < 1");
    if (!(q < 0.0)) throw std::invalid_argument("ExponentSchedule: need q < 0");
    ExponentSchedule e;
    e.s = s;
    e.p = p;
    e.q = q;
    e.c1 = 1.0 / p;
    e.c2 = (q - 1.0) / q;
    return e;
}

double nelson_q(double s, double p) { return 1.0 + std::exp(2.0 * s) * (p - 1.0); }

}  // namespace volflow
