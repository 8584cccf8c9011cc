#pragma once

#include <cmath>
#include <limits>

namespace volflow {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// An integral (or norm) kept as log|value| and a sign.
///
/// tail_ratio is the largest integrand value on the truncation boundary
/// divided by the largest interior value; large ratios mean the box cut
/// off real mass. divergent marks closed forms whose integral is +inf
/// (log_abs is then +inf and sign is 0).
struct LogQuad {
    double log_abs = -kInf;
    int sign = 0;
    double tail_ratio = 0.0;
    bool divergent = false;
    bool flagged = false;

    static LogQuad from_log(double log_value, double tail = 0.0) {
        LogQuad q;
        q.log_abs = log_value;
        q.sign = std::isinf(log_value) && log_value < 0 ? 0 : 1;
        q.tail_ratio = tail;
        return q;
    }
    static LogQuad diverged() {
        LogQuad q;
        q.log_abs = kInf;
        q.sign = 0;
        q.divergent = true;
        return q;
    }

    bool is_zero() const { return sign == 0 && !divergent; }
    /// exp(log_abs) with sign; overflows to inf for huge values.
    double value() const { return sign == 0 ? (divergent ? kInf : 0.0) : sign * std::exp(log_abs); }
};

}  // namespace volflow
