#pragma once

namespace volflow {

/// Exponents attached to a time s. endpoint(s) gives the mutually
/// Hoelder-conjugate pair p = 1 - e^{-2s}, q = 1 - e^{2s}.
struct ExponentSchedule {
    double s = 0.0;
    double p = 0.0;
    double q = 0.0;
    double c1 = 0.0;  // 1/p
    double c2 = 0.0;  // 1/q', q' = q/(q-1)

    static ExponentSchedule endpoint(double s);
    /// Arbitrary admissible pair (0 < p < 1, q < 0) at time s.
    static ExponentSchedule custom(double s, double p, double q);

    double holder_conjugate_p() const { return p / (p - 1.0); }
};

/// Nelson's threshold q(s,p) = 1 + e^{2s}(p - 1).
double nelson_q(double s, double p);

}  // namespace volflow
