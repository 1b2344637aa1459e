#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "risnoma/errors.hpp"

namespace risnoma {

namespace special {

inline constexpr int kMaxOrder = 512;

struct LaguerreValue {
    double value;
    double derivative;
};

/// L_n(x) and L_n'(x) by the three-term recurrence.
LaguerreValue laguerre_eval(int n, double x);

/// Same recurrence with running rescaling. The true pair is
/// (value, derivative) * exp(log_scale); usable where L_n(x) overflows.
struct ScaledLaguerre {
    double value;
    double derivative;
    double log_scale;
};
ScaledLaguerre laguerre_eval_scaled(int n, double x);

/// Gauss-Laguerre rule for the weight e^{-t} on [0, inf).
///
/// Weights whose magnitude falls below the smallest subnormal are stored as
/// 0; `log_weights` keeps the exact logarithm for every node.
struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> log_weights;
};

QuadratureRule gauss_laguerre(int order);

/// Process-wide memoized rule; safe to call concurrently.
std::shared_ptr<const QuadratureRule> cached_gauss_laguerre(int order);

/// K_Q(x) for integer Q >= 0, x > 0. Returns +inf when the value exceeds
/// the double range and 0 when it underflows.
double bessel_k(int order, double x);

/// log K_Q(x); finite wherever x > 0.
double log_bessel_k(int order, double x);

/// e^x K_Q(x).
double bessel_k_scaled(int order, double x);

/// Gamma(Q) = (Q-1)! for Q >= 1; +inf past Q = 171.
double gamma_int(int q);
double log_gamma_int(int q);

/// Survival function of the unit-scale cascade gain,
///   (2 / Gamma(Q)) z^{Q/2} K_Q(2 sqrt z),
/// evaluated in log-domain. Equals 1 at z = 0.
double cascade_survival_unit(int q, double z);

/// 1 - cascade_survival_unit, without cancellation for small z.
double cascade_cdf_unit(int q, double z);

/// Density of the unit-scale cascade gain,
///   (2 / Gamma(Q)) z^{(Q-1)/2} K_{Q-1}(2 sqrt z).
double cascade_pdf_unit(int q, double z);

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double v) noexcept;
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

namespace detail {
// Exposed for seam tests: each branch evaluated unconditionally.
struct BesselPair {
    double k0;
    double k1;
};
BesselPair bessel_k01_series(double x);
/// Returns e^x K_0(x), e^x K_1(x).
BesselPair bessel_k01_scaled_continued_fraction(double x);

/// Returns e^x K_0(x), e^x K_1(x) from the large-argument expansion.
BesselPair bessel_k01_scaled_asymptotic(double x);

inline constexpr double kBesselSeam = 2.0;
inline constexpr double kBesselAsymptoticSeam = 1e4;
inline constexpr double kCascadeSeriesSeam = 0.25;

double cascade_cdf_unit_series(int q, double z);
double cascade_cdf_unit_complement(int q, double z);
}  // namespace detail

namespace testing {
/// Multiplies every bessel_k* result by `factor`. Fault-injection hook for
/// the validation harness; 1.0 restores normal operation.
void set_bessel_fault(double factor) noexcept;
double bessel_fault() noexcept;
}  // namespace testing

}  // namespace special
}  // namespace risnoma
