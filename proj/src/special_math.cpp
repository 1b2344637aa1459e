#include "risnoma/special_math.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace risnoma::special {

namespace {

std::atomic<double> g_bessel_fault{1.0};

constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kInf = std::numeric_limits<double>::infinity();

// psi(n) for positive integer n.
double digamma_int(int n)
{
    double h = 0.0;
    for (int j = 1; j < n; ++j) {
        h += 1.0 / j;
    }
    return h - kEulerGamma;
}

void check_order(int order, const char* what)
{
    if (order < 0 || order > kMaxOrder) {
        throw DomainError(std::string(what) + ": order " + std::to_string(order) +
                          " outside [0, " + std::to_string(kMaxOrder) + "]");
    }
}

}  // namespace

void CompensatedSum::add(double v) noexcept
{
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
        carry_ += (sum_ - t) + v;
    } else {
        carry_ += (v - t) + sum_;
    }
    sum_ = t;
}

// ---------------------------------------------------------------------------
// Laguerre polynomials and Gauss-Laguerre rules
// ---------------------------------------------------------------------------

LaguerreValue laguerre_eval(int n, double x)
{
    if (n < 0) {
        throw DomainError("laguerre_eval: negative degree");
    }
    double prev = 1.0;  // L_0
    double dprev = 0.0;
    if (n == 0) {
        return {prev, dprev};
    }
    double cur = 1.0 - x;  // L_1
    double dcur = -1.0;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        // L'_{k+1} = L'_k - L_k
        const double dnext = dcur - cur;
        prev = cur;
        cur = next;
        dcur = dnext;
    }
    return {cur, dcur};
}

ScaledLaguerre laguerre_eval_scaled(int n, double x)
{
    if (n < 0) {
        throw DomainError("laguerre_eval_scaled: negative degree");
    }
    constexpr double kBig = 1e150;
    constexpr double kShrink = 1e-150;
    const double log_shrink = std::log(kShrink);

    double prev = 1.0;
    double dprev = 0.0;
    double log_scale = 0.0;
    if (n == 0) {
        return {prev, dprev, log_scale};
    }
    double cur = 1.0 - x;
    double dcur = -1.0;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        const double dnext = dcur - cur;
        prev = cur;
        cur = next;
        dcur = dnext;
        if (std::abs(cur) > kBig || std::abs(dcur) > kBig) {
            prev *= kShrink;
            cur *= kShrink;
            dcur *= kShrink;
            log_scale -= log_shrink;
        }
    }
    return {cur, dcur, log_scale};
}

QuadratureRule gauss_laguerre(int order)
{
    if (order < 1 || order > kMaxOrder) {
        throw DomainError("gauss_laguerre: order " + std::to_string(order) + " outside [1, " +
                          std::to_string(kMaxOrder) + "]");
    }
    constexpr int kMaxIterations = 100;
    constexpr double kStepTolerance = 1e-14;

    const int n = order;
    QuadratureRule rule;
    rule.order = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    rule.log_weights.resize(n);

    auto sign_at = [n](double x) { return std::signbit(laguerre_eval_scaled(n, x).value); };

    double lo = 0.0;       // left end of the current search, sign(L_n) known there
    double spacing = 0.0;  // distance between the last two roots found
    for (int i = 0; i < n; ++i) {
        // Bracket root i. The first zero sits near j_{0,1}^2 / (4n + 2) < 3 / (n + 1/2)
        // and the second well beyond it; zero spacings grow monotonically, so
        // half the previous spacing never steps across two roots.
        const bool lo_negative = sign_at(lo);
        double hi;
        if (i == 0) {
            hi = 3.0 / (n + 0.5);
        } else {
            const double h = 0.5 * spacing;
            hi = lo + h;
            int guard = 0;
            while (sign_at(hi) == lo_negative) {
                lo = hi;
                hi += h;
                if (++guard > 100000) {
                    throw ComputationError("gauss_laguerre(" + std::to_string(n) +
                                           "): no bracket found for index " + std::to_string(i + 1));
                }
            }
        }
        // Safeguarded Newton inside [lo, hi].
        double z = 0.5 * (lo + hi);
        double a = lo;
        double b = hi;
        bool converged = false;
        for (int it = 0; it < kMaxIterations; ++it) {
            const ScaledLaguerre p = laguerre_eval_scaled(n, z);
            if (p.value == 0.0) {
                converged = true;
                break;
            }
            if (std::signbit(p.value) == lo_negative) {
                a = z;
            } else {
                b = z;
            }
            double next = z - p.value / p.derivative;
            if (!(next > a && next < b)) {
                next = 0.5 * (a + b);
            }
            const double step = next - z;
            z = next;
            if (std::abs(step) <= kStepTolerance * std::max(1.0, std::abs(z))) {
                converged = true;
                break;
            }
        }
        if (!converged || !std::isfinite(z) || (i > 0 && z <= rule.nodes[i - 1]) || z <= 0.0) {
            throw ComputationError("gauss_laguerre(" + std::to_string(n) +
                                   "): root refinement failed at index " + std::to_string(i + 1));
        }
        spacing = (i == 0) ? z : z - rule.nodes[i - 1];
        lo = z + 1e-3 * spacing;
        rule.nodes[i] = z;

        // w = tau / ((n+1)^2 L_{n+1}(tau)^2), evaluated in log-domain.
        const ScaledLaguerre next = laguerre_eval_scaled(n + 1, z);
        const double log_abs_next = std::log(std::abs(next.value)) + next.log_scale;
        const double log_w = std::log(z) - 2.0 * std::log(n + 1.0) - 2.0 * log_abs_next;
        rule.log_weights[i] = log_w;
        rule.weights[i] = std::exp(log_w);
    }
    return rule;
}

std::shared_ptr<const QuadratureRule> cached_gauss_laguerre(int order)
{
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const QuadratureRule>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(order); it != cache.end()) {
            return it->second;
        }
    }
    auto rule = std::make_shared<const QuadratureRule>(gauss_laguerre(order));
    std::lock_guard lock(mutex);
    return cache.emplace(order, std::move(rule)).first->second;
}

// ---------------------------------------------------------------------------
// Modified Bessel function of the second kind, integer order
// ---------------------------------------------------------------------------

namespace detail {

BesselPair bessel_k01_series(double x)
{
    const double t = 0.25 * x * x;
    const double log_half = std::log(0.5 * x);

    // I_0, I_1 and the digamma-weighted companion sums.
    double term0 = 1.0;  // t^k / (k!)^2
    double term1 = 1.0;  // t^k / (k! (k+1)!)
    double i0 = 1.0;
    double i1 = 1.0;
    double harmonic = 0.0;  // H_k
    double s0 = 0.0;        // sum H_k t^k/(k!)^2
    double s1 = 1.0 - 2.0 * kEulerGamma;  // k = 0: psi(1) + psi(2)
    for (int k = 1; k < 500; ++k) {
        term0 *= t / (static_cast<double>(k) * k);
        term1 *= t / (static_cast<double>(k) * (k + 1));
        harmonic += 1.0 / k;
        i0 += term0;
        i1 += term1;
        s0 += harmonic * term0;
        // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
        s1 += (2.0 * harmonic + 1.0 / (k + 1) - 2.0 * kEulerGamma) * term1;
        if (term0 < 1e-18 * i0 && term1 < 1e-18 * i1) {
            break;
        }
    }
    i1 *= 0.5 * x;
    const double k0 = -(log_half + kEulerGamma) * i0 + s0;
    const double k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1;
    return {k0, k1};
}

BesselPair bessel_k01_scaled_continued_fraction(double x)
{
    // Steed's algorithm for the Temme continued fraction, order mu = 0.
    constexpr double kEps = 1e-17;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < 100000; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) {
            break;
        }
    }
    h = a1 * h;
    const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
    const double k1 = k0 * (x + 0.5 - h) / x;
    return {k0, k1};
}

BesselPair bessel_k01_scaled_asymptotic(double x)
{
    // Hankel expansion; at x >= 1e4 the first neglected term is below 1e-30.
    double t0 = 1.0, t1 = 1.0, s0 = 1.0, s1 = 1.0;
    for (int k = 1; k <= 8; ++k) {
        const double odd = (2.0 * k - 1.0) * (2.0 * k - 1.0);
        t0 *= (0.0 - odd) / (k * 8.0 * x);
        t1 *= (4.0 - odd) / (k * 8.0 * x);
        s0 += t0;
        s1 += t1;
    }
    const double lead = std::sqrt(std::numbers::pi / (2.0 * x));
    return {lead * s0, lead * s1};
}

}  // namespace detail

namespace {

// log K_Q(x) without the fault factor.
double log_bessel_k_raw(int order, double x)
{
    double log_k0;
    double ratio;  // K_1 / K_0
    if (x <= detail::kBesselSeam) {
        const auto [k0, k1] = detail::bessel_k01_series(x);
        log_k0 = std::log(k0);
        ratio = k1 / k0;
    } else if (x >= detail::kBesselAsymptoticSeam) {
        const auto [k0, k1] = detail::bessel_k01_scaled_asymptotic(x);
        log_k0 = std::log(k0) - x;
        ratio = k1 / k0;
    } else {
        const auto [k0, k1] = detail::bessel_k01_scaled_continued_fraction(x);
        log_k0 = std::log(k0) - x;
        ratio = k1 / k0;
    }
    if (order == 0) {
        return log_k0;
    }
    // Upward recurrence on the ratio r_n = K_n / K_{n-1}; every term positive.
    double log_k = log_k0 + std::log(ratio);
    for (int n = 1; n < order; ++n) {
        ratio = 1.0 / ratio + 2.0 * n / x;
        log_k += std::log(ratio);
    }
    return log_k;
}

}  // namespace

double log_bessel_k(int order, double x)
{
    check_order(order, "bessel_k");
    if (!(x > 0.0)) {
        throw DomainError("bessel_k: argument must be positive");
    }
    return log_bessel_k_raw(order, x) + std::log(g_bessel_fault.load(std::memory_order_relaxed));
}

double bessel_k(int order, double x)
{
    const double lk = log_bessel_k(order, x);
    if (lk > std::log(std::numeric_limits<double>::max())) {
        return kInf;
    }
    return std::exp(lk);
}

double bessel_k_scaled(int order, double x)
{
    return std::exp(log_bessel_k(order, x) + x);
}

// ---------------------------------------------------------------------------
// Gamma at integers
// ---------------------------------------------------------------------------

double gamma_int(int q)
{
    if (q < 1 || q > kMaxOrder) {
        throw DomainError("gamma_int: argument must lie in [1, " + std::to_string(kMaxOrder) + "]");
    }
    if (q > 171) {
        return kInf;
    }
    double v = 1.0;
    for (int i = 2; i < q; ++i) {
        v *= i;
    }
    return v;
}

double log_gamma_int(int q)
{
    if (q < 1 || q > kMaxOrder) {
        throw DomainError("log_gamma_int: argument must lie in [1, " + std::to_string(kMaxOrder) +
                          "]");
    }
    if (q <= 171) {
        return std::log(gamma_int(q));
    }
    return std::lgamma(static_cast<double>(q));
}

// ---------------------------------------------------------------------------
// Generalized-K kernel shared by every cascade expression
// ---------------------------------------------------------------------------

namespace detail {

double cascade_cdf_unit_series(int q, double z)
{
    // Polynomial part: sum_{k=1}^{q-1} (-1)^{k+1} (q-k-1)! / ((q-1)! k!) z^k
    CompensatedSum sum;
    double coeff = 1.0 / (q - 1.0);
    double zk = z;
    for (int k = 1; k <= q - 1; ++k) {
        sum.add(((k % 2 == 1) ? 1.0 : -1.0) * coeff * zk);
        coeff /= (k + 1.0) * (q - k - 1.0);
        zk *= z;
    }
    // Logarithmic part: ((-1)^q / Gamma(q)) z^q sum_m [ln z - psi(m+1) - psi(q+m+1)] z^m/(m!(q+m)!)
    const double log_z = std::log(z);
    double b = std::exp(q * log_z - log_gamma_int(q) - std::lgamma(q + 1.0));
    double psi_a = -kEulerGamma;       // psi(m+1)
    double psi_b = digamma_int(q + 1);  // psi(q+m+1)
    CompensatedSum tail;
    for (int m = 0; m < 200 && b != 0.0; ++m) {
        const double term = (log_z - psi_a - psi_b) * b;
        tail.add(term);
        if (std::abs(term) < 1e-18 * std::abs(tail.value())) {
            break;
        }
        b *= z / ((m + 1.0) * (q + m + 1.0));
        psi_a += 1.0 / (m + 1.0);
        psi_b += 1.0 / (q + m + 1.0);
    }
    sum.add(((q % 2 == 0) ? 1.0 : -1.0) * tail.value());
    return sum.value();
}

double cascade_cdf_unit_complement(int q, double z)
{
    return 1.0 - cascade_survival_unit(q, z);
}

}  // namespace detail

namespace {

void check_kernel_args(int q, double z)
{
    if (q < 1 || q > kMaxOrder) {
        throw DomainError("cascade kernel: order must lie in [1, " + std::to_string(kMaxOrder) + "]");
    }
    if (!(z >= 0.0)) {
        throw DomainError("cascade kernel: argument must be nonnegative");
    }
}

// Small-z branch of the survival function; the fault factor multiplies the
// Bessel product exactly as it would on the log-domain branch.
double survival_from_series(int q, double z)
{
    const double f = std::clamp(detail::cascade_cdf_unit_series(q, z), 0.0, 1.0);
    return (1.0 - f) * g_bessel_fault.load(std::memory_order_relaxed);
}

}  // namespace

double cascade_survival_unit(int q, double z)
{
    check_kernel_args(q, z);
    if (z == 0.0) {
        return 1.0;
    }
    if (std::isinf(z)) {
        return 0.0;
    }
    if (z < detail::kCascadeSeriesSeam) {
        return std::clamp(survival_from_series(q, z), 0.0, 1.0);
    }
    const double log_s =
        std::log(2.0) - log_gamma_int(q) + 0.5 * q * std::log(z) + log_bessel_k(q, 2.0 * std::sqrt(z));
    return std::clamp(std::exp(log_s), 0.0, 1.0);
}

double cascade_cdf_unit(int q, double z)
{
    check_kernel_args(q, z);
    if (z == 0.0) {
        return 0.0;
    }
    if (z < detail::kCascadeSeriesSeam) {
        if (g_bessel_fault.load(std::memory_order_relaxed) == 1.0) {
            return std::clamp(detail::cascade_cdf_unit_series(q, z), 0.0, 1.0);
        }
        return std::clamp(1.0 - survival_from_series(q, z), 0.0, 1.0);
    }
    return 1.0 - cascade_survival_unit(q, z);
}

double cascade_pdf_unit(int q, double z)
{
    check_kernel_args(q, z);
    if (z == 0.0) {
        if (q == 1) {
            return kInf;
        }
        return q == 2 ? 1.0 : 0.0;
    }
    if (std::isinf(z)) {
        return 0.0;
    }
    const double log_f = std::log(2.0) - log_gamma_int(q) + 0.5 * (q - 1) * std::log(z) +
                         log_bessel_k(q - 1, 2.0 * std::sqrt(z));
    return std::exp(log_f);
}

namespace testing {

void set_bessel_fault(double factor) noexcept
{
    g_bessel_fault.store(factor, std::memory_order_relaxed);
}

double bessel_fault() noexcept
{
    return g_bessel_fault.load(std::memory_order_relaxed);
}

}  // namespace testing

}  // namespace risnoma::special
