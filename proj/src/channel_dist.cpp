#include "risnoma/channel_dist.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "risnoma/special_math.hpp"

namespace risnoma {

void CascadeParams::check() const
{
    if (q < 1 || q > special::kMaxOrder) throw DomainError("cascade: q must lie in [1, 512]");
    if (!(var_a > 0.0) || !(var_b > 0.0) || !std::isfinite(var_a) || !std::isfinite(var_b)) {
        throw DomainError("cascade: variances must be positive and finite");
    }
}

namespace {

void check_z(double z)
{
    if (std::isnan(z) || z < 0.0) throw DomainError("cascade: z must be non-negative");
}

void check_rank(int k, int user_count)
{
    if (user_count < 1 || k < 1 || k > user_count) {
        throw DomainError("order statistic: rank " + std::to_string(k) + " outside [1, " +
                          std::to_string(user_count) + "]");
    }
}

}  // namespace

double cascade_pdf(double z, const CascadeParams& p)
{
    p.check();
    check_z(z);
    return special::cascade_pdf_unit(p.q, z / p.scale()) / p.scale();
}

double cascade_cdf(double z, const CascadeParams& p)
{
    p.check();
    check_z(z);
    return special::cascade_cdf_unit(p.q, z / p.scale());
}

double cascade_survival(double z, const CascadeParams& p)
{
    p.check();
    check_z(z);
    return special::cascade_survival_unit(p.q, z / p.scale());
}

double binomial(int n, int r)
{
    if (r < 0 || r > n) return 0.0;
    r = std::min(r, n - r);
    double c = 1.0;
    for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
    return std::round(c);
}

double order_kappa(int k, int user_count)
{
    check_rank(k, user_count);
    // K!/((K-k)!(k-1)!) = k * C(K, k)
    return k * binomial(user_count, k);
}

double order_statistic_cdf_raw(double u, int k, int user_count)
{
    const double kappa = order_kappa(k, user_count);
    const int n = user_count - k;
    special::CompensatedSum acc;
    double sign = 1.0;
    double power = std::pow(u, k);
    for (int l = 0; l <= n; ++l) {
        acc.add(sign * binomial(n, l) * power / (k + l));
        sign = -sign;
        power *= u;
    }
    return kappa * acc.value();
}

double order_statistic_cdf(double u, int k, int user_count)
{
    if (std::isnan(u)) throw DomainError("order statistic: parent CDF is NaN");
    u = std::clamp(u, 0.0, 1.0);
    if (k == user_count) return std::pow(u, k);
    // Same quantity as the alternating sum, written as I_u(k, K - k + 1); the
    // sum cancels badly as u -> 1.
    return boost::math::ibeta(static_cast<double>(k), static_cast<double>(user_count - k + 1), u);
}

double order_statistic_density_factor(double u, int k, int user_count)
{
    const double kappa = order_kappa(k, user_count);
    u = std::clamp(u, 0.0, 1.0);
    return kappa * std::pow(u, k - 1) * std::pow(1.0 - u, user_count - k);
}

double cascade_cdf_ordered(double z, int k, int user_count, const CascadeParams& p)
{
    check_rank(k, user_count);
    return order_statistic_cdf(cascade_cdf(z, p), k, user_count);
}

double mean_cascade_power(const CascadeParams& p)
{
    p.check();
    return p.q * p.scale();
}

}  // namespace risnoma
