#pragma once

#include "risnoma/errors.hpp"

namespace risnoma {

/// Cascade |sum_{m=1}^{Q} conj(b_m) a_m|^2 with a_m ~ CN(0, var_a), b_m ~ CN(0, var_b).
struct CascadeParams {
    int q = 1;
    double var_a = 1.0;
    double var_b = 1.0;

    double scale() const noexcept { return var_a * var_b; }
    void check() const;
};

double cascade_pdf(double z, const CascadeParams& p);
double cascade_cdf(double z, const CascadeParams& p);
/// 1 - cascade_cdf, accurate in the upper tail.
double cascade_survival(double z, const CascadeParams& p);

/// K! / ((K-k)! (k-1)!)
double order_kappa(int k, int user_count);
double binomial(int n, int r);

/// CDF of the k-th smallest of K i.i.d. draws whose parent CDF equals u,
/// by the alternating sum kappa * sum_l C(K-k,l) (-1)^l u^{k+l} / (k+l).
/// Unclamped; can stray outside [0,1] by rounding only.
double order_statistic_cdf_raw(double u, int k, int user_count);
/// Same, clamped to [0,1].
double order_statistic_cdf(double u, int k, int user_count);
/// d/du of order_statistic_cdf: kappa u^{k-1} (1-u)^{K-k}.
double order_statistic_density_factor(double u, int k, int user_count);

double cascade_cdf_ordered(double z, int k, int user_count, const CascadeParams& p);

/// E|H|^2 = Q var_a var_b.
double mean_cascade_power(const CascadeParams& p);

}  // namespace risnoma
