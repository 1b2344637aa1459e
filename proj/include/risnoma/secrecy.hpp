#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "risnoma/config.hpp"

namespace risnoma {

/// Which user, which decoding stage and which model branch to evaluate.
/// `quad_order_d` drives the legitimate-side residual quadrature,
/// `quad_order_s` the eavesdropper-side one.
struct SecrecyQuery {
    int user_k = 1;
    int decode_g = 1;
    Scenario scenario = Scenario::external;
    SicMode sic_mode = SicMode::perfect;
    int quad_order_d = 300;
    int quad_order_s = 300;

    /// Own-signal query for user k with scenario and SIC mode taken from the config.
    static SecrecyQuery from(const SystemConfig& config, int k);

    /// Throws ValidationError on an invalid rank combination.
    void validate(const SystemConfig& config) const;
};

struct AsymptoticSop {
    double raw = 0.0;      ///< unclamped; keeps the exact power law for slope fits
    double clamped = 0.0;  ///< raw clamped to [0,1]
};

struct NumericSop {
    double value = 0.0;
    double error_estimate = 0.0;
};

struct DiversityEstimate {
    std::optional<double> slope;  ///< empty when the curve underflows on the grid
    bool used_asymptotic = false;
    std::string note;
};

/// Closed-form and numeric secrecy quantities for one validated scenario.
/// Immutable after construction; safe to share across threads.
class SecrecyEngine {
public:
    explicit SecrecyEngine(SystemConfig config);

    const SystemConfig& config() const noexcept { return config_; }
    const ChannelStats& stats() const noexcept { return stats_; }

    /// CDF of the SINR with which user k decodes user g's message.
    double cdf_sinr_legit(double x, const SecrecyQuery& q) const;

    /// CDF and density of the eavesdropper's SINR for user k's message.
    double sinr_eve_cdf(double x, const SecrecyQuery& q) const;
    double pdf_sinr_eve(double x, const SecrecyQuery& q) const;

    /// Upper end of the eavesdropper SINR support, a_k / nu_k (inf for k = K).
    double eve_support_end(int k) const;

    /// Mean-field eavesdropper threshold for residual node tau (tau ignored under pSIC).
    double eve_threshold(const SecrecyQuery& q, double tau) const;

    double sop_closed_form(const SecrecyQuery& q) const;
    NumericSop sop_exact_numeric(const SecrecyQuery& q, double rel_tol = 1e-9) const;
    AsymptoticSop sop_asymptotic(const SecrecyQuery& q) const;

    /// Negative least-squares slope of log10 SOP against log10 rho over the
    /// grid. Falls back to the asymptotic curve when the closed form drops
    /// below 1e-14 anywhere on the grid.
    DiversityEstimate diversity_order_estimate(const SecrecyQuery& q,
                                               std::span<const double> rho_grid_db) const;

private:
    double residual(SicMode mode) const noexcept;
    double eve_variance_product(Scenario s) const;

    SystemConfig config_;
    ChannelStats stats_;
};

double system_sop(std::span<const double> per_user_sop);
double throughput_delay_limited(std::span<const double> per_user_sop, std::span<const double> target_rates);
double secrecy_rate(double gamma_legit, double gamma_eve);

struct UserSecrecy {
    int user_k = 0;
    double analytic = 0.0;
    AsymptoticSop asymptotic;
    std::optional<double> empirical;
    std::optional<double> empirical_stderr;
    std::optional<double> diversity;
};

struct SecrecyReport {
    std::vector<UserSecrecy> per_user;
    double system_sop = 0.0;
    double throughput_bpcu = 0.0;
};

/// Analytic report for every legitimate user of the config (ranks >= 2 in the
/// internal scenario). Empirical fields stay empty.
SecrecyReport analytic_report(const SystemConfig& config, SicMode mode, int quad_order = 300);

}  // namespace risnoma
