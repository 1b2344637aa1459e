#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "risnoma/errors.hpp"

namespace risnoma {

enum class Scenario { external, internal };
enum class SicMode { perfect, imperfect };
/// Which reading of the eavesdropper threshold to use. `with_nu_term` keeps the
/// superposition-interference term in the ipSIC external threshold and the
/// N_br N_re scale in the pSIC eavesdropper CDF; `as_printed` drops both.
enum class EveVariant { as_printed, with_nu_term };

std::string_view to_string(Scenario s) noexcept;
std::string_view to_string(SicMode s) noexcept;
std::string_view to_string(EveVariant v) noexcept;
Scenario parse_scenario(std::string_view text);
SicMode parse_sic_mode(std::string_view text);
EveVariant parse_eve_variant(std::string_view text);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

/// Every parameter of one RIS-NOMA downlink scenario. Defaults reproduce the
/// reference parameter table (K = 3, M = 16 split as P = 2 groups of Q = 8).
/// User indices are 1-based ranks, weakest first.
struct SystemConfig {
    int user_count = 3;
    int ris_elements = 16;
    int partition_p = 2;
    int group_size = 8;
    int active_column = 1;
    std::vector<double> power_alloc{0.6, 0.3, 0.1};
    std::optional<double> an_power_alloc;
    double snr_legit_db = 10.0;
    double snr_eve_db = 10.0;
    double residual_user_db = -20.0;
    double residual_eve_db = -20.0;
    SicMode sic_mode = SicMode::perfect;
    /// varpi; only consulted when sic_mode is imperfect.
    double residual_level = 1.0;
    double path_loss_exponent = 2.0;
    double dist_bs_ris = 3.0;
    std::vector<double> dist_ris_user{6.0, 4.0, 2.0};
    double dist_ris_eve = 8.0;
    std::vector<double> target_rates{0.04, 0.04, 0.04};
    Scenario scenario = Scenario::external;
    EveVariant eve_interference_variant = EveVariant::with_nu_term;

    /// Throws ValidationError naming the first offending field.
    void validate() const;

    /// varpi actually applied: 0 under perfect SIC.
    double effective_residual() const noexcept
    {
        return sic_mode == SicMode::perfect ? 0.0 : residual_level;
    }

    /// nu_g = a_{g+1} + ... + a_K for 1-based g.
    double nu(int g) const;

    /// First legitimate rank (user 1 is the eavesdropper in the internal case).
    int first_legit_user() const noexcept { return scenario == Scenario::internal ? 2 : 1; }
};

/// Derived distribution parameters. Vectors are indexed by user rank - 1.
struct ChannelStats {
    double n_br = 0.0;
    std::vector<double> n_rk;
    double n_re = 0.0;
    double n_ipu = 0.0;
    double n_ipe = 0.0;
    double rho = 0.0;
    double rho_e = 0.0;
    std::vector<double> zeta2_per_user;
};

ChannelStats derive_stats(const SystemConfig& config);

/// Free-function form of SystemConfig::nu.
double nu(const SystemConfig& config, int g);

/// Parse a JSON document on top of `base`. Unknown keys are rejected; absent
/// keys keep the base value. The result is validated.
SystemConfig config_from_json(std::string_view json_text, const SystemConfig& base = {});
SystemConfig load_config(const std::string& path, const SystemConfig& base = {});
std::string config_to_json(const SystemConfig& config, int indent = 2);

}  // namespace risnoma
