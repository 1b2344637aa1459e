#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "risnoma/config.hpp"
#include "risnoma/monte_carlo.hpp"

namespace risnoma {

enum class SweepVariable { snr_db, snr_eve_db, power_offset_aT, ris_elements, target_rate };
enum class SweepOutput { analytic, asymptotic, empirical, system_sop, throughput };

std::string_view to_string(SweepVariable v) noexcept;
std::string_view to_string(SweepOutput o) noexcept;
SweepVariable parse_sweep_variable(std::string_view text);
SweepOutput parse_sweep_output(std::string_view text);

struct SweepSpec {
    SystemConfig config;
    Scenario scenario = Scenario::external;
    std::vector<SicMode> sic_modes{SicMode::perfect};
    SweepVariable variable = SweepVariable::snr_db;
    double start = 0.0;
    double end = 50.0;
    double step = 5.0;
    std::set<SweepOutput> outputs{SweepOutput::analytic};
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    int workers = 0;  ///< 0: hardware concurrency
    EveMode eve = EveMode::sampled;
    OrderingMode ordering = OrderingMode::common_variance;
    int quad_order = 300;

    /// Throws ValidationError naming the offending field.
    void validate() const;
    std::vector<double> values() const;
};

/// Config with the sweep variable set to `value` (validated).
SystemConfig apply_sweep_value(const SystemConfig& base, SweepVariable variable, double value);

/// Writes the CSV header and one row per (SIC mode, sweep value, user).
/// Columns not requested stay empty. The system SOP and throughput columns
/// use the analytic SOP when it is requested and the empirical one otherwise.
void run_sweep(const SweepSpec& spec, std::ostream& out);

inline constexpr std::string_view kSweepHeader =
    "sic_mode,sweep_value,user_k,analytic_sop,asymptotic_sop,empirical_sop,empirical_stderr,system_sop,"
    "throughput_bpcu";

}  // namespace risnoma
