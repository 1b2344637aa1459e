#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace risnoma {

enum class ValidationLevel { quick, full };

std::string_view to_string(ValidationLevel level) noexcept;
ValidationLevel parse_validation_level(std::string_view text);

/// Monte Carlo trials used by the simulation-backed criteria at each level.
std::uint64_t trials_for(ValidationLevel level) noexcept;

/// One compared quantity. `measured` is tested against `threshold` with
/// `comparison`; `value` and `reference` carry the raw numbers behind it
/// when the measured metric is derived (a difference, a ratio...).
struct ValidationCheck {
    std::string label;
    std::optional<double> value;
    std::optional<double> reference;
    double measured = 0.0;
    std::string comparison;  ///< one of "<", "<=", ">", ">="
    double threshold = 0.0;
    bool passed = false;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string description;
    bool passed = false;
    double seconds = 0.0;
    std::string note;
    std::optional<std::string> error;  ///< set when the criterion threw
    std::vector<ValidationCheck> checks;
};

struct ValidationOptions {
    ValidationLevel level = ValidationLevel::quick;
    std::uint64_t seed = 1;
    int workers = 0;
    std::vector<int> only;  ///< criterion ids; empty runs all
    /// Multiplies every Bessel evaluation for the duration of the run
    /// (fault injection; 1 disables).
    double bessel_fault = 1.0;
    std::function<void(const CriterionResult&)> on_result;
};

struct ValidationReport {
    ValidationLevel level = ValidationLevel::quick;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string simd;
    double bessel_fault = 1.0;
    bool passed = false;
    std::vector<CriterionResult> criteria;

    std::vector<std::string> failed() const;
};

struct CriterionInfo {
    int id;
    std::string_view name;
    std::string_view description;
};

const std::vector<CriterionInfo>& criteria_catalog();

ValidationReport run_validation(const ValidationOptions& options);

/// Serialized form described by docs/validation_report.schema.json.
std::string report_to_json(const ValidationReport& report, int indent = 2);

/// e^x K_nu(x) from the integral representation
///   int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt,
/// by fixed-panel Gauss-Kronrod around the integrand peak. Independent of
/// the series and continued-fraction code in special_math.
double bessel_k_scaled_integral(int nu, double x);

}  // namespace risnoma
