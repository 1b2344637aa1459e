#pragma once

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include "risnoma/channel_dist.hpp"
#include "risnoma/config.hpp"

namespace risnoma {

enum class EveMode { sampled, mean_field };
enum class OrderingMode { common_variance, per_user_distance };

std::string_view to_string(EveMode m) noexcept;
std::string_view to_string(OrderingMode m) noexcept;
EveMode parse_eve_mode(std::string_view text);
OrderingMode parse_ordering_mode(std::string_view text);

/// SplitMix64 step; also used to derive per-trial seeds.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// xoshiro256** seeded from (master_seed, stream) through SplitMix64, so every
/// trial owns an independent, order-free stream.
class TrialRng {
public:
    TrialRng(std::uint64_t master_seed, std::uint64_t stream) noexcept;

    std::uint64_t next() noexcept;
    /// Uniform on [0, 1).
    double uniform() noexcept;
    /// Zero-mean circularly-symmetric complex Gaussian with E|h|^2 = variance.
    std::complex<double> complex_gaussian(double variance) noexcept;

private:
    std::uint64_t s_[4];
};

/// One draw of the physical channel: a shared BS-RIS hop, per-user RIS-user
/// hops with their own variances, the RIS-Eve hop and the SIC residuals.
struct ChannelRealization {
    std::vector<std::complex<double>> h_br;
    std::vector<std::vector<std::complex<double>>> h_rk;  ///< indexed by physical user
    std::vector<std::complex<double>> h_re;
    std::vector<std::complex<double>> h_ipu;  ///< one per user
    std::vector<std::complex<double>> h_ipe;  ///< one per decoded message
    std::vector<double> cascades;             ///< |H_k|^2 sorted ascending (rank order)
    std::vector<double> cascades_by_user;     ///< |H_k|^2 in physical user order
    double cascade_eve = 0.0;                 ///< |H_e|^2
};

ChannelRealization sample_realization(const SystemConfig& config, const ChannelStats& stats,
                                      std::uint64_t trial_index, std::uint64_t master_seed);

struct SimOptions {
    Scenario scenario = Scenario::external;
    SicMode sic_mode = SicMode::perfect;
    OrderingMode ordering = OrderingMode::common_variance;
    EveMode eve = EveMode::sampled;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    int workers = 0;  ///< 0: hardware concurrency
};

struct SimResult {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<int> users;  ///< rank of each entry below
    std::vector<std::uint64_t> outage_count;
    std::vector<double> empirical_sop;
    std::vector<double> standard_error;

    /// Fills empirical_sop and standard_error from the counts.
    void finalize();
};

/// Empirical secrecy outage per legitimate user (ranks >= 2 when internal).
SimResult empirical_sop(const SystemConfig& config, const SimOptions& options);

/// Delay-limited throughput evaluated with empirical SOP.
double empirical_throughput(const SystemConfig& config, const SimOptions& options);

/// TDMA baseline with per-slot full power; the OMA target rate is the sum of
/// the configured NOMA rates. Entries are physical users 1..K.
SimResult oma_baseline_sop(const SystemConfig& config, const SimOptions& options);
double oma_throughput(const SystemConfig& config, const SimResult& oma);

/// Independent cascade draws for distribution tests.
std::vector<double> sample_cascades(const CascadeParams& params, std::size_t count, std::uint64_t seed);
/// k-th smallest of `user_count` i.i.d. cascades per trial.
std::vector<double> sample_ordered_cascades(const CascadeParams& params, int k, int user_count,
                                            std::size_t count, std::uint64_t seed);

}  // namespace risnoma
