#include "risnoma/monte_carlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <thread>

#include "risnoma/kernels.hpp"
#include "risnoma/secrecy.hpp"

namespace risnoma {

std::string_view to_string(EveMode m) noexcept
{
    return m == EveMode::sampled ? "sampled" : "mean_field";
}

std::string_view to_string(OrderingMode m) noexcept
{
    return m == OrderingMode::common_variance ? "common_variance" : "per_user_distance";
}

EveMode parse_eve_mode(std::string_view text)
{
    if (text == "sampled") return EveMode::sampled;
    if (text == "mean-field" || text == "mean_field") return EveMode::mean_field;
    throw ValidationError("eve", "expected sampled or mean-field, got '" + std::string(text) + "'");
}

OrderingMode parse_ordering_mode(std::string_view text)
{
    if (text == "common-variance" || text == "common_variance") return OrderingMode::common_variance;
    if (text == "per-user-distance" || text == "per_user_distance") return OrderingMode::per_user_distance;
    throw ValidationError("ordering",
                          "expected common-variance or per-user-distance, got '" + std::string(text) + "'");
}

std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

TrialRng::TrialRng(std::uint64_t master_seed, std::uint64_t stream) noexcept
{
    std::uint64_t sm = master_seed;
    const std::uint64_t key = splitmix64(sm);
    sm = key ^ (stream * 0xD1B54A32D192ED03ull);
    for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t TrialRng::next() noexcept
{
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
}

double TrialRng::uniform() noexcept
{
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::complex<double> TrialRng::complex_gaussian(double variance) noexcept
{
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-variance * std::log(u1));
    const double phase = 2.0 * std::numbers::pi * u2;
    return {mag * std::cos(phase), mag * std::sin(phase)};
}

namespace {

double cascade_of(const std::vector<std::complex<double>>& first, const std::vector<std::complex<double>>& second)
{
    double re = 0.0;
    double im = 0.0;
    for (std::size_t m = 0; m < first.size(); ++m) {
        const double ar = first[m].real(), ai = first[m].imag();
        const double br = second[m].real(), bi = second[m].imag();
        re = re + (br * ar + bi * ai);
        im = im + (br * ai - bi * ar);
    }
    return re * re + im * im;
}

}  // namespace

ChannelRealization sample_realization(const SystemConfig& config, const ChannelStats& stats,
                                      std::uint64_t trial_index, std::uint64_t master_seed)
{
    const int Q = config.group_size;
    const int K = config.user_count;
    TrialRng rng(master_seed, trial_index);
    ChannelRealization r;
    r.h_br.resize(static_cast<std::size_t>(Q));
    for (auto& h : r.h_br) h = rng.complex_gaussian(stats.n_br);
    r.h_rk.resize(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
        auto& v = r.h_rk[static_cast<std::size_t>(i)];
        v.resize(static_cast<std::size_t>(Q));
        for (auto& h : v) h = rng.complex_gaussian(stats.n_rk[static_cast<std::size_t>(i)]);
    }
    r.h_re.resize(static_cast<std::size_t>(Q));
    for (auto& h : r.h_re) h = rng.complex_gaussian(stats.n_re);
    r.h_ipu.resize(static_cast<std::size_t>(K));
    for (auto& h : r.h_ipu) h = rng.complex_gaussian(stats.n_ipu);
    r.h_ipe.resize(static_cast<std::size_t>(K));
    for (auto& h : r.h_ipe) h = rng.complex_gaussian(stats.n_ipe);

    for (const auto& hr : r.h_rk) r.cascades_by_user.push_back(cascade_of(r.h_br, hr));
    r.cascades = r.cascades_by_user;
    std::sort(r.cascades.begin(), r.cascades.end());
    r.cascade_eve = cascade_of(r.h_br, r.h_re);
    return r;
}

void SimResult::finalize()
{
    empirical_sop.resize(outage_count.size());
    standard_error.resize(outage_count.size());
    for (std::size_t i = 0; i < outage_count.size(); ++i) {
        const double p = trials == 0 ? 0.0 : static_cast<double>(outage_count[i]) / static_cast<double>(trials);
        empirical_sop[i] = p;
        standard_error[i] = trials == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    }
}

namespace {

constexpr std::size_t kBlock = 256;

/// SoA buffers holding `sets` groups of Q complex pairs for one block.
struct PairBuffer {
    std::vector<double> a_re, a_im, b_re, b_im;
    std::size_t q = 0;

    void resize(std::size_t sets, std::size_t q_)
    {
        q = q_;
        const std::size_t n = sets * q * kBlock;
        a_re.assign(n, 0.0);
        a_im.assign(n, 0.0);
        b_re.assign(n, 0.0);
        b_im.assign(n, 0.0);
    }
    std::size_t index(std::size_t set, std::size_t m, std::size_t lane) const
    {
        return (set * q + m) * kBlock + lane;
    }
    void put_a(std::size_t set, std::size_t m, std::size_t lane, std::complex<double> h)
    {
        a_re[index(set, m, lane)] = h.real();
        a_im[index(set, m, lane)] = h.imag();
    }
    void put_b(std::size_t set, std::size_t m, std::size_t lane, std::complex<double> h)
    {
        b_re[index(set, m, lane)] = h.real();
        b_im[index(set, m, lane)] = h.imag();
    }
};

struct SimPlan {
    const SystemConfig* config;
    ChannelStats stats;
    SimOptions options;
    bool oma = false;
    std::vector<int> users;  // ranks (NOMA) or physical users (OMA)
};

struct WorkerState {
    PairBuffer legit;  // common: K unit sets; per-user: h_br in every a, h_rk (K sets) then h_re in b
    PairBuffer eve;    // common: eve unit sets
    std::vector<double> gains;      // K rows
    std::vector<double> eve_gains;  // rows as needed
    std::vector<double> ipu;        // K rows of |h_ipu|^2
    std::vector<double> ipe;        // K rows of |h_ipe|^2
    std::vector<double> gamma_l, gamma_e;
};

void run_block(const SimPlan& plan, const kernels::KernelTable& kt, std::uint64_t first, std::size_t n,
               WorkerState& ws, std::vector<std::uint64_t>& counts)
{
    const SystemConfig& c = *plan.config;
    const ChannelStats& st = plan.stats;
    const int K = c.user_count;
    const int Q = c.group_size;
    const auto q = static_cast<std::size_t>(Q);
    const bool common = !plan.oma && plan.options.ordering == OrderingMode::common_variance;
    const bool internal = !plan.oma && plan.options.scenario == Scenario::internal;
    const bool eve_sampled = plan.oma || plan.options.eve == EveMode::sampled;
    const std::size_t eve_sets = (common && eve_sampled) ? (internal ? static_cast<std::size_t>(K) : 1) : 0;

    for (std::size_t j = 0; j < n; ++j) {
        TrialRng rng(plan.options.seed, first + j);
        if (common) {
            for (std::size_t i = 0; i < static_cast<std::size_t>(K); ++i) {
                for (std::size_t m = 0; m < q; ++m) {
                    ws.legit.put_a(i, m, j, rng.complex_gaussian(1.0));
                    ws.legit.put_b(i, m, j, rng.complex_gaussian(1.0));
                }
            }
            for (std::size_t i = 0; i < eve_sets; ++i) {
                for (std::size_t m = 0; m < q; ++m) {
                    ws.eve.put_a(i, m, j, rng.complex_gaussian(1.0));
                    ws.eve.put_b(i, m, j, rng.complex_gaussian(1.0));
                }
            }
        } else {
            // Same draw order as sample_realization.
            for (std::size_t m = 0; m < q; ++m) {
                const auto h = rng.complex_gaussian(st.n_br);
                for (std::size_t i = 0; i <= static_cast<std::size_t>(K); ++i) ws.legit.put_a(i, m, j, h);
            }
            for (std::size_t i = 0; i < static_cast<std::size_t>(K); ++i) {
                for (std::size_t m = 0; m < q; ++m) ws.legit.put_b(i, m, j, rng.complex_gaussian(st.n_rk[i]));
            }
            for (std::size_t m = 0; m < q; ++m) ws.legit.put_b(static_cast<std::size_t>(K), m, j,
                                                               rng.complex_gaussian(st.n_re));
        }
        for (std::size_t i = 0; i < static_cast<std::size_t>(K); ++i) {
            ws.ipu[i * kBlock + j] = std::norm(rng.complex_gaussian(st.n_ipu));
        }
        for (std::size_t i = 0; i < static_cast<std::size_t>(K); ++i) {
            ws.ipe[i * kBlock + j] = std::norm(rng.complex_gaussian(st.n_ipe));
        }
    }

    const auto& L = ws.legit;
    auto gain_row = [&](const PairBuffer& buf, std::size_t set, double* out) {
        const std::size_t off = buf.index(set, 0, 0);
        kt.cascade_gain(Q, kBlock, buf.a_re.data() + off, buf.a_im.data() + off, buf.b_re.data() + off,
                        buf.b_im.data() + off, out);
    };
    for (std::size_t i = 0; i < static_cast<std::size_t>(K); ++i) gain_row(L, i, ws.gains.data() + i * kBlock);
    double* eve_row = ws.eve_gains.data();
    if (common) {
        for (std::size_t i = 0; i < eve_sets; ++i) gain_row(ws.eve, i, ws.eve_gains.data() + i * kBlock);
        if (internal && eve_sets > 0) kt.sort_lanes(K, kBlock, ws.eve_gains.data());
    } else {
        gain_row(L, static_cast<std::size_t>(K), eve_row);
    }
    if (!plan.oma) kt.sort_lanes(K, kBlock, ws.gains.data());
    // Per-user mode, internal Eve: the weakest user after ordering.
    if (!common && internal && !plan.oma) eve_row = ws.gains.data();

    const double rho = st.rho;
    const double rho_e = st.rho_e;
    const double w = plan.options.sic_mode == SicMode::perfect ? 0.0 : c.residual_level;
    double eve_scale = 1.0;
    if (common) eve_scale = st.n_br * (internal ? st.n_rk.front() : st.n_re);
    const double mean_eve = Q * st.n_br * (internal ? st.n_rk.front() : st.n_re);

    if (plan.oma) {
        double rate_sum = 0.0;
        for (double r : c.target_rates) rate_sum += r;
        if (rate_sum <= 0.0) return;
        const double growth = std::exp2(rate_sum);
        for (std::size_t j = 0; j < n; ++j) ws.gamma_e[j] = rho_e * eve_row[j];
        for (std::size_t u = 0; u < plan.users.size(); ++u) {
            const std::size_t row = static_cast<std::size_t>(plan.users[u] - 1);
            for (std::size_t j = 0; j < n; ++j) ws.gamma_l[j] = rho * ws.gains[row * kBlock + j];
            counts[u] += kt.count_outage(n, ws.gamma_l.data(), ws.gamma_e.data(), growth);
        }
        return;
    }

    for (std::size_t u = 0; u < plan.users.size(); ++u) {
        const int k = plan.users[u];
        const std::size_t row = static_cast<std::size_t>(k - 1);
        const double rate = c.target_rates[row];
        if (rate <= 0.0) continue;
        const double a_k = c.power_alloc[row];
        const double nu_k = c.nu(k);
        const double legit_scale = common ? st.n_br * st.n_rk[row] : 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double h = ws.gains[row * kBlock + j] * legit_scale;
            ws.gamma_l[j] = rho * h * a_k / (rho * h * nu_k + w * rho * ws.ipu[row * kBlock + j] + 1.0);
            const double he = plan.options.eve == EveMode::mean_field ? mean_eve : eve_row[j] * eve_scale;
            ws.gamma_e[j] = he * a_k * rho_e / (rho_e * he * nu_k + w * rho_e * ws.ipe[row * kBlock + j] + 1.0);
        }
        counts[u] += kt.count_outage(n, ws.gamma_l.data(), ws.gamma_e.data(), std::exp2(rate));
    }
}

SimResult run_plan(const SimPlan& plan)
{
    const auto& opt = plan.options;
    if (opt.trials == 0) throw ValidationError("trials", "must be at least 1");
    const SystemConfig& c = *plan.config;
    const auto K = static_cast<std::size_t>(c.user_count);
    const auto q = static_cast<std::size_t>(c.group_size);
    const kernels::KernelTable& kt = kernels::active_table();

    unsigned workers = opt.workers > 0 ? static_cast<unsigned>(opt.workers) : std::thread::hardware_concurrency();
    workers = std::max(1u, workers);
    const std::uint64_t blocks = (opt.trials + kBlock - 1) / kBlock;
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));

    std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(plan.users.size(), 0));
    auto work = [&](unsigned wid) {
        WorkerState ws;
        ws.legit.resize(K + 1, q);
        ws.eve.resize(K, q);
        ws.gains.assign((K + 1) * kBlock, 0.0);
        ws.eve_gains.assign(K * kBlock, 0.0);
        ws.ipu.assign(K * kBlock, 0.0);
        ws.ipe.assign(K * kBlock, 0.0);
        ws.gamma_l.assign(kBlock, 0.0);
        ws.gamma_e.assign(kBlock, 0.0);
        const std::uint64_t b0 = blocks * wid / workers;
        const std::uint64_t b1 = blocks * (wid + 1) / workers;
        for (std::uint64_t b = b0; b < b1; ++b) {
            const std::uint64_t first = b * kBlock;
            const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, opt.trials - first));
            run_block(plan, kt, first, n, ws, partial[wid]);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned wid = 0; wid < workers; ++wid) pool.emplace_back(work, wid);
        for (auto& t : pool) t.join();
    }

    SimResult out;
    out.trials = opt.trials;
    out.seed = opt.seed;
    out.users = plan.users;
    out.outage_count.assign(plan.users.size(), 0);
    for (const auto& p : partial) {
        for (std::size_t i = 0; i < p.size(); ++i) out.outage_count[i] += p[i];
    }
    out.finalize();
    return out;
}

}  // namespace

SimResult empirical_sop(const SystemConfig& config, const SimOptions& options)
{
    SystemConfig c = config;
    c.scenario = options.scenario;
    c.sic_mode = options.sic_mode;
    SimPlan plan{&c, derive_stats(c), options, false, {}};
    for (int k = c.first_legit_user(); k <= c.user_count; ++k) plan.users.push_back(k);
    return run_plan(plan);
}

double empirical_throughput(const SystemConfig& config, const SimOptions& options)
{
    const SimResult r = empirical_sop(config, options);
    std::vector<double> rates;
    for (int k : r.users) rates.push_back(config.target_rates[static_cast<std::size_t>(k - 1)]);
    return throughput_delay_limited(r.empirical_sop, rates);
}

SimResult oma_baseline_sop(const SystemConfig& config, const SimOptions& options)
{
    SystemConfig c = config;
    c.scenario = Scenario::external;
    SimOptions o = options;
    o.eve = EveMode::sampled;
    o.ordering = OrderingMode::per_user_distance;
    SimPlan plan{&c, derive_stats(c), o, true, {}};
    for (int k = 1; k <= c.user_count; ++k) plan.users.push_back(k);
    return run_plan(plan);
}

double oma_throughput(const SystemConfig& config, const SimResult& oma)
{
    double rate_sum = 0.0;
    for (double r : config.target_rates) rate_sum += r;
    const double per_slot = rate_sum / config.user_count;
    std::vector<double> rates(oma.empirical_sop.size(), per_slot);
    return throughput_delay_limited(oma.empirical_sop, rates);
}

std::vector<double> sample_cascades(const CascadeParams& params, std::size_t count, std::uint64_t seed)
{
    params.check();
    std::vector<double> out(count);
    std::vector<std::complex<double>> a(static_cast<std::size_t>(params.q)), b(a.size());
    for (std::size_t t = 0; t < count; ++t) {
        TrialRng rng(seed, t);
        for (std::size_t m = 0; m < a.size(); ++m) {
            a[m] = rng.complex_gaussian(params.var_a);
            b[m] = rng.complex_gaussian(params.var_b);
        }
        out[t] = cascade_of(a, b);
    }
    return out;
}

std::vector<double> sample_ordered_cascades(const CascadeParams& params, int k, int user_count,
                                            std::size_t count, std::uint64_t seed)
{
    params.check();
    if (k < 1 || k > user_count) throw DomainError("sample_ordered_cascades: rank out of range");
    std::vector<double> out(count);
    std::vector<double> draws(static_cast<std::size_t>(user_count));
    std::vector<std::complex<double>> a(static_cast<std::size_t>(params.q)), b(a.size());
    for (std::size_t t = 0; t < count; ++t) {
        TrialRng rng(seed, t);
        for (auto& d : draws) {
            for (std::size_t m = 0; m < a.size(); ++m) {
                a[m] = rng.complex_gaussian(params.var_a);
                b[m] = rng.complex_gaussian(params.var_b);
            }
            d = cascade_of(a, b);
        }
        std::nth_element(draws.begin(), draws.begin() + (k - 1), draws.end());
        out[t] = draws[static_cast<std::size_t>(k - 1)];
    }
    return out;
}

}  // namespace risnoma
