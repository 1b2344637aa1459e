#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "risnoma/kernels.hpp"
#include "risnoma/monte_carlo.hpp"
#include "risnoma/presets.hpp"
#include "risnoma/secrecy.hpp"

using namespace risnoma;

namespace {

SystemConfig fig2() { return find_preset("fig2").sweep.config; }

SimOptions opts(std::uint64_t trials, std::uint64_t seed, int workers = 1)
{
    SimOptions o;
    o.trials = trials;
    o.seed = seed;
    o.workers = workers;
    return o;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("trial streams are reproducible and independent of order")
{
    TrialRng a(42, 7);
    TrialRng b(42, 7);
    TrialRng c(42, 8);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        differs = differs || x != c.next();
    }
    CHECK(differs);
    TrialRng u(1, 0);
    for (int i = 0; i < 10000; ++i) {
        const double v = u.uniform();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("complex Gaussian draws have the requested power")
{
    TrialRng r(3, 0);
    const int n = 400000;
    double p = 0.0, re = 0.0, im = 0.0, cross = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto h = r.complex_gaussian(2.5);
        p += std::norm(h);
        re += h.real() * h.real();
        im += h.imag() * h.imag();
        cross += h.real() * h.imag();
    }
    CHECK(std::abs(p / n - 2.5) <= 0.02 * 2.5);
    CHECK(std::abs(re / n - 1.25) <= 0.02 * 1.25);
    CHECK(std::abs(im / n - 1.25) <= 0.02 * 1.25);
    CHECK(std::abs(cross / n) <= 0.01);
}

TEST_CASE("sample_realization is reproducible and has the right scales")
{
    const SystemConfig c;
    const ChannelStats st = derive_stats(c);
    const ChannelRealization a = sample_realization(c, st, 12, 99);
    const ChannelRealization b = sample_realization(c, st, 12, 99);
    CHECK(bit_equal(a.cascades, b.cascades));
    CHECK(a.cascade_eve == b.cascade_eve);
    CHECK(a.h_br.size() == static_cast<std::size_t>(c.group_size));
    CHECK(a.h_rk.size() == 3);
    for (std::size_t i = 1; i < a.cascades.size(); ++i) CHECK(a.cascades[i - 1] <= a.cascades[i]);

    const int n = 100000;
    double br = 0.0, he = 0.0;
    for (int t = 0; t < n; ++t) {
        const ChannelRealization r = sample_realization(c, st, static_cast<std::uint64_t>(t), 5);
        br += std::norm(r.h_br[0]);
        he += r.cascade_eve;
    }
    CHECK(std::abs(br / n - st.n_br) <= 0.01 * st.n_br);
    const double mean_eve = c.group_size * st.n_br * st.n_re;
    CHECK(std::abs(he / n - mean_eve) <= 0.01 * mean_eve);
}

TEST_CASE("results are identical across worker counts")
{
    for (OrderingMode ord : {OrderingMode::common_variance, OrderingMode::per_user_distance}) {
        for (Scenario s : {Scenario::external, Scenario::internal}) {
            SimOptions o1 = opts(50000, 17, 1);
            o1.ordering = ord;
            o1.scenario = s;
            o1.sic_mode = SicMode::imperfect;
            SimOptions o4 = o1;
            o4.workers = 4;
            const SimResult a = empirical_sop(fig2(), o1);
            const SimResult b = empirical_sop(fig2(), o4);
            CHECK(a.outage_count == b.outage_count);
        }
    }
}

TEST_CASE("SIMD kernels are bit-identical to the scalar reference")
{
    const kernels::KernelTable* simd = kernels::avx2_table();
    if (simd == nullptr) {
        MESSAGE("no AVX2 table in this build");
        return;
    }
    const kernels::KernelTable& ref = kernels::scalar_table();
    std::mt19937_64 gen(1);
    std::normal_distribution<double> g;
    for (int q : {1, 3, 8, 16}) {
        for (std::size_t n : {std::size_t{1}, std::size_t{7}, std::size_t{256}}) {
            const std::size_t len = static_cast<std::size_t>(q) * n;
            std::vector<double> ar(len), ai(len), br(len), bi(len);
            for (std::size_t i = 0; i < len; ++i) {
                ar[i] = g(gen);
                ai[i] = g(gen);
                br[i] = g(gen);
                bi[i] = g(gen);
            }
            std::vector<double> x(n), y(n);
            ref.cascade_gain(q, n, ar.data(), ai.data(), br.data(), bi.data(), x.data());
            simd->cascade_gain(q, n, ar.data(), ai.data(), br.data(), bi.data(), y.data());
            CHECK(bit_equal(x, y));

            std::vector<double> s1(len);
            for (auto& v : s1) v = std::abs(g(gen));
            std::vector<double> s2 = s1;
            ref.sort_lanes(q, n, s1.data());
            simd->sort_lanes(q, n, s2.data());
            CHECK(bit_equal(s1, s2));
            for (std::size_t j = 0; j < n; ++j) {
                for (int r = 1; r < q; ++r) CHECK(s1[(r - 1) * n + j] <= s1[r * n + j]);
            }

            std::vector<double> legit(n), eve(n);
            for (std::size_t j = 0; j < n; ++j) {
                legit[j] = std::abs(g(gen));
                eve[j] = std::abs(g(gen));
            }
            CHECK(ref.count_outage(n, legit.data(), eve.data(), 1.3) == simd->count_outage(n, legit.data(), eve.data(), 1.3));
        }
    }
}

TEST_CASE("outage count kernel follows the strict rate inequality")
{
    const kernels::KernelTable& k = kernels::scalar_table();
    const std::vector<double> legit{1.0, 2.0, 0.5};
    const std::vector<double> eve{1.0, 1.0, 1.0};
    // growth 1: outage iff legit < eve.
    CHECK(k.count_outage(3, legit.data(), eve.data(), 1.0) == 1);
    CHECK(k.count_outage(3, legit.data(), eve.data(), 1.25) == 2);
}

TEST_CASE("extreme rates")
{
    SystemConfig c = fig2();
    c.target_rates = {10.0, 10.0, 10.0};
    const SimResult hi = empirical_sop(c, opts(20000, 3));
    for (double p : hi.empirical_sop) CHECK(p == 1.0);

    c.target_rates = {0.0, 0.0, 0.0};
    c.snr_eve_db = -300.0;
    const SimResult lo = empirical_sop(c, opts(20000, 3));
    for (double p : lo.empirical_sop) CHECK(p == 0.0);
}

TEST_CASE("ordering modes agree with one user")
{
    SystemConfig one = fig2();
    one.user_count = 1;
    one.power_alloc = {1.0};
    one.dist_ris_user = {4.0};
    one.target_rates = {0.5};
    SimOptions a = opts(200000, 9);
    SimOptions b = a;
    b.ordering = OrderingMode::per_user_distance;
    const SimResult ra = empirical_sop(one, a);
    const SimResult rb = empirical_sop(one, b);
    CHECK(std::abs(ra.empirical_sop[0] - rb.empirical_sop[0]) <= 4.0 * std::hypot(ra.standard_error[0], rb.standard_error[0]));

}

TEST_CASE("per-user cascades follow the parent distribution")
{
    const SystemConfig c;
    const ChannelStats st = derive_stats(c);
    const std::size_t n = 100000;
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<double> x(n);
        for (std::size_t t = 0; t < n; ++t) x[t] = sample_realization(c, st, t, 21).cascades_by_user[i];
        std::sort(x.begin(), x.end());
        const CascadeParams p{c.group_size, st.n_br, st.n_rk[i]};
        double d = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double f = cascade_cdf(x[t], p);
            d = std::max({d, std::abs(f - static_cast<double>(t) / n), std::abs(static_cast<double>(t + 1) / n - f)});
        }
        CAPTURE(i);
        CHECK(d < 0.01);
    }
}

TEST_CASE("Wald interval coverage")
{
    // The sampled-Eve pSIC outage at 10 dB, reference from one long run.
    SystemConfig c = fig2();
    c.snr_legit_db = 10.0;
    const double truth = empirical_sop(c, opts(2000000, 1000)).empirical_sop[0];
    int covered = 0;
    for (std::uint64_t s = 1; s <= 100; ++s) {
        const SimResult r = empirical_sop(c, opts(10000, s));
        if (std::abs(r.empirical_sop[0] - truth) <= 1.96 * r.standard_error[0]) ++covered;
    }
    CHECK(covered >= 88);
}

TEST_CASE("reported standard error matches the seed-to-seed spread")
{
    SystemConfig c = fig2();
    c.snr_legit_db = 10.0;
    const int runs = 200;
    std::vector<double> p;
    double se = 0.0;
    for (int s = 0; s < runs; ++s) {
        const SimResult r = empirical_sop(c, opts(5000, 500 + s));
        p.push_back(r.empirical_sop[1]);
        se += r.standard_error[1];
    }
    double mean = 0.0;
    for (double v : p) mean += v;
    mean /= runs;
    double var = 0.0;
    for (double v : p) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / (runs - 1));
    se /= runs;
    // The spread of a 200-sample standard deviation is about 5%.
    CHECK(std::abs(sd / se - 1.0) <= 0.2);
}

TEST_CASE("sample_cascades moments")
{
    const CascadeParams p{8, 1.0 / 9.0, 1.0 / 16.0};
    const auto x = sample_cascades(p, 400000, 4);
    double m = 0.0;
    for (double v : x) m += v;
    m /= x.size();
    double var = 0.0;
    for (double v : x) var += (v - m) * (v - m);
    var /= x.size() - 1;
    // |sum of Q products|^2 with unit-variance factors: variance Q (Q + 2) scale^2.
    const double mean = mean_cascade_power(p);
    const double s = p.scale();
    CHECK(std::abs(m - mean) <= 0.01 * mean);
    CHECK(std::abs(var - p.q * (p.q + 2.0) * s * s) <= 0.02 * p.q * (p.q + 2.0) * s * s);
    CHECK(sample_cascades(p, 10, 4) == std::vector<double>(x.begin(), x.begin() + 10));
}

TEST_CASE("OMA baseline")
{
    SystemConfig c = fig2();
    double prev = 2.0;
    for (double db : {0.0, 10.0, 20.0, 30.0}) {
        c.snr_legit_db = db;
        const SimResult r = oma_baseline_sop(c, opts(50000, 8));
        CHECK(r.users == std::vector<int>{1, 2, 3});
        CHECK(r.empirical_sop[2] <= prev);
        prev = r.empirical_sop[2];
    }
    // Same channel physics as the baseline: per-user distances, sampled Eve.
    c.snr_legit_db = 30.0;
    SimOptions o = opts(200000, 8);
    o.ordering = OrderingMode::per_user_distance;
    const double noma = system_sop(empirical_sop(c, o).empirical_sop);
    const double oma = system_sop(oma_baseline_sop(c, opts(200000, 8)).empirical_sop);
    CHECK(noma < oma);

    c.target_rates = {0.0, 0.0, 0.0};
    c.snr_eve_db = -300.0;
    for (double p : oma_baseline_sop(c, opts(20000, 8)).empirical_sop) CHECK(p == 0.0);
}

TEST_CASE("empirical throughput tracks the analytic value")
{
    SystemConfig c = find_preset("fig7").sweep.config;
    for (double db : {20.0, 60.0}) {
        c.snr_legit_db = db;
        SimOptions o = opts(400000, 2);
        o.eve = EveMode::mean_field;
        const double emp = empirical_throughput(c, o);
        const double ana = analytic_report(c, SicMode::perfect).throughput_bpcu;
        CAPTURE(db);
        CHECK(std::abs(emp - ana) <= 0.01);
    }
    c.snr_legit_db = 60.0;
    double rate_sum = 0.0;
    for (double r : c.target_rates) rate_sum += r;
    CHECK(std::abs(analytic_report(c, SicMode::perfect).throughput_bpcu - rate_sum) <= 1e-3);
}

TEST_CASE("option validation")
{
    CHECK_THROWS_AS(empirical_sop(fig2(), opts(0, 1)), ValidationError);
    CHECK(parse_eve_mode("mean-field") == EveMode::mean_field);
    CHECK(parse_ordering_mode("per-user-distance") == OrderingMode::per_user_distance);
    CHECK_THROWS_AS(parse_eve_mode("oracle"), ValidationError);
    CHECK_THROWS_AS(sample_ordered_cascades(CascadeParams{8, 1.0, 1.0}, 4, 3, 10, 1), DomainError);
}
