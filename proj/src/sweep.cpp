#include "risnoma/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <thread>

#include "risnoma/secrecy.hpp"

namespace risnoma {

std::string_view to_string(SweepVariable v) noexcept
{
    switch (v) {
    case SweepVariable::snr_db: return "snr_db";
    case SweepVariable::snr_eve_db: return "snr_eve_db";
    case SweepVariable::power_offset_aT: return "power_offset_aT";
    case SweepVariable::ris_elements: return "ris_elements";
    case SweepVariable::target_rate: return "target_rate";
    }
    return "?";
}

std::string_view to_string(SweepOutput o) noexcept
{
    switch (o) {
    case SweepOutput::analytic: return "analytic";
    case SweepOutput::asymptotic: return "asymptotic";
    case SweepOutput::empirical: return "empirical";
    case SweepOutput::system_sop: return "system_sop";
    case SweepOutput::throughput: return "throughput";
    }
    return "?";
}

SweepVariable parse_sweep_variable(std::string_view text)
{
    for (auto v : {SweepVariable::snr_db, SweepVariable::snr_eve_db, SweepVariable::power_offset_aT,
                   SweepVariable::ris_elements, SweepVariable::target_rate}) {
        if (text == to_string(v)) return v;
    }
    throw ValidationError("sweep_variable", "unknown sweep variable '" + std::string(text) + "'");
}

SweepOutput parse_sweep_output(std::string_view text)
{
    for (auto o : {SweepOutput::analytic, SweepOutput::asymptotic, SweepOutput::empirical, SweepOutput::system_sop,
                   SweepOutput::throughput}) {
        if (text == to_string(o)) return o;
    }
    throw ValidationError("outputs", "unknown output '" + std::string(text) + "'");
}

void SweepSpec::validate() const
{
    if (!std::isfinite(start) || !std::isfinite(end)) throw ValidationError("range", "bounds must be finite");
    if (start > end) throw ValidationError("range", "start must not exceed end");
    if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("range", "step must be positive");
    if (values().size() > 100000) throw ValidationError("range", "more than 100000 sweep points");
    if (sic_modes.empty()) throw ValidationError("sic_mode", "at least one SIC mode required");
    if (outputs.empty()) throw ValidationError("outputs", "at least one output required");
    if (outputs.count(SweepOutput::empirical) && trials < 1) {
        throw ValidationError("trials", "must be at least 1 when empirical output is requested");
    }
    if (quad_order < 1 || quad_order > 512) throw ValidationError("quad_order", "must lie in [1, 512]");
    SystemConfig c = config;
    c.scenario = scenario;
    c.validate();
    for (double v : values()) apply_sweep_value(c, variable, v);
}

std::vector<double> SweepSpec::values() const
{
    std::vector<double> out;
    if (!(step > 0.0) || start > end) return out;
    const double slack = 1e-9 * step;
    for (std::size_t i = 0;; ++i) {
        const double v = start + static_cast<double>(i) * step;
        if (v > end + slack || out.size() > 100000) break;
        out.push_back(v);
    }
    return out;
}

SystemConfig apply_sweep_value(const SystemConfig& base, SweepVariable variable, double value)
{
    SystemConfig c = base;
    switch (variable) {
    case SweepVariable::snr_db: c.snr_legit_db = value; break;
    case SweepVariable::snr_eve_db: c.snr_eve_db = value; break;
    case SweepVariable::power_offset_aT:
        if (c.user_count != 2) throw ValidationError("sweep_variable", "power_offset_aT needs user_count = 2");
        c.power_alloc = {value, 1.0 - value};
        break;
    case SweepVariable::ris_elements: {
        const double r = std::round(value);
        if (std::abs(r - value) > 1e-9 || r < 1) {
            throw ValidationError("sweep_variable", "ris_elements values must be positive integers");
        }
        const int m = static_cast<int>(r);
        if (m % c.partition_p != 0) {
            throw ValidationError("sweep_variable", "ris_elements value " + std::to_string(m) +
                                                        " not divisible by partition_p");
        }
        c.ris_elements = m;
        c.group_size = m / c.partition_p;
        break;
    }
    case SweepVariable::target_rate:
        for (auto& r : c.target_rates) r = value;
        break;
    }
    c.validate();
    return c;
}

namespace {

struct PointResult {
    std::vector<int> users;
    std::vector<std::optional<double>> analytic, asymptotic, empirical, stderr_;
    std::optional<double> system, throughput;
};

PointResult evaluate_point(const SweepSpec& spec, SicMode mode, double value, int mc_workers)
{
    SystemConfig c = spec.config;
    c.scenario = spec.scenario;
    c.sic_mode = mode;
    c = apply_sweep_value(c, spec.variable, value);

    PointResult r;
    for (int k = c.first_legit_user(); k <= c.user_count; ++k) r.users.push_back(k);
    const std::size_t n = r.users.size();
    r.analytic.resize(n);
    r.asymptotic.resize(n);
    r.empirical.resize(n);
    r.stderr_.resize(n);

    const bool want_analytic = spec.outputs.count(SweepOutput::analytic) > 0;
    const bool want_asym = spec.outputs.count(SweepOutput::asymptotic) > 0;
    const bool want_emp = spec.outputs.count(SweepOutput::empirical) > 0;
    const bool want_sys = spec.outputs.count(SweepOutput::system_sop) > 0;
    const bool want_tp = spec.outputs.count(SweepOutput::throughput) > 0;
    const bool need_analytic = want_analytic || ((want_sys || want_tp) && !want_emp);

    if (need_analytic || want_asym) {
        const SecrecyEngine engine(c);
        for (std::size_t i = 0; i < n; ++i) {
            SecrecyQuery q = SecrecyQuery::from(c, r.users[i]);
            q.quad_order_d = spec.quad_order;
            q.quad_order_s = spec.quad_order;
            if (need_analytic) r.analytic[i] = engine.sop_closed_form(q);
            if (want_asym) r.asymptotic[i] = engine.sop_asymptotic(q).clamped;
        }
    }
    if (want_emp) {
        SimOptions o;
        o.scenario = c.scenario;
        o.sic_mode = mode;
        o.ordering = spec.ordering;
        o.eve = spec.eve;
        o.trials = spec.trials;
        o.seed = spec.seed;
        o.workers = mc_workers;
        const SimResult sim = empirical_sop(c, o);
        for (std::size_t i = 0; i < n; ++i) {
            r.empirical[i] = sim.empirical_sop[i];
            r.stderr_[i] = sim.standard_error[i];
        }
    }
    if (want_sys || want_tp) {
        std::vector<double> p, rates;
        for (std::size_t i = 0; i < n; ++i) {
            p.push_back(need_analytic ? *r.analytic[i] : *r.empirical[i]);
            rates.push_back(c.target_rates[static_cast<std::size_t>(r.users[i] - 1)]);
        }
        if (want_sys) r.system = system_sop(p);
        if (want_tp) r.throughput = throughput_delay_limited(p, rates);
    }
    if (!want_analytic) std::fill(r.analytic.begin(), r.analytic.end(), std::nullopt);
    return r;
}

std::string fmt(const std::optional<double>& v)
{
    if (!v) return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", *v);
    return buf;
}

}  // namespace

void run_sweep(const SweepSpec& spec, std::ostream& out)
{
    spec.validate();
    const std::vector<double> values = spec.values();

    struct Task {
        SicMode mode;
        double value;
    };
    std::vector<Task> tasks;
    for (SicMode m : spec.sic_modes) {
        for (double v : values) tasks.push_back({m, v});
    }

    unsigned workers = spec.workers > 0 ? static_cast<unsigned>(spec.workers) : std::thread::hardware_concurrency();
    workers = std::max(1u, workers);
    std::vector<PointResult> results(tasks.size());
    if (workers == 1 || tasks.size() < workers) {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            results[i] = evaluate_point(spec, tasks[i].mode, tasks[i].value, static_cast<int>(workers));
        }
    } else {
        // Strided assignment; every point is independent and self-seeded.
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < tasks.size(); i += workers) {
                        results[i] = evaluate_point(spec, tasks[i].mode, tasks[i].value, 1);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    out << kSweepHeader << '\n';
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const PointResult& r = results[i];
        const std::string sic = tasks[i].mode == SicMode::perfect ? "psic" : "ipsic";
        for (std::size_t u = 0; u < r.users.size(); ++u) {
            out << sic << ',' << fmt(tasks[i].value) << ',' << r.users[u] << ',' << fmt(r.analytic[u]) << ','
                << fmt(r.asymptotic[u]) << ',' << fmt(r.empirical[u]) << ',' << fmt(r.stderr_[u]) << ','
                << fmt(r.system) << ',' << fmt(r.throughput) << '\n';
        }
    }
}

}  // namespace risnoma
