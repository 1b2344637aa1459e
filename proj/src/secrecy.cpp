#include "risnoma/secrecy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "risnoma/channel_dist.hpp"
#include "risnoma/special_math.hpp"

namespace risnoma {

using special::CompensatedSum;

SecrecyQuery SecrecyQuery::from(const SystemConfig& config, int k)
{
    SecrecyQuery q;
    q.user_k = k;
    q.decode_g = k;
    q.scenario = config.scenario;
    q.sic_mode = config.sic_mode;
    return q;
}

void SecrecyQuery::validate(const SystemConfig& config) const
{
    const int K = config.user_count;
    if (user_k < 1 || user_k > K) throw ValidationError("user_k", "must lie in [1, user_count]");
    if (decode_g < 1 || decode_g > user_k) throw ValidationError("decode_g", "must lie in [1, user_k]");
    if (scenario == Scenario::internal && user_k < 2) {
        throw ValidationError("user_k", "internal eavesdropping is defined for ranks k >= 2");
    }
    if (quad_order_d < 1 || quad_order_d > special::kMaxOrder) {
        throw ValidationError("quad_order_d", "must lie in [1, 512]");
    }
    if (quad_order_s < 1 || quad_order_s > special::kMaxOrder) {
        throw ValidationError("quad_order_s", "must lie in [1, 512]");
    }
}

SecrecyEngine::SecrecyEngine(SystemConfig config) : config_(std::move(config))
{
    stats_ = derive_stats(config_);
}

double SecrecyEngine::residual(SicMode mode) const noexcept
{
    return mode == SicMode::perfect ? 0.0 : config_.residual_level;
}

double SecrecyEngine::eve_variance_product(Scenario s) const
{
    return stats_.n_br * (s == Scenario::external ? stats_.n_re : stats_.n_rk.front());
}

double SecrecyEngine::eve_support_end(int k) const
{
    const double nu_k = config_.nu(k);
    if (nu_k <= 0.0) return std::numeric_limits<double>::infinity();
    return config_.power_alloc[static_cast<std::size_t>(k - 1)] / nu_k;
}

namespace {

double ordered_unit_cdf(int q, double z, int k, int user_count)
{
    return order_statistic_cdf(special::cascade_cdf_unit(q, z), k, user_count);
}

}  // namespace

double SecrecyEngine::cdf_sinr_legit(double x, const SecrecyQuery& q) const
{
    q.validate(config_);
    if (std::isnan(x) || x < 0.0) throw DomainError("cdf_sinr_legit: x must be non-negative");
    if (x == 0.0) return 0.0;
    const int K = config_.user_count;
    const int k = q.user_k;
    const double a_g = config_.power_alloc[static_cast<std::size_t>(q.decode_g - 1)];
    const double nu_g = config_.nu(q.decode_g);
    if (std::isinf(x) || (nu_g > 0.0 && x >= a_g / nu_g)) return 1.0;

    const int Q = config_.group_size;
    const double base = x / (a_g - nu_g * x);
    const double zeta2 = stats_.zeta2_per_user[static_cast<std::size_t>(k - 1)];
    const double w = residual(q.sic_mode);
    if (w == 0.0) return ordered_unit_cdf(Q, base / zeta2, k, K);

    const auto rule = special::cached_gauss_laguerre(q.quad_order_d);
    const double slope = w * stats_.rho * stats_.n_ipu;
    CompensatedSum acc;
    for (int d = 0; d < rule->order; ++d) {
        const double g = rule->weights[d];
        if (g == 0.0) continue;
        const double zeta1 = (slope * rule->nodes[d] + 1.0) / zeta2;
        acc.add(g * ordered_unit_cdf(Q, base * zeta1, k, K));
    }
    return std::clamp(acc.value(), 0.0, 1.0);
}

double SecrecyEngine::sinr_eve_cdf(double x, const SecrecyQuery& q) const
{
    q.validate(config_);
    if (std::isnan(x) || x < 0.0) throw DomainError("sinr_eve_cdf: x must be non-negative");
    if (x == 0.0) return 0.0;
    const int k = q.user_k;
    if (x >= eve_support_end(k)) return 1.0;

    const int K = config_.user_count;
    const int Q = config_.group_size;
    const double a_k = config_.power_alloc[static_cast<std::size_t>(k - 1)];
    const double nu_k = config_.nu(k);
    const double w = residual(q.sic_mode);
    double v = eve_variance_product(q.scenario);
    if (q.scenario == Scenario::external && w == 0.0 &&
        config_.eve_interference_variant == EveVariant::as_printed) {
        v = 1.0;
    }
    const double c0 = x / ((a_k - nu_k * x) * stats_.rho_e * v);
    auto parent = [&](double z) {
        return q.scenario == Scenario::external ? special::cascade_cdf_unit(Q, z)
                                                : ordered_unit_cdf(Q, z, 1, K);
    };
    if (w == 0.0) return parent(c0);

    const auto rule = special::cached_gauss_laguerre(q.quad_order_s);
    const double slope = w * stats_.rho_e * stats_.n_ipe;
    CompensatedSum acc;
    for (int s = 0; s < rule->order; ++s) {
        const double g = rule->weights[s];
        if (g == 0.0) continue;
        acc.add(g * parent(c0 * (slope * rule->nodes[s] + 1.0)));
    }
    return std::clamp(acc.value(), 0.0, 1.0);
}

double SecrecyEngine::pdf_sinr_eve(double x, const SecrecyQuery& q) const
{
    q.validate(config_);
    if (std::isnan(x)) throw DomainError("pdf_sinr_eve: x is NaN");
    const int k = q.user_k;
    if (x <= 0.0 || x >= eve_support_end(k)) return 0.0;

    const int K = config_.user_count;
    const int Q = config_.group_size;
    const double a_k = config_.power_alloc[static_cast<std::size_t>(k - 1)];
    const double nu_k = config_.nu(k);
    const double w = residual(q.sic_mode);
    double v = eve_variance_product(q.scenario);
    if (q.scenario == Scenario::external && w == 0.0 &&
        config_.eve_interference_variant == EveVariant::as_printed) {
        v = 1.0;
    }
    const double gap = a_k - nu_k * x;
    const double c = 1.0 / (stats_.rho_e * v);
    const double base = x / gap;
    const double dbase = a_k / (gap * gap);
    auto term = [&](double scale) {
        const double z = c * scale * base;
        double f = special::cascade_pdf_unit(Q, z) * c * scale * dbase;
        if (q.scenario == Scenario::internal) {
            f *= order_statistic_density_factor(special::cascade_cdf_unit(Q, z), 1, K);
        }
        return f;
    };
    if (w == 0.0) return term(1.0);

    const auto rule = special::cached_gauss_laguerre(q.quad_order_s);
    const double slope = w * stats_.rho_e * stats_.n_ipe;
    CompensatedSum acc;
    for (int s = 0; s < rule->order; ++s) {
        const double g = rule->weights[s];
        if (g == 0.0) continue;
        acc.add(g * term(slope * rule->nodes[s] + 1.0));
    }
    return std::max(acc.value(), 0.0);
}

double SecrecyEngine::eve_threshold(const SecrecyQuery& q, double tau) const
{
    q.validate(config_);
    const int k = q.user_k;
    const double a_k = config_.power_alloc[static_cast<std::size_t>(k - 1)];
    const double nu_k = config_.nu(k);
    const double rate = config_.target_rates[static_cast<std::size_t>(k - 1)];
    const double w = residual(q.sic_mode);
    const double rho_e = stats_.rho_e;
    const double mean_power = config_.group_size * eve_variance_product(q.scenario);
    const bool drop_nu = q.scenario == Scenario::external && w > 0.0 &&
                         config_.eve_interference_variant == EveVariant::as_printed;
    const double denom = (drop_nu ? 0.0 : mean_power * rho_e * nu_k) + w * rho_e * stats_.n_ipe * tau + 1.0;
    return std::exp2(rate) * (1.0 + mean_power * a_k * rho_e / denom) - 1.0;
}

namespace {

SecrecyQuery own_signal(const SecrecyQuery& q)
{
    SecrecyQuery legit = q;
    legit.decode_g = q.user_k;
    return legit;
}

}  // namespace

double SecrecyEngine::sop_closed_form(const SecrecyQuery& query) const
{
    const SecrecyQuery q = own_signal(query);
    q.validate(config_);
    const double w = residual(q.sic_mode);
    const double end = eve_support_end(q.user_k);
    if (w == 0.0) return cdf_sinr_legit(eve_threshold(q, 0.0), q);

    const auto rule = special::cached_gauss_laguerre(q.quad_order_s);
    CompensatedSum acc;
    bool all_saturated = true;
    for (int s = 0; s < rule->order; ++s) {
        const double g = rule->weights[s];
        if (g == 0.0) continue;
        const double theta = eve_threshold(q, rule->nodes[s]);
        if (theta < end) all_saturated = false;
        acc.add(g * cdf_sinr_legit(theta, q));
    }
    if (all_saturated) return 1.0;
    return std::clamp(acc.value(), 0.0, 1.0);
}

AsymptoticSop SecrecyEngine::sop_asymptotic(const SecrecyQuery& query) const
{
    const SecrecyQuery q = own_signal(query);
    q.validate(config_);
    const int K = config_.user_count;
    const int k = q.user_k;
    const int Q = config_.group_size;
    const double a_k = config_.power_alloc[static_cast<std::size_t>(k - 1)];
    const double nu_k = config_.nu(k);
    const double end = eve_support_end(k);
    const double w = residual(q.sic_mode);
    const double n_cascade = stats_.n_br * stats_.n_rk[static_cast<std::size_t>(k - 1)];
    AsymptoticSop out;

    if (w > 0.0) {
        const auto rule_s = special::cached_gauss_laguerre(q.quad_order_s);
        const auto rule_d = special::cached_gauss_laguerre(q.quad_order_d);
        CompensatedSum outer;
        for (int s = 0; s < rule_s->order; ++s) {
            const double gs = rule_s->weights[s];
            if (gs == 0.0) continue;
            const double theta = eve_threshold(q, rule_s->nodes[s]);
            if (theta >= end) {
                outer.add(gs);
                continue;
            }
            const double scale = theta * w * stats_.n_ipu / ((a_k - theta * nu_k) * n_cascade);
            CompensatedSum inner;
            for (int d = 0; d < rule_d->order; ++d) {
                const double gd = rule_d->weights[d];
                if (gd == 0.0) continue;
                inner.add(gd * ordered_unit_cdf(Q, scale * rule_d->nodes[d], k, K));
            }
            outer.add(gs * inner.value());
        }
        out.raw = outer.value();
    } else {
        const double psi = eve_threshold(q, 0.0);
        if (psi >= end) {
            out.raw = 1.0;
        } else {
            const double zeta2 = stats_.zeta2_per_user[static_cast<std::size_t>(k - 1)];
            const double s = psi / ((a_k - psi * nu_k) * zeta2);
            const double lead = order_kappa(k, K) / k;
            if (Q == 1) {
                const double inner = s > 0.0 ? 1.0 - (1.0 + s * std::log(s)) : 0.0;
                out.raw = lead * std::pow(inner, k);
            } else {
                out.raw = lead * std::pow(s / (Q - 1), k);
            }
        }
    }
    out.clamped = std::clamp(out.raw, 0.0, 1.0);
    return out;
}

NumericSop SecrecyEngine::sop_exact_numeric(const SecrecyQuery& query, double rel_tol) const
{
    using boost::math::quadrature::gauss_kronrod;
    const SecrecyQuery q = own_signal(query);
    q.validate(config_);
    const int k = q.user_k;
    const double rate = config_.target_rates[static_cast<std::size_t>(k - 1)];
    const double growth = std::exp2(rate);
    const double end = eve_support_end(k);
    const double a_k = config_.power_alloc[static_cast<std::size_t>(k - 1)];

    auto legit_threshold = [&](double x) { return growth * (1.0 + x) - 1.0; };

    // Past x_hi the legitimate CDF is saturated (k < K) or Eve carries no mass.
    double x_hi;
    if (std::isfinite(end)) {
        x_hi = std::min(end, (1.0 + end) / growth - 1.0);
    } else {
        x_hi = std::max(1.0, config_.group_size * eve_variance_product(q.scenario) * a_k * stats_.rho_e);
        int guard = 0;
        while (1.0 - sinr_eve_cdf(x_hi, q) > 1e-14 && guard++ < 200) x_hi *= 2.0;
    }

    NumericSop out;
    if (x_hi <= 0.0) {
        out.value = 1.0;
        return out;
    }

    auto integrand = [&](double x) {
        const double f = pdf_sinr_eve(x, q);
        if (f == 0.0) return 0.0;
        return f * cdf_sinr_legit(legit_threshold(x), q);
    };

    const double eve_scale = config_.group_size * eve_variance_product(q.scenario) * a_k * stats_.rho_e;
    double x_lo = std::min(x_hi * 1e-14, std::max(eve_scale, 1e-300) * 1e-10);
    std::vector<double> edges{0.0};
    for (double e = x_lo; e < x_hi; e *= 10.0) edges.push_back(e);
    edges.push_back(x_hi);

    CompensatedSum acc;
    double err_total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        // Boost compares an unscaled local error against a scaled tolerance, so
        // each segment is mapped onto [0, 1] to keep the two commensurate.
        const double lo = edges[i];
        const double width = edges[i + 1] - edges[i];
        // The segment integral is bounded by the Eve mass it carries.
        const double mass = sinr_eve_cdf(edges[i + 1], q) - sinr_eve_cdf(lo, q);
        if (mass < 1e-15) {
            acc.add(std::max(mass, 0.0) * cdf_sinr_legit(legit_threshold(edges[i + 1]), q));
            err_total += std::abs(mass);
            continue;
        }
        auto mapped = [&](double u) { return width * integrand(lo + width * u); };
        double err = 0.0;
        const double part = gauss_kronrod<double, 31>::integrate(mapped, 0.0, 1.0, 15, rel_tol, &err);
        if (!std::isfinite(part)) {
            throw ComputationError("sop_exact_numeric: non-finite integral on segment " + std::to_string(i));
        }
        acc.add(part);
        err_total += err;
    }
    // Eve mass beyond x_hi: outage is certain when the legitimate CDF saturates.
    const double tail = 1.0 - sinr_eve_cdf(x_hi, q);
    if (std::isfinite(end)) {
        acc.add(tail);
    } else {
        acc.add(tail * cdf_sinr_legit(legit_threshold(x_hi), q));
        err_total += tail;
    }
    out.value = std::clamp(acc.value(), 0.0, 1.0);
    out.error_estimate = err_total;
    if (err_total > 1e-4) {
        throw ComputationError("sop_exact_numeric: achieved error " + std::to_string(err_total) +
                               " exceeds 1e-4");
    }
    return out;
}

DiversityEstimate SecrecyEngine::diversity_order_estimate(const SecrecyQuery& query,
                                                          std::span<const double> rho_grid_db) const
{
    if (rho_grid_db.size() < 2) throw ValidationError("rho_grid_db", "needs at least two points");
    const SecrecyQuery q = own_signal(query);
    q.validate(config_);

    std::vector<double> exact, asym;
    exact.reserve(rho_grid_db.size());
    asym.reserve(rho_grid_db.size());
    bool underflow = false;
    for (double db : rho_grid_db) {
        SystemConfig c = config_;
        c.snr_legit_db = db;
        const SecrecyEngine at(c);
        const double p = at.sop_closed_form(q);
        if (!(p >= 1e-14)) underflow = true;
        exact.push_back(p);
        asym.push_back(at.sop_asymptotic(q).raw);
    }

    DiversityEstimate out;
    const std::vector<double>& ys = underflow ? asym : exact;
    out.used_asymptotic = underflow;
    for (double y : ys) {
        if (!(y > 0.0) || !std::isfinite(y)) {
            out.note = "SOP underflows on the grid; estimate omitted";
            return out;
        }
    }
    const double n = static_cast<double>(ys.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double lx = rho_grid_db[i] / 10.0;
        const double ly = std::log10(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        out.note = "degenerate grid";
        return out;
    }
    out.slope = -(n * sxy - sx * sy) / denom;
    if (underflow) out.note = "closed form below 1e-14; asymptotic curve used";
    return out;
}

double system_sop(std::span<const double> per_user_sop)
{
    double survive = 1.0;
    for (double p : per_user_sop) {
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("system_sop: probabilities must lie in [0,1]");
        survive *= 1.0 - p;
    }
    return 1.0 - survive;
}

double throughput_delay_limited(std::span<const double> per_user_sop, std::span<const double> target_rates)
{
    if (per_user_sop.size() != target_rates.size()) {
        throw DomainError("throughput_delay_limited: SOP and rate lists differ in length");
    }
    CompensatedSum acc;
    for (std::size_t i = 0; i < per_user_sop.size(); ++i) {
        const double p = per_user_sop[i];
        const double r = target_rates[i];
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("throughput_delay_limited: SOP outside [0,1]");
        if (!(r >= 0.0)) throw DomainError("throughput_delay_limited: negative rate");
        acc.add((1.0 - p) * r);
    }
    return acc.value();
}

double secrecy_rate(double gamma_legit, double gamma_eve)
{
    if (!(gamma_legit >= 0.0) || !(gamma_eve >= 0.0)) throw DomainError("secrecy_rate: SINRs must be non-negative");
    return std::max(0.0, std::log2((1.0 + gamma_legit) / (1.0 + gamma_eve)));
}

SecrecyReport analytic_report(const SystemConfig& config, SicMode mode, int quad_order)
{
    const SecrecyEngine engine(config);
    SecrecyReport report;
    std::vector<double> sops, rates;
    for (int k = config.first_legit_user(); k <= config.user_count; ++k) {
        SecrecyQuery q = SecrecyQuery::from(config, k);
        q.sic_mode = mode;
        q.quad_order_d = quad_order;
        q.quad_order_s = quad_order;
        UserSecrecy u;
        u.user_k = k;
        u.analytic = engine.sop_closed_form(q);
        u.asymptotic = engine.sop_asymptotic(q);
        report.per_user.push_back(u);
        sops.push_back(u.analytic);
        rates.push_back(config.target_rates[static_cast<std::size_t>(k - 1)]);
    }
    report.system_sop = system_sop(sops);
    report.throughput_bpcu = throughput_delay_limited(sops, rates);
    return report;
}

}  // namespace risnoma
