#include "risnoma/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace risnoma {

using nlohmann::json;

std::string_view to_string(Scenario s) noexcept
{
    return s == Scenario::external ? "external" : "internal";
}

std::string_view to_string(SicMode s) noexcept
{
    return s == SicMode::perfect ? "perfect" : "imperfect";
}

std::string_view to_string(EveVariant v) noexcept
{
    return v == EveVariant::as_printed ? "as_printed" : "with_nu_term";
}

Scenario parse_scenario(std::string_view text)
{
    if (text == "external") return Scenario::external;
    if (text == "internal") return Scenario::internal;
    throw ValidationError("scenario", "expected external or internal, got '" + std::string(text) + "'");
}

SicMode parse_sic_mode(std::string_view text)
{
    if (text == "perfect" || text == "psic") return SicMode::perfect;
    if (text == "imperfect" || text == "ipsic") return SicMode::imperfect;
    throw ValidationError("sic_mode", "expected perfect or imperfect, got '" + std::string(text) + "'");
}

EveVariant parse_eve_variant(std::string_view text)
{
    if (text == "as_printed" || text == "as-printed") return EveVariant::as_printed;
    if (text == "with_nu_term" || text == "with-nu-term") return EveVariant::with_nu_term;
    throw ValidationError("eve_interference_variant",
                          "expected as_printed or with_nu_term, got '" + std::string(text) + "'");
}

namespace {

void require(bool ok, const char* field, const std::string& message)
{
    if (!ok) throw ValidationError(field, message);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void SystemConfig::validate() const
{
    require(user_count >= 1, "user_count", "must be a positive integer");
    require(group_size >= 1, "group_size", "must be a positive integer");
    require(partition_p >= 1, "partition_p", "must be a positive integer");
    require(ris_elements >= 1, "ris_elements", "must be a positive integer");
    require(ris_elements == partition_p * group_size, "ris_elements",
            "must equal partition_p * group_size (" + std::to_string(partition_p) + " * " +
                std::to_string(group_size) + ")");
    require(group_size <= 512, "group_size", "must not exceed 512");
    require(active_column >= 1 && active_column <= partition_p, "active_column",
            "must lie in [1, partition_p]");

    const auto k = static_cast<std::size_t>(user_count);
    require(power_alloc.size() == k, "power_alloc", "needs exactly user_count entries");
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        require(std::isfinite(power_alloc[i]) && power_alloc[i] > 0.0, "power_alloc",
                "entries must be positive");
        if (i > 0) {
            require(power_alloc[i] <= power_alloc[i - 1], "power_alloc",
                    "must be non-increasing (a_1 >= a_2 >= ... >= a_K)");
        }
        total += power_alloc[i];
    }
    require(std::abs(total - 1.0) <= 1e-12, "power_alloc", "must sum to 1");
    if (an_power_alloc) {
        require(*an_power_alloc >= 0.0 && *an_power_alloc <= 1.0, "an_power_alloc", "must lie in [0, 1]");
    }

    require(std::isfinite(snr_legit_db), "snr_legit_db", "must be finite");
    require(std::isfinite(snr_eve_db), "snr_eve_db", "must be finite");
    require(std::isfinite(residual_user_db), "residual_user_db", "must be finite");
    require(std::isfinite(residual_eve_db), "residual_eve_db", "must be finite");
    require(residual_level >= 0.0 && residual_level <= 1.0, "residual_level", "must lie in [0, 1]");
    require(positive_finite(path_loss_exponent), "path_loss_exponent", "must be positive");
    require(positive_finite(dist_bs_ris), "dist_bs_ris", "must be positive");
    require(positive_finite(dist_ris_eve), "dist_ris_eve", "must be positive");
    require(dist_ris_user.size() == k, "dist_ris_user", "needs exactly user_count entries");
    for (double d : dist_ris_user) require(positive_finite(d), "dist_ris_user", "entries must be positive");
    require(target_rates.size() == k, "target_rates", "needs exactly user_count entries");
    for (double r : target_rates) {
        require(std::isfinite(r) && r >= 0.0, "target_rates", "entries must be non-negative");
    }
    require(scenario != Scenario::internal || user_count >= 2, "scenario",
            "internal eavesdropping needs user_count >= 2");
}

double SystemConfig::nu(int g) const
{
    if (g < 1 || g > user_count) {
        throw DomainError("nu: user index " + std::to_string(g) + " outside [1, " +
                          std::to_string(user_count) + "]");
    }
    double s = 0.0;
    for (int i = user_count; i > g; --i) s += power_alloc[static_cast<std::size_t>(i - 1)];
    return s;
}

double nu(const SystemConfig& config, int g) { return config.nu(g); }

ChannelStats derive_stats(const SystemConfig& config)
{
    config.validate();
    ChannelStats st;
    const double alpha = config.path_loss_exponent;
    st.n_br = std::pow(config.dist_bs_ris, -alpha);
    st.n_re = std::pow(config.dist_ris_eve, -alpha);
    st.n_ipu = db_to_linear(config.residual_user_db);
    st.n_ipe = db_to_linear(config.residual_eve_db);
    st.rho = db_to_linear(config.snr_legit_db);
    st.rho_e = db_to_linear(config.snr_eve_db);
    st.n_rk.reserve(config.dist_ris_user.size());
    st.zeta2_per_user.reserve(config.dist_ris_user.size());
    for (double d : config.dist_ris_user) {
        const double n = std::pow(d, -alpha);
        st.n_rk.push_back(n);
        st.zeta2_per_user.push_back(st.rho * st.n_br * n);
    }
    return st;
}

namespace {

template <typename T>
T read_field(const json& j, const char* key)
{
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(key, std::string("wrong type: ") + e.what());
    }
}

}  // namespace

SystemConfig config_from_json(std::string_view json_text, const SystemConfig& base)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError("<document>", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("<document>", "top level must be an object");

    SystemConfig c = base;
    for (const auto& [key, value] : doc.items()) {
        const char* k = key.c_str();
        if (key == "user_count") c.user_count = read_field<int>(value, k);
        else if (key == "ris_elements") c.ris_elements = read_field<int>(value, k);
        else if (key == "partition_p") c.partition_p = read_field<int>(value, k);
        else if (key == "group_size") c.group_size = read_field<int>(value, k);
        else if (key == "active_column") c.active_column = read_field<int>(value, k);
        else if (key == "power_alloc") c.power_alloc = read_field<std::vector<double>>(value, k);
        else if (key == "an_power_alloc") {
            if (value.is_null()) c.an_power_alloc.reset();
            else c.an_power_alloc = read_field<double>(value, k);
        }
        else if (key == "snr_legit_db") c.snr_legit_db = read_field<double>(value, k);
        else if (key == "snr_eve_db") c.snr_eve_db = read_field<double>(value, k);
        else if (key == "residual_user_db") c.residual_user_db = read_field<double>(value, k);
        else if (key == "residual_eve_db") c.residual_eve_db = read_field<double>(value, k);
        else if (key == "sic_mode") c.sic_mode = parse_sic_mode(read_field<std::string>(value, k));
        else if (key == "residual_level") c.residual_level = read_field<double>(value, k);
        else if (key == "path_loss_exponent") c.path_loss_exponent = read_field<double>(value, k);
        else if (key == "dist_bs_ris") c.dist_bs_ris = read_field<double>(value, k);
        else if (key == "dist_ris_user") c.dist_ris_user = read_field<std::vector<double>>(value, k);
        else if (key == "dist_ris_eve") c.dist_ris_eve = read_field<double>(value, k);
        else if (key == "target_rates") c.target_rates = read_field<std::vector<double>>(value, k);
        else if (key == "scenario") c.scenario = parse_scenario(read_field<std::string>(value, k));
        else if (key == "eve_interference_variant")
            c.eve_interference_variant = parse_eve_variant(read_field<std::string>(value, k));
        else throw ValidationError(key, "unknown configuration key");
    }
    c.validate();
    return c;
}

SystemConfig load_config(const std::string& path, const SystemConfig& base)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str(), base);
}

std::string config_to_json(const SystemConfig& c, int indent)
{
    json j;
    j["user_count"] = c.user_count;
    j["ris_elements"] = c.ris_elements;
    j["partition_p"] = c.partition_p;
    j["group_size"] = c.group_size;
    j["active_column"] = c.active_column;
    j["power_alloc"] = c.power_alloc;
    j["an_power_alloc"] = c.an_power_alloc ? json(*c.an_power_alloc) : json(nullptr);
    j["snr_legit_db"] = c.snr_legit_db;
    j["snr_eve_db"] = c.snr_eve_db;
    j["residual_user_db"] = c.residual_user_db;
    j["residual_eve_db"] = c.residual_eve_db;
    j["sic_mode"] = to_string(c.sic_mode);
    j["residual_level"] = c.residual_level;
    j["path_loss_exponent"] = c.path_loss_exponent;
    j["dist_bs_ris"] = c.dist_bs_ris;
    j["dist_ris_user"] = c.dist_ris_user;
    j["dist_ris_eve"] = c.dist_ris_eve;
    j["target_rates"] = c.target_rates;
    j["scenario"] = to_string(c.scenario);
    j["eve_interference_variant"] = to_string(c.eve_interference_variant);
    return j.dump(indent);
}

}  // namespace risnoma
