#include "risnoma/presets.hpp"

#include <sstream>

namespace risnoma {

namespace {

Preset make(std::string name, std::string figure, std::string summary, std::vector<std::string> overrides,
            SystemConfig config, SweepVariable variable, double start, double end, double step,
            std::set<SweepOutput> outputs, std::vector<SicMode> modes = {SicMode::perfect, SicMode::imperfect})
{
    Preset p;
    p.name = std::move(name);
    p.figure = std::move(figure);
    p.summary = std::move(summary);
    p.overrides = std::move(overrides);
    p.sweep.config = config;
    p.sweep.scenario = config.scenario;
    p.sweep.sic_modes = std::move(modes);
    p.sweep.variable = variable;
    p.sweep.start = start;
    p.sweep.end = end;
    p.sweep.step = step;
    p.sweep.outputs = std::move(outputs);
    return p;
}

SystemConfig geometry(int m, int p, int q)
{
    SystemConfig c;
    c.ris_elements = m;
    c.partition_p = p;
    c.group_size = q;
    return c;
}

std::vector<Preset> build()
{
    const std::set<SweepOutput> sop_outputs{SweepOutput::analytic, SweepOutput::asymptotic, SweepOutput::system_sop};
    const std::set<SweepOutput> tp_outputs{SweepOutput::analytic, SweepOutput::throughput};
    std::vector<Preset> all;

    all.push_back(make("table1", "reference parameter table", "Reference parameters, SOP versus transmit SNR.", {},
                       SystemConfig{}, SweepVariable::snr_db, 0, 50, 5, sop_outputs));

    {
        SystemConfig c = geometry(16, 2, 8);
        c.snr_eve_db = 0.0;
        all.push_back(make("fig2", "Fig. 2", "SOP versus transmit SNR, external Eve.",
                           {"snr_eve_db = 0 (caption value; the table states 10)", "ris_elements = 16",
                            "partition_p = 2", "group_size = 8", "residual_user_db = residual_eve_db = -20"},
                           c, SweepVariable::snr_db, 0, 50, 5, sop_outputs));
    }
    {
        SystemConfig c = geometry(12, 2, 6);
        c.residual_user_db = c.residual_eve_db = -10.0;
        all.push_back(make("fig3", "Fig. 3", "SOP versus transmit SNR for several target rates, external Eve.",
                           {"ris_elements = 12", "partition_p = 2", "group_size = 6",
                            "residual_user_db = residual_eve_db = -10", "vary target_rates via --config"},
                           c, SweepVariable::snr_db, 0, 50, 5, sop_outputs));
    }
    {
        SystemConfig c = geometry(8, 1, 8);
        c.snr_legit_db = 20.0;
        all.push_back(make("fig4", "Fig. 4", "SOP versus number of reflecting elements (M = Q, P = 1), external Eve.",
                           {"partition_p = 1", "ris_elements = group_size (swept)", "snr_legit_db = 20"}, c,
                           SweepVariable::ris_elements, 4, 20, 4, sop_outputs));
    }
    {
        SystemConfig c = geometry(12, 2, 6);
        all.push_back(make("fig5", "Fig. 5", "SOP versus transmit SNR, reference distances, external Eve.",
                           {"ris_elements = 12", "partition_p = 2", "group_size = 6"}, c, SweepVariable::snr_db, 0,
                           50, 5, sop_outputs));
        c.dist_bs_ris = 6.0;
        all.push_back(make("fig5b", "Fig. 5", "SOP versus transmit SNR with the RIS moved away from the BS.",
                           {"ris_elements = 12", "partition_p = 2", "group_size = 6", "dist_bs_ris = 6"}, c,
                           SweepVariable::snr_db, 0, 50, 5, sop_outputs));
    }
    for (Scenario s : {Scenario::external, Scenario::internal}) {
        SystemConfig c = geometry(16, 2, 8);
        c.user_count = 2;
        c.power_alloc = {0.6, 0.4};
        c.dist_ris_user = {6.0, 4.0};
        c.target_rates = {0.04, 0.04};
        c.snr_legit_db = 10.0;
        c.scenario = s;
        const bool ext = s == Scenario::external;
        all.push_back(make(ext ? "fig6" : "fig6b", ext ? "Fig. 6 (a)" : "Fig. 6 (b)",
                           std::string("System SOP versus power offset a_T (a_1 = a_T, a_2 = 1 - a_T), ") +
                               (ext ? "external" : "internal") + " Eve.",
                           {"user_count = 2", "dist_ris_user = {6, 4}", "target_rates = {0.04, 0.04}",
                            "snr_legit_db = 10", "a_T swept over [0.5, 0.95] (a_1 >= a_2 must hold)",
                            std::string("scenario = ") + (ext ? "external" : "internal")},
                           c, SweepVariable::power_offset_aT, 0.5, 0.95, 0.05,
                           {SweepOutput::analytic, SweepOutput::system_sop}));
    }
    {
        SystemConfig c = geometry(16, 1, 16);
        c.target_rates = {0.08, 0.17, 0.25};
        all.push_back(make("fig7", "Fig. 7", "Secrecy system throughput versus transmit SNR, external Eve.",
                           {"ris_elements = group_size = 16", "partition_p = 1", "target_rates = {0.08, 0.17, 0.25}"},
                           c, SweepVariable::snr_db, 0, 60, 5, tp_outputs));
    }
    {
        SystemConfig c = geometry(16, 2, 8);
        c.scenario = Scenario::internal;
        all.push_back(make("fig8", "Fig. 8", "SOP versus transmit SNR, internal Eve, P = 2 and Q = 8.",
                           {"scenario = internal"}, c, SweepVariable::snr_db, 0, 50, 5, sop_outputs));
        c = geometry(16, 4, 4);
        c.scenario = Scenario::internal;
        all.push_back(make("fig8b", "Fig. 8", "SOP versus transmit SNR, internal Eve, P = Q = 4.",
                           {"scenario = internal", "partition_p = 4", "group_size = 4"}, c, SweepVariable::snr_db, 0,
                           50, 5, sop_outputs));
    }
    {
        SystemConfig c = geometry(12, 2, 6);
        c.scenario = Scenario::internal;
        c.snr_eve_db = 5.0;
        all.push_back(make("fig9", "Fig. 9", "SOP versus transmit SNR, internal Eve; vary the residual level via --config.",
                           {"scenario = internal", "ris_elements = 12", "partition_p = 2", "group_size = 6",
                            "snr_eve_db = 5"},
                           c, SweepVariable::snr_db, 0, 50, 5, sop_outputs));
    }
    {
        SystemConfig c = geometry(16, 2, 8);
        c.scenario = Scenario::internal;
        all.push_back(make("fig10", "Fig. 10", "Secrecy system throughput versus transmit SNR, internal Eve.",
                           {"scenario = internal"}, c, SweepVariable::snr_db, 0, 60, 5, tp_outputs));
    }
    return all;
}

}  // namespace

const std::vector<Preset>& presets()
{
    static const std::vector<Preset> all = build();
    return all;
}

const Preset& find_preset(const std::string& name)
{
    for (const auto& p : presets()) {
        if (p.name == name) return p;
    }
    throw ValidationError("preset", "unknown preset '" + name + "'");
}

std::string describe(const Preset& p)
{
    std::ostringstream os;
    os << p.name << " (" << p.figure << ")\n";
    os << "  " << p.summary << "\n";
    os << "  scenario: " << to_string(p.sweep.scenario) << "\n";
    os << "  sweep: " << to_string(p.sweep.variable) << " from " << p.sweep.start << " to " << p.sweep.end
       << " step " << p.sweep.step << "\n";
    os << "  overrides:";
    if (p.overrides.empty()) os << " none";
    os << "\n";
    for (const auto& o : p.overrides) os << "    - " << o << "\n";
    return os.str();
}

}  // namespace risnoma
