#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "risnoma/presets.hpp"
#include "risnoma/secrecy.hpp"
#include "risnoma/sweep.hpp"

using namespace risnoma;

namespace {

std::string run(const SweepSpec& s)
{
    std::ostringstream os;
    run_sweep(s, os);
    return os.str();
}

std::vector<std::vector<std::string>> rows(const std::string& csv)
{
    std::vector<std::vector<std::string>> out;
    std::istringstream is(csv);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        out.push_back(cells);
    }
    return out;
}

std::string field_of(const SweepSpec& s)
{
    try {
        s.validate();
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST_CASE("spec validation")
{
    SweepSpec s = find_preset("fig2").sweep;
    CHECK(field_of(s).empty());
    s.start = 10;
    s.end = 0;
    CHECK(field_of(s) == "range");
    s = find_preset("fig2").sweep;
    s.step = 0;
    CHECK(field_of(s) == "range");
    s = find_preset("fig2").sweep;
    s.quad_order = 513;
    CHECK(field_of(s) == "quad_order");
    s = find_preset("fig2").sweep;
    s.outputs.clear();
    CHECK(field_of(s) == "outputs");
    s = find_preset("fig2").sweep;
    s.variable = SweepVariable::power_offset_aT;
    s.start = 0.5;
    s.end = 0.9;
    s.step = 0.1;
    CHECK(field_of(s) == "sweep_variable");
    s = find_preset("fig4").sweep;
    s.config.partition_p = 3;
    s.config.ris_elements = 24;
    CHECK(field_of(s) == "sweep_variable");
    std::ostringstream os;
    s = find_preset("fig2").sweep;
    s.start = 10;
    s.end = 0;
    CHECK_THROWS_AS(run_sweep(s, os), ValidationError);
    CHECK(os.str().empty());
}

TEST_CASE("sweep values include the end point")
{
    SweepSpec s;
    s.start = 0.5;
    s.end = 0.95;
    s.step = 0.05;
    CHECK(s.values().size() == 10);
    s.start = 0;
    s.end = 50;
    s.step = 5;
    CHECK(s.values().size() == 11);
    CHECK(s.values().back() == 50.0);
}

TEST_CASE("fig2 grid has one row per mode, point and user")
{
    SweepSpec s = find_preset("fig2").sweep;
    s.sic_modes = {SicMode::perfect, SicMode::imperfect};
    s.workers = 1;
    const auto r = rows(run(s));
    REQUIRE(r.size() == 1 + 66);
    CHECK(r[0].size() == 9);
    for (std::size_t i = 1; i < r.size(); ++i) {
        CHECK(r[i].size() == 9);
        CHECK(r[i][5].empty());  // empirical not requested
        CHECK(!r[i][3].empty());
    }
    CHECK(r[1][0] == "psic");
    CHECK(r.back()[0] == "ipsic");
}

TEST_CASE("CSV values equal direct engine calls")
{
    SweepSpec s = find_preset("fig2").sweep;
    s.start = 20;
    s.end = 20;
    s.workers = 1;
    const auto r = rows(run(s));
    SystemConfig c = s.config;
    c.snr_legit_db = 20;
    const SecrecyEngine e(c);
    std::vector<double> p;
    for (int k = 1; k <= 3; ++k) {
        const double v = e.sop_closed_form(SecrecyQuery::from(c, k));
        p.push_back(v);
        CHECK(std::stod(r[static_cast<std::size_t>(k)][3]) == doctest::Approx(v).epsilon(1e-11));
    }
    CHECK(std::stod(r[1][7]) == doctest::Approx(system_sop(p)).epsilon(1e-11));
}

TEST_CASE("sweep output is byte-identical across runs and worker counts")
{
    SweepSpec s = find_preset("fig8").sweep;
    s.start = 10;
    s.end = 30;
    s.step = 10;
    s.outputs = {SweepOutput::analytic, SweepOutput::empirical, SweepOutput::system_sop, SweepOutput::throughput};
    s.trials = 20000;
    s.ordering = OrderingMode::per_user_distance;
    s.workers = 1;
    const std::string a = run(s);
    const std::string b = run(s);
    s.workers = 4;
    const std::string c = run(s);
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("analytic-only sweeps ignore seed and trial count")
{
    SweepSpec s = find_preset("fig3").sweep;
    s.workers = 1;
    const std::string a = run(s);
    s.seed = 12345;
    s.trials = 7;
    CHECK(run(s) == a);
}

TEST_CASE("empirical column depends on the seed")
{
    SweepSpec s = find_preset("fig2").sweep;
    s.start = s.end = 0;
    s.outputs = {SweepOutput::empirical};
    s.trials = 5000;
    s.workers = 1;
    const std::string a = run(s);
    s.seed = 2;
    CHECK(run(s) != a);
    const auto r = rows(a);
    CHECK(r[1][3].empty());
    CHECK(!r[1][5].empty());
    CHECK(!r[1][6].empty());
}

TEST_CASE("presets load, validate and describe their overrides")
{
    for (const char* name : {"table1", "fig2", "fig3", "fig4", "fig5", "fig5b", "fig6", "fig6b", "fig7", "fig8",
                             "fig8b", "fig9", "fig10"}) {
        CAPTURE(name);
        const Preset& p = find_preset(name);
        CHECK_NOTHROW(p.sweep.validate());
        const std::string d = describe(p);
        CHECK(d.find(name) == 0);
        for (const auto& o : p.overrides) CHECK(d.find(o) != std::string::npos);
    }
    CHECK(describe(find_preset("table1")).find("overrides: none") != std::string::npos);
    CHECK_THROWS_AS(find_preset("fig1"), ValidationError);
}

TEST_CASE("fig4 sweeps the number of elements")
{
    SweepSpec s = find_preset("fig4").sweep;
    s.sic_modes = {SicMode::perfect};
    s.workers = 1;
    const auto r = rows(run(s));
    CHECK(r.size() == 1 + 5 * 3);
    // More elements, lower SOP for the strongest user.
    double prev = 2.0;
    for (std::size_t i = 3; i < r.size(); i += 3) {
        const double v = std::stod(r[i][3]);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("enum parsing")
{
    CHECK(parse_sweep_variable("snr_db") == SweepVariable::snr_db);
    CHECK(parse_sweep_output("system_sop") == SweepOutput::system_sop);
    CHECK_THROWS_AS(parse_sweep_variable("noise"), ValidationError);
    CHECK_THROWS_AS(parse_sweep_output("capacity"), ValidationError);
}
