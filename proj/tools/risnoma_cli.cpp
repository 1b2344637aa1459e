// risnoma: sweeps, validation, quadrature audit and presets.
// Every number printed here comes from the library; this file only parses
// flags and formats output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "risnoma/config.hpp"
#include "risnoma/presets.hpp"
#include "risnoma/special_math.hpp"
#include "risnoma/sweep.hpp"
#include "risnoma/validation.hpp"

namespace {

using namespace risnoma;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInvalid = 2;

struct Common {
    std::string config_path;
    std::string scenario;
    std::string sic;
    std::uint64_t trials = 0;
    std::uint64_t seed = 1;
    int workers = 0;
    std::string out = "stdout";
    std::string eve;
    std::string ordering;
    std::string variant;
    bool trials_set = false;
};

// Routes output to stdout or a file; the file is only created on first use.
class Sink {
public:
    explicit Sink(std::string target) : target_(std::move(target)) {}
    std::ostream& stream()
    {
        if (target_ == "stdout" || target_ == "-") return std::cout;
        if (!file_) {
            file_ = std::make_unique<std::ofstream>(target_);
            if (!*file_) throw ValidationError("out", "cannot open '" + target_ + "' for writing");
        }
        return *file_;
    }
    bool is_stdout() const { return target_ == "stdout" || target_ == "-"; }

private:
    std::string target_;
    std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App& app, Common& c)
{
    app.add_option("--config", c.config_path, "JSON config layered over the preset or defaults")
        ->envname("RISNOMA_CONFIG");
    app.add_option("--scenario", c.scenario, "external | internal")->envname("RISNOMA_SCENARIO");
    app.add_option("--sic", c.sic, "psic | ipsic (default: preset modes, else psic)")->envname("RISNOMA_SIC");
    app.add_option("--trials", c.trials, "Monte Carlo trials")->envname("RISNOMA_TRIALS");
    app.add_option("--seed", c.seed, "master seed")->envname("RISNOMA_SEED");
    app.add_option("--workers", c.workers, "worker threads (0: all cores)")->envname("RISNOMA_WORKERS");
    app.add_option("--out", c.out, "output path or stdout")->envname("RISNOMA_OUT");
    app.add_option("--eve", c.eve, "sampled | mean-field")->envname("RISNOMA_EVE");
    app.add_option("--ordering", c.ordering, "common-variance | per-user-distance")->envname("RISNOMA_ORDERING");
    app.add_option("--variant", c.variant, "as-printed | with-nu-term")->envname("RISNOMA_VARIANT");
}

int run_sweep_command(const Common& c, const std::string& preset_name, const std::optional<std::string>& variable,
                      const std::optional<double>& start, const std::optional<double>& end,
                      const std::optional<double>& step, const std::vector<std::string>& outputs, int quad_order)
{
    SweepSpec spec;
    if (!preset_name.empty()) spec = find_preset(preset_name).sweep;
    if (!c.config_path.empty()) spec.config = load_config(c.config_path, spec.config);
    if (!c.scenario.empty()) spec.scenario = parse_scenario(c.scenario);
    else if (!c.config_path.empty()) spec.scenario = spec.config.scenario;
    if (!c.sic.empty()) spec.sic_modes = {parse_sic_mode(c.sic)};
    if (!c.variant.empty()) spec.config.eve_interference_variant = parse_eve_variant(c.variant);
    if (!c.eve.empty()) spec.eve = parse_eve_mode(c.eve);
    if (!c.ordering.empty()) spec.ordering = parse_ordering_mode(c.ordering);
    if (c.trials_set) spec.trials = c.trials;
    spec.seed = c.seed;
    spec.workers = c.workers;
    if (variable) spec.variable = parse_sweep_variable(*variable);
    if (start) spec.start = *start;
    if (end) spec.end = *end;
    if (step) spec.step = *step;
    if (!outputs.empty()) {
        spec.outputs.clear();
        for (const auto& o : outputs) spec.outputs.insert(parse_sweep_output(o));
    }
    if (quad_order > 0) spec.quad_order = quad_order;
    spec.validate();

    Sink sink(c.out);
    run_sweep(spec, sink.stream());
    return kExitOk;
}

std::string check_line(const ValidationCheck& k)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g %s %.6g", k.measured, k.comparison.c_str(), k.threshold);
    return buf;
}

int run_validate_command(const Common& c, const std::string& level, const std::string& fault,
                         const std::vector<int>& only, bool verbose)
{
    ValidationOptions o;
    o.level = parse_validation_level(level);
    o.seed = c.seed;
    o.workers = c.workers;
    o.only = only;
    if (!fault.empty()) {
        if (fault != "bessel") throw ValidationError("inject-fault", "only 'bessel' is supported");
        o.bessel_fault = 1.0 + 1e-6;
    }
    Sink sink(c.out);
    // Keep stdout clean for the JSON when it goes there.
    std::ostream& log = sink.is_stdout() ? std::cerr : std::cout;
    o.on_result = [&](const CriterionResult& r) {
        char head[160];
        std::snprintf(head, sizeof head, "[%s] %2d %-26s %7.2fs", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                      r.seconds);
        log << head;
        if (r.error) log << "  error: " << *r.error;
        log << '\n';
        for (const auto& k : r.checks) {
            if (verbose || !k.passed) log << "       " << (k.passed ? "ok   " : "FAIL ") << k.label << ": "
                                          << check_line(k) << '\n';
        }
        log.flush();
    };
    const ValidationReport report = run_validation(o);
    sink.stream() << report_to_json(report) << '\n';
    if (report.passed) {
        log << "validate: all " << report.criteria.size() << " criteria passed\n";
        return kExitOk;
    }
    log << "validate: failed criteria:";
    for (const auto& name : report.failed()) log << ' ' << name;
    log << '\n';
    return kExitFailed;
}

// Full precision, and always a decimal point so integers read as reals.
std::string real17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

int run_quadrature_command(const Common& c, int order)
{
    if (order < 1 || order > special::kMaxOrder) {
        throw ValidationError("order", "D must lie in [1, " + std::to_string(special::kMaxOrder) + "]");
    }
    const special::QuadratureRule rule = special::gauss_laguerre(order);
    Sink sink(c.out);
    std::ostream& os = sink.stream();
    os << "index,node,weight\n";
    for (int i = 0; i < rule.order; ++i) {
        const auto u = static_cast<std::size_t>(i);
        os << (i + 1) << ',' << real17(rule.nodes[u]) << ',' << real17(rule.weights[u]) << '\n';
    }
    return kExitOk;
}

int run_preset_command(const Common& c, bool list, const std::string& describe_name)
{
    Sink sink(c.out);
    std::ostream& os = sink.stream();
    if (!describe_name.empty()) {
        os << describe(find_preset(describe_name));
        return kExitOk;
    }
    if (!list) throw ValidationError("preset", "pass --list or --describe NAME");
    for (const auto& p : presets()) os << p.name << '\t' << p.figure << '\t' << p.summary << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Secrecy outage analysis for RIS-assisted NOMA downlinks"};
    app.require_subcommand(1);
    Common common;

    auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
    add_common(*sweep, common);
    std::string preset_name;
    std::optional<std::string> variable;
    std::optional<double> start, end, step;
    std::vector<std::string> outputs;
    int quad_order = 0;
    sweep->add_option("--preset", preset_name, "start from a named preset")->envname("RISNOMA_PRESET");
    sweep->add_option("--variable", variable, "snr_db | snr_eve_db | power_offset_aT | ris_elements | target_rate");
    sweep->add_option("--start", start);
    sweep->add_option("--end", end);
    sweep->add_option("--step", step);
    sweep->add_option("--outputs", outputs, "analytic,asymptotic,empirical,system_sop,throughput")->delimiter(',');
    sweep->add_option("--quad-order", quad_order, "Gauss-Laguerre order D = S (default 300)");

    auto* validate = app.add_subcommand("validate", "Run the acceptance criteria; JSON report to --out");
    add_common(*validate, common);
    std::string level = "quick";
    std::string fault;
    std::vector<int> only;
    bool verbose = false;
    validate->add_option("--level", level, "quick (1e5 trials) | full (1e6 trials)")->envname("RISNOMA_LEVEL");
    validate->add_flag_callback("--full", [&] { level = "full"; }, "same as --level full");
    validate->add_option("--criteria", only, "comma-separated criterion ids")->delimiter(',');
    validate->add_option("--inject-fault", fault, "corrupt a component (bessel)");
    validate->add_flag("-v,--verbose", verbose, "print every check");

    auto* quad = app.add_subcommand("quadrature-table", "Gauss-Laguerre nodes and weights as CSV");
    add_common(*quad, common);
    int order = 0;
    quad->add_option("order", order, "rule order D in [1, 512]")->required();

    auto* preset = app.add_subcommand("preset", "List or describe figure presets");
    add_common(*preset, common);
    bool list = false;
    std::string describe_name;
    preset->add_flag("--list", list);
    preset->add_option("--describe", describe_name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalid;
    }
    for (auto* sub : {sweep, validate, quad, preset}) {
        if (sub->parsed() && sub->count("--trials") > 0) common.trials_set = true;
    }
    if (!common.trials_set && std::getenv("RISNOMA_TRIALS") != nullptr) common.trials_set = true;

    try {
        if (sweep->parsed()) {
            return run_sweep_command(common, preset_name, variable, start, end, step, outputs, quad_order);
        }
        if (validate->parsed()) return run_validate_command(common, level, fault, only, verbose);
        if (quad->parsed()) return run_quadrature_command(common, order);
        if (preset->parsed()) return run_preset_command(common, list, describe_name);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
    return kExitInvalid;
}
