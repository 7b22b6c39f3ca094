// fdrkit command line: p-value adjustment, directional correction
// strategies, two-stage set-level testing, and the simulation harness.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdrkit/directional.hpp"
#include "fdrkit/fdr.hpp"
#include "fdrkit/numerics.hpp"
#include "fdrkit/selective.hpp"
#include "fdrkit/simulate.hpp"
#include "fdrkit/table.hpp"

namespace {

using nlohmann::json;
namespace fk = fdrkit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CommonOpts {
    std::string file;
    std::string out;
    int precision = 6;
    bool json_summary = false;
};

std::ostream& open_output(const std::string& path, std::ofstream& file_stream)
{
    if (path.empty()) return std::cout;
    file_stream.open(path);
    if (!file_stream) {
        throw fk::table::ParseError(path + ": cannot open file for writing");
    }
    return file_stream;
}

fk::fdr::Method parse_method(const std::string& name)
{
    const auto m = fk::fdr::method_from_name(name);
    if (!m) {
        throw CLI::ValidationError("--method", "unknown method '" + name + "'");
    }
    return *m;
}

fk::directional::Strategy parse_strategy(const std::string& name)
{
    const auto s = fk::directional::strategy_from_name(name);
    if (!s) {
        throw CLI::ValidationError("--strategy", "unknown strategy '" + name + "'");
    }
    return *s;
}

std::string fmt(double v, int precision)
{
    return fk::table::format_number(v, precision);
}

int run_adjust(const CommonOpts& opts, const std::string& method_name, double q)
{
    const fk::fdr::Method method = parse_method(method_name);
    fk::table::Table t = fk::table::Table::read_file(opts.file);
    if (t.has_column("adjusted_p")) {
        std::cerr << "error: input already carries an adjusted_p column; "
                     "refusing to correct twice\n";
        return kExitData;
    }
    const fk::fdr::PValueSet p(t.numeric_column("p"));
    const fk::fdr::FdrOutcome res = fk::fdr::decide(p, method, q);
    t.add_numeric_column("adjusted_p", res.adjusted_p, opts.precision);
    t.add_flag_column("rejected", res.rejected);

    std::ofstream file_stream;
    t.write(open_output(opts.out, file_stream));
    return kExitOk;
}

int run_strategy(const CommonOpts& opts, const std::string& strategy_name,
                 const std::string& method_name, double q, double screening_level,
                 std::optional<double> dof_value, bool uncorrected)
{
    std::optional<fk::numerics::DegreesOfFreedom> dof;
    if (dof_value) dof = fk::numerics::DegreesOfFreedom(*dof_value);

    if (uncorrected) {
        if (!dof) {
            std::cerr << "error: --uncorrected requires --dof\n";
            return kExitUsage;
        }
        const auto [t_pos, t_neg] = fk::directional::uncorrected_thresholds(q, *dof);
        if (opts.json_summary) {
            json j{{"t_pos", fmt(t_pos, opts.precision)}, {"t_neg", fmt(t_neg, opts.precision)},
                   {"alpha", q}, {"dof", *dof_value}};
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "# t_pos " << fmt(t_pos, opts.precision) << '\n'
                      << "# t_neg " << fmt(t_neg, opts.precision) << '\n';
        }
        return kExitOk;
    }

    const fk::directional::Strategy strategy = parse_strategy(strategy_name);
    const fk::fdr::Method method = parse_method(method_name);
    if (method != fk::fdr::Method::BH && method != fk::fdr::Method::BKY) {
        std::cerr << "error: strategies support only bh or bky\n";
        return kExitUsage;
    }

    fk::table::Table t = fk::table::Table::read_file(opts.file);
    if (!t.has_column("z")) {
        std::cerr << "error: " << opts.file << ": strategies need a z column\n";
        return kExitData;
    }
    std::vector<double> z = t.numeric_column("z");
    fk::directional::DirectionalInput input;
    if (t.has_column("p")) {
        input.z = std::move(z);
        input.p_one = t.numeric_column("p");
        input.dof = dof;
    } else {
        input = fk::directional::DirectionalInput::from_statistics(std::move(z), dof);
    }

    const auto outcome =
        fk::directional::apply_strategy(input, strategy, method, q, screening_level);
    t.add_numeric_column("adjusted_pos", outcome.adjusted_pos, opts.precision);
    t.add_numeric_column("adjusted_neg", outcome.adjusted_neg, opts.precision);
    t.add_flag_column("rejected_pos", outcome.rejected_pos);
    t.add_flag_column("rejected_neg", outcome.rejected_neg);
    t.add_flag_column("rejected_any", outcome.rejected_any);

    std::ofstream file_stream;
    std::ostream& out = open_output(opts.out, file_stream);
    if (opts.json_summary) {
        json j{{"strategy", strategy_name}, {"method", method_name}, {"q", q},
               {"t_pos", fmt(outcome.t_pos, opts.precision)},
               {"t_neg", fmt(outcome.t_neg, opts.precision)}};
        if (outcome.t_pos_param) j["t_pos_param"] = fmt(*outcome.t_pos_param, opts.precision);
        if (outcome.t_neg_param) j["t_neg_param"] = fmt(*outcome.t_neg_param, opts.precision);
        out << j.dump(2) << '\n';
    } else {
        out << "# t_pos " << fmt(outcome.t_pos, opts.precision) << '\n'
            << "# t_neg " << fmt(outcome.t_neg, opts.precision) << '\n';
        if (outcome.t_pos_param) {
            out << "# t_pos_param " << fmt(*outcome.t_pos_param, opts.precision) << '\n';
        }
        if (outcome.t_neg_param) {
            out << "# t_neg_param " << fmt(*outcome.t_neg_param, opts.precision) << '\n';
        }
    }
    t.write(out);
    return kExitOk;
}

int run_bb(const CommonOpts& opts, double q, double screening_level,
           const std::string& second_stage_name)
{
    const fk::fdr::Method method = parse_method(second_stage_name);
    if (method != fk::fdr::Method::BH && method != fk::fdr::Method::BKY) {
        std::cerr << "error: --second-stage must be bh or bky\n";
        return kExitUsage;
    }
    fk::table::Table t = fk::table::Table::read_file(opts.file);
    if (!t.has_column("set")) {
        std::cerr << "error: " << opts.file << ": missing set column\n";
        return kExitData;
    }
    const fk::fdr::PValueSet p(t.numeric_column("p"));
    const auto set_idx = *t.column_index("set");
    std::vector<std::string> labels;
    labels.reserve(t.row_count());
    for (std::size_t r = 0; r < t.row_count(); ++r) labels.push_back(t.cell(r, set_idx));

    const auto second = method == fk::fdr::Method::BH ? fk::selective::SecondStage::BH
                                                      : fk::selective::SecondStage::BKY;
    const auto bb = fk::selective::bb_procedure(
        p, fk::selective::Partition::from_labels(labels), q, screening_level, second);

    std::vector<char> selected(t.row_count(), 0);
    for (const auto& [name, so] : bb.per_set) {
        if (!so.selected) continue;
        for (std::size_t idx : so.members) selected[idx] = 1;
    }
    t.add_flag_column("selected", selected);
    t.add_flag_column("rejected", bb.rejected);
    t.add_numeric_column("adjusted_p", bb.adjusted_p, opts.precision);

    std::ofstream file_stream;
    std::ostream& out = open_output(opts.out, file_stream);
    if (opts.json_summary) {
        json j{{"R", bb.R}, {"S", bb.S}, {"q_prime", bb.q_prime}};
        out << j.dump(2) << '\n';
    } else {
        out << "# R " << bb.R << '\n'
            << "# S " << bb.S << '\n'
            << "# q_prime " << fmt(bb.q_prime, opts.precision) << '\n';
    }
    t.write(out);
    return kExitOk;
}

int run_simulate(const CommonOpts& opts, const std::string& scenario,
                 const std::string& method_name, const std::string& strategy_name,
                 const std::string& scale, double q, std::uint64_t seed)
{
    std::size_t V = 500;
    std::size_t realizations = 500;
    if (scale == "full") {
        V = 2000;
        realizations = 2000;
    } else if (scale != "desk") {
        std::cerr << "error: --scale must be desk or full\n";
        return kExitUsage;
    }

    std::vector<fk::simulate::ScenarioSpec> specs;
    if (scenario == "all") {
        specs = fk::simulate::canonical_scenarios(V, realizations, q, seed);
    } else {
        try {
            specs.push_back(fk::simulate::canonical_scenario(scenario, V, realizations, q, seed));
        } catch (const std::domain_error&) {
            std::cerr << "error: unknown scenario '" << scenario << "' (use i..x or all)\n";
            return kExitUsage;
        }
    }

    std::vector<fk::fdr::Method> methods;
    if (method_name == "all") {
        methods = {fk::fdr::Method::BH, fk::fdr::Method::BKY};
    } else {
        const auto m = parse_method(method_name);
        if (m != fk::fdr::Method::BH && m != fk::fdr::Method::BKY) {
            std::cerr << "error: simulations support only bh or bky\n";
            return kExitUsage;
        }
        methods = {m};
    }
    std::vector<fk::directional::Strategy> strategies;
    if (strategy_name == "all") {
        strategies = {fk::directional::Strategy::Canonical, fk::directional::Strategy::Combined,
                      fk::directional::Strategy::TwoTailed, fk::directional::Strategy::SplitTails,
                      fk::directional::Strategy::CanonicalBB,
                      fk::directional::Strategy::SplitTailsBB};
    } else {
        strategies = {parse_strategy(strategy_name)};
    }

    std::ofstream file_stream;
    std::ostream& out = open_output(opts.out, file_stream);

    if (opts.json_summary) {
        json jrows = json::array();
        for (const auto& spec : specs) {
            const auto r = fk::simulate::run_scenario(spec, methods, strategies);
            for (const auto& c : r.cells) {
                jrows.push_back({{"scenario", spec.name},
                                 {"method", fk::fdr::method_name(c.method)},
                                 {"strategy", fk::directional::strategy_name(c.strategy)},
                                 {"view", fk::simulate::view_name(c.view)},
                                 {"fdr", c.fdr_mean},
                                 {"fdr_ci", {c.fdr_ci_low, c.fdr_ci_high}},
                                 {"power", c.power_mean},
                                 {"power_ci", {c.power_ci_low, c.power_ci_high}}});
            }
        }
        out << json{{"scale", scale}, {"seed", seed}, {"q", q}, {"rows", jrows}}.dump(2) << '\n';
        return kExitOk;
    }

    out << "scenario,method,strategy,view,fdr,fdr_ci_low,fdr_ci_high,"
           "power,power_ci_low,power_ci_high\n";
    for (const auto& spec : specs) {
        const auto r = fk::simulate::run_scenario(spec, methods, strategies);
        for (const auto& c : r.cells) {
            out << spec.name << ',' << fk::fdr::method_name(c.method) << ','
                << fk::directional::strategy_name(c.strategy) << ','
                << fk::simulate::view_name(c.view) << ',' << fmt(c.fdr_mean, opts.precision)
                << ',' << fmt(c.fdr_ci_low, opts.precision) << ','
                << fmt(c.fdr_ci_high, opts.precision) << ',' << fmt(c.power_mean, opts.precision)
                << ',' << fmt(c.power_ci_low, opts.precision) << ','
                << fmt(c.power_ci_high, opts.precision) << '\n';
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"fdrkit: false discovery rate procedures, directional correction "
                 "strategies, and a simulation harness"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string method = "bh";
    std::string strategy = "twotailed";
    std::string second_stage = "bh";
    std::string scenario = "i";
    std::string scale = "desk";
    double q = 0.05;
    double screening_level = 0.05;
    std::optional<double> dof;
    bool uncorrected = false;
    std::uint64_t seed = 42;

    auto add_common = [&](CLI::App* cmd, bool with_file) {
        if (with_file) cmd->add_option("file", opts.file, "input table (csv or tsv)")->required();
        cmd->add_option("--out", opts.out, "write output here instead of stdout");
        cmd->add_option("--precision", opts.precision, "significant digits for numbers");
        cmd->add_flag("--json", opts.json_summary, "emit summaries as JSON");
    };

    auto* adjust = app.add_subcommand("adjust", "adjust a p column for multiple testing");
    add_common(adjust, true);
    adjust->add_option("--method", method, "bh, by, bky, sidak, or bonferroni");
    adjust->add_option("--q", q, "level");

    auto* strat = app.add_subcommand("strategy", "run a directional correction strategy");
    add_common(strat, true);
    strat->add_option("--strategy", strategy,
                      "canonical, combined, twotailed, splittails, canonical-bb, splittails-bb");
    strat->add_option("--method", method, "bh or bky");
    strat->add_option("--q", q, "level");
    strat->add_option("--screening-level", screening_level, "first-stage level for -bb variants");
    strat->add_option("--dof", dof, "t-distribution degrees of freedom for parametric thresholds");
    strat->add_flag("--uncorrected", uncorrected,
                    "report plain two-tailed thresholds at level --q instead");

    auto* bb = app.add_subcommand("bb", "two-stage set-level testing over a labeled table");
    add_common(bb, true);
    bb->add_option("--q", q, "level");
    bb->add_option("--screening-level", screening_level, "first-stage level");
    bb->add_option("--second-stage", second_stage, "bh or bky");

    auto* sim = app.add_subcommand("simulate", "run the synthetic evaluation scenarios");
    add_common(sim, false);
    sim->add_option("--scenario", scenario, "i..x or all");
    sim->add_option("--method", method, "bh, bky, or all")->default_str("all");
    sim->add_option("--strategy", strategy, "one strategy name or all")->default_str("all");
    sim->add_option("--scale", scale, "desk (V=500, 500 realizations) or full (2000/2000)");
    sim->add_option("--q", q, "level");
    sim->add_option("--seed", seed, "base seed");

    // simulate defaults to the full cross of methods and strategies
    method = "bh";
    if (argc > 1 && std::string(argv[1]) == "simulate") {
        method = "all";
        strategy = "all";
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*adjust) return run_adjust(opts, method, q);
        if (*strat) {
            return run_strategy(opts, strategy, method, q, screening_level, dof, uncorrected);
        }
        if (*bb) return run_bb(opts, q, screening_level, second_stage);
        if (*sim) return run_simulate(opts, scenario, method, strategy, scale, q, seed);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const fk::table::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
