#pragma once

// `pvstab` command line: pv, irr, schedule, errors.
// Exit codes: 0 ok, 1 input error, 2 numerical failure.

#include <cstddef>
#include <exception>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pvstab/error_lab.hpp"
#include "pvstab/fas91.hpp"
#include "pvstab/io.hpp"
#include "pvstab/irr.hpp"
#include "pvstab/pv_direct.hpp"
#include "pvstab/pv_recursive.hpp"

namespace pvstab::cli {

enum class Command { pv, irr, schedule, errors };
enum class SchemeChoice { direct, forward, backward, all };
enum class Format { text, csv, json };

inline constexpr int exit_ok = 0;
inline constexpr int exit_input = 1;
inline constexpr int exit_numerical = 2;

struct CliConfig {
    Command command = Command::pv;
    std::string input_path;
    std::optional<double> rate;
    std::optional<double> uncertainty;
    SchemeChoice scheme = SchemeChoice::direct;
    Format output_format = Format::text;
    double tolerance = 1e-12;
    std::size_t max_iter = 200;
    int polish_steps = 3;
    Rounding rounding = Rounding::none;
    Engine engine = Engine::forward;
    Reference reference = Reference::oracle;
    std::optional<double> noise_floor;
    std::vector<double> sweep;
};

namespace detail {

inline std::vector<Scheme> schemes_for(SchemeChoice c, bool include_direct) {
    switch (c) {
        case SchemeChoice::direct: return {Scheme::direct};
        case SchemeChoice::forward: return {Scheme::forward};
        case SchemeChoice::backward: return {Scheme::backward};
        case SchemeChoice::all:
            if (include_direct) return {Scheme::direct, Scheme::forward, Scheme::backward};
            return {Scheme::forward, Scheme::backward};
    }
    return {};
}

inline IrrOptions irr_options(const CliConfig& cfg, int polish) {
    IrrOptions o;
    o.tolerance = cfg.tolerance;
    o.max_iter = cfg.max_iter;
    o.polish_steps = polish;
    return o;
}

inline Rate rate_or_irr(const CliConfig& cfg, const CashflowSchedule& schedule, int polish, std::ostream& err) {
    if (cfg.rate) return Rate(*cfg.rate, cfg.uncertainty.value_or(0.0));
    const IrrResult r = solve_irr(schedule, irr_options(cfg, polish));
    if (r.ambiguous) err << "warning: cashflow has " << r.sign_changes << " sign changes; IRR may not be unique\n";
    return r.rate;
}

inline int run_pv(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto schedule = io::read_file(cfg.input_path, [](std::istream& in) { return io::read_cashflow_csv(in); });
    const Rate rate = rate_or_irr(cfg, schedule, cfg.polish_steps, err);
    struct Line {
        Scheme scheme;
        Money pv, npv, terminal;
    };
    std::vector<Line> lines;
    for (Scheme s : schemes_for(cfg.scheme, true)) {
        if (s == Scheme::direct) {
            const Money v = pv(schedule, rate);
            lines.push_back({s, v, schedule.initial() + v, 0.0});
        } else if (s == Scheme::backward) {
            const PvSeries b = backward_series(schedule, rate);
            lines.push_back({s, b.values.front(), schedule.initial() + b.values.front(), b.values.back()});
        } else {
            // Seeded like an amortization schedule; the terminal value shows the drift.
            const PvSeries f = forward_series(schedule, rate, -schedule.initial());
            lines.push_back({s, f.values.front(), schedule.initial() + f.values.front(), f.values.back()});
        }
    }
    switch (cfg.output_format) {
        case Format::json: {
            io::json j;
            j["rate"] = {{"value", rate.value()}, {"uncertainty", rate.uncertainty()}};
            j["results"] = io::json::array();
            for (const auto& l : lines) {
                j["results"].push_back(
                    {{"scheme", to_string(l.scheme)}, {"pv", l.pv}, {"npv", l.npv}, {"terminal", l.terminal}});
            }
            out << j.dump(2) << '\n';
            break;
        }
        case Format::csv:
            out << "scheme,pv,npv,terminal\n";
            for (const auto& l : lines) {
                out << to_string(l.scheme) << ',' << io::format_number(l.pv) << ',' << io::format_number(l.npv) << ','
                    << io::format_number(l.terminal) << '\n';
            }
            break;
        case Format::text:
            out << "rate " << io::format_number(rate.value()) << '\n';
            for (const auto& l : lines) {
                out << to_string(l.scheme) << ": pv " << io::format_number(l.pv) << "  npv " << io::format_number(l.npv)
                    << "  PV_N " << io::format_number(l.terminal) << '\n';
            }
            break;
    }
    return exit_ok;
}

inline int run_irr(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto schedule = io::read_file(cfg.input_path, [](std::istream& in) { return io::read_cashflow_csv(in); });
    const IrrResult r = solve_irr(schedule, irr_options(cfg, cfg.polish_steps));
    if (r.ambiguous) err << "warning: cashflow has " << r.sign_changes << " sign changes; IRR may not be unique\n";
    switch (cfg.output_format) {
        case Format::json: out << io::irr_json(r).dump(2) << '\n'; break;
        case Format::csv:
            out << "rate,uncertainty,iterations,residual\n"
                << io::format_number(r.rate.value()) << ',' << io::format_number(r.rate.uncertainty()) << ','
                << r.iterations << ',' << io::format_number(r.residual) << '\n';
            break;
        case Format::text:
            out << "rate        " << io::format_number(r.rate.value()) << '\n'
                << "uncertainty " << io::format_number(r.rate.uncertainty()) << '\n'
                << "iterations  " << r.iterations << '\n'
                << "residual    " << io::format_number(r.residual) << '\n';
            break;
    }
    return exit_ok;
}

inline int run_schedule(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    const LoanSpec loan = io::read_file(cfg.input_path, [](std::istream& in) { return io::read_loan_spec(in); });
    const Rate rate = rate_or_irr(cfg, loan_cashflow(loan), cfg.polish_steps, err);
    const auto rows = build_schedule(loan, rate, cfg.rounding, cfg.engine);
    switch (cfg.output_format) {
        case Format::json: out << io::schedule_json(rows, cfg.rounding, rate).dump(2) << '\n'; break;
        case Format::csv: io::write_schedule_csv(out, rows, cfg.rounding); break;
        case Format::text:
            out << "effective rate " << io::format_number(rate.value()) << '\n';
            io::write_schedule_text(out, rows, cfg.rounding);
            break;
    }
    return exit_ok;
}

inline int run_errors(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto schedule = io::read_file(cfg.input_path, [](std::istream& in) { return io::read_cashflow_csv(in); });
    // A rate solved here keeps its bisection error: that error is what the
    // experiment propagates.
    const Rate rate = schedule.empty() ? Rate(cfg.rate.value_or(0.0)) : rate_or_irr(cfg, schedule, 0, err);
    ExperimentConfig ec;
    ec.schemes = schemes_for(cfg.scheme, false);
    ec.reference = cfg.reference;
    ec.noise_floor = cfg.noise_floor;
    ec.sweep_tolerances = cfg.sweep;
    ec.irr = irr_options(cfg, 0);
    const ExperimentReport report = run_experiment(schedule, rate, ec);
    if (cfg.output_format == Format::json) {
        out << io::report_json(report).dump(2) << '\n';
    } else {
        io::write_report_text(out, report);
    }
    return exit_ok;
}

}  // namespace detail

inline int run(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        switch (cfg.command) {
            case Command::pv: return detail::run_pv(cfg, out, err);
            case Command::irr: return detail::run_irr(cfg, out, err);
            case Command::schedule: return detail::run_schedule(cfg, out, err);
            case Command::errors: return detail::run_errors(cfg, out, err);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.is_numerical() ? exit_numerical : exit_input;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }
    return exit_input;
}

/// Parses argv (program name first) and runs the selected command.
inline int main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Present value schemes, IRR and forward/backward recursion error experiments", "pvstab"};
    app.require_subcommand(1);
    CliConfig cfg;
    double rate = 0.0, uncertainty = 0.0, noise_floor = 0.0;

    const std::map<std::string, SchemeChoice> schemes{{"direct", SchemeChoice::direct},
                                                      {"forward", SchemeChoice::forward},
                                                      {"backward", SchemeChoice::backward},
                                                      {"all", SchemeChoice::all}};
    const std::map<std::string, Format> formats{{"text", Format::text}, {"csv", Format::csv}, {"json", Format::json}};
    const std::map<std::string, Rounding> roundings{{"none", Rounding::none}, {"cents", Rounding::cents}};
    const std::map<std::string, Engine> engines{{"forward", Engine::forward}, {"backward", Engine::backward}};
    const std::map<std::string, Reference> references{{"oracle", Reference::oracle}, {"direct", Reference::direct}};

    auto common = [&](CLI::App* sub, bool with_rate) {
        sub->add_option("input", cfg.input_path, "Input file")->required();
        sub->add_option("--format", cfg.output_format, "text, csv or json")
            ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
        sub->add_option("--tolerance", cfg.tolerance, "IRR bracket width")->check(CLI::PositiveNumber);
        sub->add_option("--max-iter", cfg.max_iter, "IRR bisection iteration limit");
        if (with_rate) {
            sub->add_option("--rate", rate, "Per-period rate; solved as the IRR when absent");
            sub->add_option("--uncertainty", uncertainty, "Absolute error of --rate")->check(CLI::NonNegativeNumber);
        }
    };

    auto* pv_cmd = app.add_subcommand("pv", "PV and NPV per scheme");
    common(pv_cmd, true);
    pv_cmd->add_option("--scheme", cfg.scheme, "direct, forward, backward or all")
        ->transform(CLI::CheckedTransformer(schemes, CLI::ignore_case));

    auto* irr_cmd = app.add_subcommand("irr", "Solve NPV(r) = 0");
    common(irr_cmd, false);
    irr_cmd->add_option("--polish", cfg.polish_steps, "Newton polish steps after bisection");

    auto* schedule_cmd = app.add_subcommand("schedule", "Loan fee amortization schedule");
    common(schedule_cmd, true);
    schedule_cmd->add_option("--rounding", cfg.rounding, "none or cents")
        ->transform(CLI::CheckedTransformer(roundings, CLI::ignore_case));
    schedule_cmd->add_option("--engine", cfg.engine, "Carrying amount recursion: forward or backward")
        ->transform(CLI::CheckedTransformer(engines, CLI::ignore_case));

    auto* errors_cmd = app.add_subcommand("errors", "Error trajectories of the recursive schemes");
    common(errors_cmd, true);
    errors_cmd->add_option("--scheme", cfg.scheme, "forward, backward or all")
        ->transform(CLI::CheckedTransformer(schemes, CLI::ignore_case));
    errors_cmd->add_option("--reference", cfg.reference, "oracle or direct")
        ->transform(CLI::CheckedTransformer(references, CLI::ignore_case));
    errors_cmd->add_option("--noise-floor", noise_floor, "Errors at or below this are not fitted");
    errors_cmd->add_option("--sweep", cfg.sweep, "IRR tolerances to re-solve at")->delimiter(',');

    std::vector<const char*> args;
    for (const auto& a : argv) args.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(args.size()), args.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }

    CLI::App* chosen = app.get_subcommands().front();
    if (chosen == pv_cmd) cfg.command = Command::pv;
    if (chosen == irr_cmd) cfg.command = Command::irr;
    if (chosen == schedule_cmd) cfg.command = Command::schedule;
    if (chosen == errors_cmd) {
        cfg.command = Command::errors;
        if (errors_cmd->count("--scheme") == 0) cfg.scheme = SchemeChoice::all;
    }
    if (chosen->get_option_no_throw("--rate") && chosen->count("--rate")) cfg.rate = rate;
    if (chosen->get_option_no_throw("--uncertainty") && chosen->count("--uncertainty")) cfg.uncertainty = uncertainty;
    if (chosen->get_option_no_throw("--noise-floor") && chosen->count("--noise-floor")) cfg.noise_floor = noise_floor;
    try {
        if (cfg.rate) Rate(*cfg.rate, cfg.uncertainty.value_or(0.0));
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }
    return run(cfg, out, err);
}

}  // namespace pvstab::cli
