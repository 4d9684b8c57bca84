#pragma once

// Command-line front end: validate, simulate, transform, compare, report.
//
// Exit codes: 0 success, 1 validation/transform failure, 2 parse or I/O
// failure, 3 runtime failure, 4 usage error. Every failure prints one or
// more `error[CODE]: ...` lines on the error stream; data goes to files or
// the output stream.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "schedrisk/schedrisk.hpp"

namespace schedrisk::cli {

enum ExitStatus : int { kOk = 0, kValidation = 1, kParseOrIo = 2, kRuntime = 3, kUsage = 4 };

namespace detail {

/// Thrown inside a command to abort with a status and a coded message.
struct Failure {
    ExitStatus status;
    std::string code;
    std::string message;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kParseOrIo, "IO", "cannot open '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Failure{kParseOrIo, "IO", "cannot read '" + path + "'"};
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{kParseOrIo, "IO", "cannot open '" + path + "' for writing"};
    out << data;
    out.flush();
    if (!out) throw Failure{kParseOrIo, "IO", "cannot write '" + path + "'"};
}

inline bool same_file(const std::string& a, const std::string& b) {
    std::error_code ec;
    if (std::filesystem::equivalent(a, b, ec)) return true;
    return std::filesystem::weakly_canonical(a, ec) == std::filesystem::weakly_canonical(b, ec);
}

inline void guard_outputs(const std::vector<std::string>& inputs, const std::vector<std::string>& outputs) {
    for (const auto& o : outputs) {
        if (o.empty()) continue;
        for (const auto& i : inputs) {
            if (same_file(i, o)) throw Failure{kUsage, "USAGE", "output '" + o + "' would overwrite input '" + i + "'"};
        }
    }
}

inline void report_parse_errors(const ParseErrors& errors, std::ostream& err) {
    for (const auto& e : errors) err << "error[" << parse_error_code(e.code) << "]: " << e.to_string() << '\n';
}

inline ProcessModel load_model(const std::string& path, std::ostream& err) {
    auto parsed = parse_model(read_file(path), path);
    if (!parsed) {
        report_parse_errors(parsed.error(), err);
        throw Failure{kParseOrIo, "", ""};
    }
    return std::move(parsed).value();
}

inline Scenario load_scenario(const std::string& path, std::ostream& err) {
    auto parsed = parse_scenario(read_file(path), path);
    if (!parsed) {
        report_parse_errors(parsed.error(), err);
        throw Failure{kParseOrIo, "", ""};
    }
    return std::move(parsed).value();
}

/// Prints every diagnostic; returns false when there was at least one.
inline bool report_diagnostics(const ProcessModel& model, std::ostream& err) {
    const auto diags = validate_model(model);
    for (const auto& d : diags) {
        err << "error[" << rule_code(d.rule) << "]: ";
        if (!d.step_id.empty()) err << "step " << d.step_id << ": ";
        err << d.message << '\n';
    }
    return diags.empty();
}

inline ProcessModel load_valid_model(const std::string& path, std::ostream& err) {
    ProcessModel model = load_model(path, err);
    if (!report_diagnostics(model, err)) throw Failure{kValidation, "", ""};
    return model;
}

inline ProcessModel transform_or_fail(const ProcessModel& model, const Scenario& scenario) {
    auto out = apply_scenario(model, scenario);
    if (!out) {
        const auto& e = out.error();
        std::string msg = "op " + std::to_string(e.op_index);
        if (e.op_index < scenario.ops.size()) msg += " (" + std::string(op_name(scenario.ops[e.op_index])) + ")";
        throw Failure{kValidation, std::string(transform_error_code(e.code)), msg + ": " + e.message};
    }
    return std::move(out).value();
}

inline ResultSet simulate(const ProcessModel& model, const SimulationConfig& config) {
    try {
        return run_monte_carlo(model, config);
    } catch (const ExecutionCapExceeded& e) {
        throw Failure{kRuntime, "EXECUTION_CAP", e.what()};
    } catch (const std::exception& e) {
        throw Failure{kRuntime, "RUNTIME", e.what()};
    }
}

inline std::string fmt1(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(1) << v;
    return ss.str();
}

inline void print_comparison(const ComparisonReport& report, std::ostream& out) {
    out << std::left << std::setw(24) << "metric" << std::right << std::setw(12) << "median" << std::setw(12)
        << "to-be" << std::setw(10) << "red.%" << std::setw(12) << "mean" << std::setw(12) << "to-be"
        << std::setw(10) << "red.%" << '\n';
    auto pct = [](const std::optional<double>& v) { return v ? fmt1(round_display(*v)) : std::string("n/a"); };
    for (const auto& mc : report.metrics) {
        out << std::left << std::setw(24) << metric_name(mc.metric) << std::right << std::setw(12)
            << fmt1(mc.baseline.median) << std::setw(12) << fmt1(mc.transformed.median) << std::setw(10)
            << pct(mc.reduction_pct_median) << std::setw(12) << fmt1(mc.baseline.mean) << std::setw(12)
            << fmt1(mc.transformed.mean) << std::setw(10) << pct(mc.reduction_pct_mean) << '\n';
    }
}

inline void print_summary(const ResultSet& rs, std::ostream& out) {
    out << std::left << std::setw(24) << "metric" << std::right << std::setw(10) << "median" << std::setw(10)
        << "mean" << std::setw(10) << "std" << std::setw(10) << "min" << std::setw(10) << "max" << '\n';
    for (Metric m : kAllMetrics) {
        const auto s = summarize(metric_samples(rs, m));
        out << std::left << std::setw(24) << metric_name(m) << std::right << std::setw(10) << fmt1(s.median)
            << std::setw(10) << fmt1(s.mean) << std::setw(10) << fmt1(s.sample_std) << std::setw(10) << fmt1(s.min)
            << std::setw(10) << fmt1(s.max) << '\n';
    }
}

}  // namespace detail

/// Runs the command line in `args` (args[0] is the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using detail::Failure;

    CLI::App app{"Schedule-risk Monte Carlo for stochastic process models", "schedrisk"};
    app.require_subcommand(1);

    std::string model_path;
    std::string scenario_path;
    std::string out_path;
    std::string summary_path;
    std::string report_path;
    std::string boxplot_path;
    std::string results_path;
    std::string baseline_csv;
    std::string transformed_csv;
    std::uint64_t iterations = kDefaultIterations;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    bool paired = false;

    auto* validate = app.add_subcommand("validate", "Check a model document and print diagnostics");
    validate->add_option("MODEL", model_path, "Model document")->required();

    auto add_run_options = [&](CLI::App* sub) {
        sub->add_option("--iterations,-n", iterations, "Monte Carlo iterations")
            ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1'000'000'000}));
        sub->add_option("--seed,-s", seed, "Master seed");
        sub->add_option("--workers,-j", workers, "Worker threads (results do not depend on this)")
            ->check(CLI::Range(1u, 1024u));
    };

    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo analysis of a model");
    simulate->add_option("MODEL", model_path, "Model document")->required();
    simulate->add_option("--out,-o", out_path, "Per-iteration CSV output")->required();
    simulate->add_option("--summary", summary_path, "Summary statistics JSON output");
    add_run_options(simulate);

    auto* transform = app.add_subcommand("transform", "Apply a scenario and write the canonical result");
    transform->add_option("MODEL", model_path, "Model document")->required();
    transform->add_option("--scenario", scenario_path, "Scenario document")->required();
    transform->add_option("--out,-o", out_path, "Transformed model output")->required();

    auto* compare_cmd = app.add_subcommand("compare", "Simulate a model and its transformed counterpart");
    compare_cmd->add_option("MODEL", model_path, "Model document")->required();
    compare_cmd->add_option("--scenario", scenario_path, "Scenario document")->required();
    compare_cmd->add_option("--report", report_path, "Comparison JSON output")->required();
    compare_cmd->add_flag("--paired", paired, "Use the same master seed on both sides (common random numbers)");
    compare_cmd->add_option("--baseline-csv", baseline_csv, "Optional per-iteration CSV of the baseline run");
    compare_cmd->add_option("--transformed-csv", transformed_csv, "Optional per-iteration CSV of the transformed run");
    add_run_options(compare_cmd);

    auto* report = app.add_subcommand("report", "Boxplot descriptors from a results CSV");
    report->add_option("RESULTS", results_path, "CSV written by simulate")->required();
    report->add_option("--boxplot", boxplot_path, "Boxplot JSON output (stdout when omitted)");
    report->add_option("--summary", summary_path, "Summary statistics JSON output");

    std::vector<std::string> argv_storage(args.begin(), args.end());
    if (argv_storage.empty()) argv_storage.emplace_back("schedrisk");
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << "schedrisk\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error[USAGE]: " << e.what() << '\n';
        return kUsage;
    }

    SimulationConfig config;
    config.iterations = iterations;
    config.master_seed = seed;
    config.workers = workers;

    try {
        if (validate->parsed()) {
            ProcessModel model = detail::load_model(model_path, err);
            if (!detail::report_diagnostics(model, err)) return kValidation;
            out << "ok: model '" << model.name << "' is valid (" << model.steps.size() << " steps)\n";
            return kOk;
        }

        if (simulate->parsed()) {
            detail::guard_outputs({model_path}, {out_path, summary_path});
            const ProcessModel model = detail::load_valid_model(model_path, err);
            const ResultSet rs = detail::simulate(model, config);
            detail::write_file(out_path, export_results_csv(rs));
            if (!summary_path.empty()) detail::write_file(summary_path, dump_document(summary_document(rs)));
            detail::print_summary(rs, out);
            return kOk;
        }

        if (transform->parsed()) {
            detail::guard_outputs({model_path, scenario_path}, {out_path});
            const ProcessModel model = detail::load_valid_model(model_path, err);
            const Scenario scenario = detail::load_scenario(scenario_path, err);
            const ProcessModel result = detail::transform_or_fail(model, scenario);
            detail::write_file(out_path, serialize_model(result));
            out << "ok: wrote '" << out_path << "' (" << result.steps.size() << " steps)\n";
            return kOk;
        }

        if (compare_cmd->parsed()) {
            detail::guard_outputs({model_path, scenario_path}, {report_path, baseline_csv, transformed_csv});
            const ProcessModel model = detail::load_valid_model(model_path, err);
            const Scenario scenario = detail::load_scenario(scenario_path, err);
            const ProcessModel to_be = detail::transform_or_fail(model, scenario);

            const ResultSet baseline = detail::simulate(model, config);
            SimulationConfig to_be_config = config;
            if (!paired) to_be_config.master_seed = derive_seed(config.master_seed, 1);
            ResultSet transformed = detail::simulate(to_be, to_be_config);
            if (transformed.model_name == baseline.model_name) transformed.model_name += " [" + scenario.name + "]";

            const ComparisonReport cmp = compare(baseline, transformed);
            auto doc = comparison_document(cmp);
            doc["scenario"] = scenario.name;
            doc["iterations"] = config.iterations;
            doc["seed"] = config.master_seed;
            doc["transformed_seed"] = to_be_config.master_seed;
            doc["paired"] = paired;
            detail::write_file(report_path, dump_document(doc));
            if (!baseline_csv.empty()) detail::write_file(baseline_csv, export_results_csv(baseline));
            if (!transformed_csv.empty()) detail::write_file(transformed_csv, export_results_csv(transformed));
            detail::print_comparison(cmp, out);
            return kOk;
        }

        if (report->parsed()) {
            detail::guard_outputs({results_path}, {boxplot_path, summary_path});
            auto parsed = parse_results_csv(detail::read_file(results_path), results_path);
            if (!parsed) {
                detail::report_parse_errors(parsed.error(), err);
                return kParseOrIo;
            }
            const std::string doc = dump_document(boxplot_document(parsed.value()));
            if (boxplot_path.empty()) {
                out << doc;
            } else {
                detail::write_file(boxplot_path, doc);
            }
            if (!summary_path.empty()) detail::write_file(summary_path, dump_document(summary_document(parsed.value())));
            return kOk;
        }
    } catch (const Failure& f) {
        if (!f.code.empty()) err << "error[" << f.code << "]: " << f.message << '\n';
        return f.status;
    } catch (const std::exception& e) {
        err << "error[RUNTIME]: " << e.what() << '\n';
        return kRuntime;
    }

    err << "error[USAGE]: no subcommand given\n";
    return kUsage;
}

}  // namespace schedrisk::cli
