#pragma once

// Machine-readable exports: per-iteration CSV (and its reader), summary,
// comparison and boxplot documents.

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "schedrisk/engine.hpp"
#include "schedrisk/process_io.hpp"
#include "schedrisk/stats.hpp"

namespace schedrisk {

inline constexpr std::string_view kCsvHeader =
    "iteration,total,eliciting_requirements,information_exchange,system_modeling,disciplinary_modeling,"
    "review_meetings";

namespace detail {

inline void append_fixed6(std::string& out, double v) {
    char buf[512];
    const int n = std::snprintf(buf, sizeof buf, "%.6f", v);
    out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace detail

/// One row per iteration, values with exactly 6 decimals, LF endings.
inline std::string export_results_csv(const ResultSet& rs) {
    std::string out;
    out.reserve(64 + rs.outcomes.size() * 96);
    out += kCsvHeader;
    out += '\n';
    for (std::size_t i = 0; i < rs.outcomes.size(); ++i) {
        const auto& o = rs.outcomes[i];
        out += std::to_string(i);
        out += ',';
        detail::append_fixed6(out, o.total);
        for (double w : o.category_work) {
            out += ',';
            detail::append_fixed6(out, w);
        }
        out += '\n';
    }
    return out;
}

/// Reads a CSV produced by export_results_csv. Loop firings and the seed
/// are not part of the CSV and come back empty.
inline ParseResult<ResultSet> parse_results_csv(std::string_view text, std::string_view source = "<input>") {
    auto fail = [&](std::size_t line, std::size_t col, std::string msg) {
        return ParseErrors{ParseError{std::string(source), line, col, ParseErrorCode::Syntax, std::move(msg)}};
    };

    ResultSet rs;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (line_no == 1) {
            if (line != kCsvHeader) return fail(1, 1, "unexpected CSV header");
            continue;
        }
        if (line.empty()) {
            if (start >= text.size()) break;
            return fail(line_no, 1, "empty row");
        }

        double fields[7];
        std::size_t col = 1;
        std::size_t pos = 0;
        for (int f = 0; f < 7; ++f) {
            const std::size_t comma = line.find(',', pos);
            const std::size_t stop = (f == 6) ? line.size() : comma;
            if (f < 6 && comma == std::string_view::npos) return fail(line_no, col, "expected 7 fields");
            if (f == 6 && comma != std::string_view::npos) return fail(line_no, comma + 1, "expected 7 fields");
            const char* first = line.data() + pos;
            const char* last = line.data() + stop;
            auto [ptr, ec] = std::from_chars(first, last, fields[f]);
            if (ec != std::errc() || ptr != last || first == last) return fail(line_no, col, "invalid number");
            pos = stop + 1;
            col = pos + 1;
        }
        const auto expected_index = static_cast<double>(rs.outcomes.size());
        if (fields[0] != expected_index) return fail(line_no, 1, "iteration index out of sequence");
        IterationOutcome o;
        o.total = fields[1];
        for (std::size_t c = 0; c < kCategoryCount; ++c) o.category_work[c] = fields[2 + c];
        rs.outcomes.push_back(std::move(o));
    }
    if (line_no == 0) return fail(1, 1, "empty CSV");
    if (rs.outcomes.empty()) return fail(line_no, 1, "CSV has no rows");
    rs.config.iterations = rs.outcomes.size();
    return rs;
}

// ---------------------------------------------------------------------------
// JSON documents
// ---------------------------------------------------------------------------

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const SummaryStatistics& s) {
    ordered_json j;
    j["n"] = s.n;
    j["median"] = s.median;
    j["mean"] = s.mean;
    j["sample_std"] = s.sample_std;
    j["min"] = s.min;
    j["max"] = s.max;
    j["q1"] = s.q1;
    j["q3"] = s.q3;
    j["iqr"] = s.iqr;
    j["whisker_low"] = s.whisker_low;
    j["whisker_high"] = s.whisker_high;
    j["outliers_low"] = s.outliers_low;
    j["outliers_high"] = s.outliers_high;
    return j;
}

inline ordered_json to_json(const BoxplotDescriptor& b) {
    ordered_json j;
    j["label"] = b.label;
    j["q1"] = b.q1;
    j["median"] = b.median;
    j["q3"] = b.q3;
    j["whisker_low"] = b.whisker_low;
    j["whisker_high"] = b.whisker_high;
    j["outliers"] = b.outliers;
    return j;
}

inline ordered_json optional_number(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

inline ordered_json optional_display(const std::optional<double>& v) {
    return v ? ordered_json(round_display(*v)) : ordered_json(nullptr);
}

/// Summary document: run identity plus SummaryStatistics per metric.
inline ordered_json summary_document(const ResultSet& rs) {
    ordered_json j;
    j["model"] = rs.model_name;
    j["iterations"] = rs.config.iterations;
    j["seed"] = rs.config.master_seed;
    ordered_json metrics = ordered_json::object();
    for (Metric m : kAllMetrics) {
        metrics[std::string(metric_name(m))] = to_json(summarize(metric_samples(rs, m)));
    }
    j["metrics"] = std::move(metrics);
    return j;
}

inline ordered_json comparison_document(const ComparisonReport& report) {
    ordered_json j;
    j["baseline"] = report.baseline_name;
    j["transformed"] = report.transformed_name;
    ordered_json metrics = ordered_json::array();
    for (const auto& mc : report.metrics) {
        ordered_json e;
        e["metric"] = metric_name(mc.metric);
        e["baseline"] = to_json(mc.baseline);
        e["transformed"] = to_json(mc.transformed);
        e["reduction_pct_median"] = optional_number(mc.reduction_pct_median);
        e["reduction_pct_mean"] = optional_number(mc.reduction_pct_mean);
        e["reduction_pct_std"] = optional_number(mc.reduction_pct_std);
        ordered_json display;
        display["reduction_pct_median"] = optional_display(mc.reduction_pct_median);
        display["reduction_pct_mean"] = optional_display(mc.reduction_pct_mean);
        display["reduction_pct_std"] = optional_display(mc.reduction_pct_std);
        e["display"] = std::move(display);
        metrics.push_back(std::move(e));
    }
    j["metrics"] = std::move(metrics);
    return j;
}

inline ordered_json boxplot_document(const ResultSet& rs) {
    ordered_json j = ordered_json::array();
    for (Metric m : kAllMetrics) {
        j.push_back(to_json(boxplot_descriptor(std::string(metric_name(m)), metric_samples(rs, m))));
    }
    return j;
}

/// Pretty-printed with a trailing newline.
inline std::string dump_document(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace schedrisk
