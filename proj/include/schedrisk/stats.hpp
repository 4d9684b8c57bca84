#pragma once

// Descriptive statistics for Monte Carlo output: interpolated quantiles,
// Tukey-fence summaries, boxplot descriptors and as-is vs transformed
// reduction arithmetic.
//
// Conventions:
//   quantile      linear interpolation of order statistics, h = (n−1)q
//   sample_std    n−1 denominator (0 for a single sample)
//   fences        q1 − 1.5·iqr and q3 + 1.5·iqr; outliers lie strictly outside
//   whiskers      most extreme samples inside the fences, never inside the box
//                 (clamped to q1/q3 when no sample lies between fence and quartile)

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "schedrisk/engine.hpp"
#include "schedrisk/model.hpp"

namespace schedrisk {

inline constexpr double kTukeyFactor = 1.5;

namespace detail {

inline double quantile_sorted(std::span<const double> x, double q) {
    const double h = static_cast<double>(x.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= x.size()) return x.back();
    return x[lo] + (h - static_cast<double>(lo)) * (x[lo + 1] - x[lo]);
}

inline std::vector<double> sorted_copy(std::span<const double> samples, std::string_view what) {
    if (samples.empty()) throw std::invalid_argument(std::string(what) + ": samples must be nonempty");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    return x;
}

}  // namespace detail

inline double quantile(std::span<const double> samples, double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q must lie in [0, 1]");
    const auto x = detail::sorted_copy(samples, "quantile");
    return detail::quantile_sorted(x, q);
}

struct SummaryStatistics {
    std::size_t n = 0;
    double median = 0.0;
    double mean = 0.0;
    double sample_std = 0.0;
    double min = 0.0;
    double max = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::size_t outliers_low = 0;
    std::size_t outliers_high = 0;
};

struct BoxplotDescriptor {
    std::string label;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> outliers;  // ascending
};

namespace detail {

struct Box {
    SummaryStatistics stats;
    std::vector<double> outliers;
};

inline Box box(std::span<const double> samples, std::string_view what) {
    const auto x = sorted_copy(samples, what);
    Box b;
    SummaryStatistics& s = b.stats;
    s.n = x.size();
    s.min = x.front();
    s.max = x.back();
    s.q1 = quantile_sorted(x, 0.25);
    s.median = quantile_sorted(x, 0.5);
    s.q3 = quantile_sorted(x, 0.75);
    s.iqr = s.q3 - s.q1;

    // Two-pass mean and variance; the second pass keeps cancellation small.
    double sum = 0.0;
    for (double v : x) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : x) ss += (v - s.mean) * (v - s.mean);
        s.sample_std = std::sqrt(ss / static_cast<double>(s.n - 1));
    }

    const double lo_fence = s.q1 - kTukeyFactor * s.iqr;
    const double hi_fence = s.q3 + kTukeyFactor * s.iqr;
    s.whisker_low = s.q1;
    s.whisker_high = s.q3;
    for (double v : x) {
        if (v < lo_fence) {
            ++s.outliers_low;
            b.outliers.push_back(v);
        } else if (v > hi_fence) {
            ++s.outliers_high;
            b.outliers.push_back(v);
        } else {
            if (v < s.whisker_low) s.whisker_low = v;
            if (v > s.whisker_high) s.whisker_high = v;
        }
    }
    return b;
}

}  // namespace detail

inline SummaryStatistics summarize(std::span<const double> samples) { return detail::box(samples, "summarize").stats; }

inline BoxplotDescriptor boxplot_descriptor(std::string label, std::span<const double> samples) {
    auto b = detail::box(samples, "boxplot_descriptor");
    return BoxplotDescriptor{std::move(label), b.stats.q1, b.stats.median, b.stats.q3, b.stats.whisker_low,
                             b.stats.whisker_high, std::move(b.outliers)};
}

/// Round half-up to one decimal, for display. Values are nudged by a
/// relative 1e-12 first so that decimal ties stored just below the tie
/// (e.g. 0.25 − ulp) still round up.
inline double round_display(double v) {
    const double scaled = v * 10.0;
    return std::floor(scaled + 0.5 + 1e-12 * std::max(1.0, std::fabs(scaled))) / 10.0;
}

/// 100·(baseline − transformed)/baseline at full precision.
inline double percent_reduction_exact(double baseline, double transformed) {
    if (!(baseline > 0.0)) throw std::invalid_argument("percent_reduction: baseline must be positive");
    return 100.0 * (baseline - transformed) / baseline;
}

/// Percent reduction rounded half-up to one decimal.
inline double percent_reduction(double baseline, double transformed) {
    return round_display(percent_reduction_exact(baseline, transformed));
}

// ---------------------------------------------------------------------------
// Metrics over a ResultSet
// ---------------------------------------------------------------------------

/// The six reported metrics: the makespan followed by the five categories.
enum class Metric : std::uint8_t { Total, Eliciting, Exchange, SystemLevel, Disciplinary, Reviews };

inline constexpr std::size_t kMetricCount = 6;

inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {Metric::Total,       Metric::Eliciting,
                                                                 Metric::Exchange,    Metric::SystemLevel,
                                                                 Metric::Disciplinary, Metric::Reviews};

inline constexpr std::optional<TaskCategory> metric_category(Metric m) {
    if (m == Metric::Total) return std::nullopt;
    return static_cast<TaskCategory>(static_cast<std::uint8_t>(m) - 1);
}

inline constexpr std::string_view metric_name(Metric m) {
    if (auto c = metric_category(m)) return category_name(*c);
    return "total";
}

inline std::vector<double> metric_samples(const ResultSet& rs, Metric m) {
    std::vector<double> out;
    out.reserve(rs.outcomes.size());
    const auto cat = metric_category(m);
    for (const auto& o : rs.outcomes) out.push_back(cat ? o.work(*cat) : o.total);
    return out;
}

struct MetricComparison {
    Metric metric = Metric::Total;
    SummaryStatistics baseline;
    SummaryStatistics transformed;
    // Full precision; empty when the baseline statistic is zero.
    std::optional<double> reduction_pct_median;
    std::optional<double> reduction_pct_mean;
    std::optional<double> reduction_pct_std;
};

struct ComparisonReport {
    std::string baseline_name;
    std::string transformed_name;
    std::vector<MetricComparison> metrics;  // kAllMetrics order

    [[nodiscard]] const MetricComparison& at(Metric m) const { return metrics.at(static_cast<std::size_t>(m)); }
};

inline std::optional<double> reduction_if_defined(double baseline, double transformed) {
    if (!(baseline > 0.0)) return std::nullopt;
    return percent_reduction_exact(baseline, transformed);
}

inline MetricComparison compare_samples(Metric m, std::span<const double> baseline, std::span<const double> transformed) {
    MetricComparison mc;
    mc.metric = m;
    mc.baseline = summarize(baseline);
    mc.transformed = summarize(transformed);
    mc.reduction_pct_median = reduction_if_defined(mc.baseline.median, mc.transformed.median);
    mc.reduction_pct_mean = reduction_if_defined(mc.baseline.mean, mc.transformed.mean);
    mc.reduction_pct_std = reduction_if_defined(mc.baseline.sample_std, mc.transformed.sample_std);
    return mc;
}

/// Summarizes every metric on both sides and computes the reductions of
/// medians, means and standard deviations. Both sides carry all five
/// categories by construction, so the category sets always match.
inline ComparisonReport compare(const ResultSet& baseline, const ResultSet& transformed) {
    if (baseline.outcomes.empty() || transformed.outcomes.empty()) {
        throw std::invalid_argument("compare: both result sets must be nonempty");
    }
    ComparisonReport report;
    report.baseline_name = baseline.model_name;
    report.transformed_name = transformed.model_name;
    for (Metric m : kAllMetrics) {
        const auto b = metric_samples(baseline, m);
        const auto t = metric_samples(transformed, m);
        report.metrics.push_back(compare_samples(m, b, t));
    }
    return report;
}

}  // namespace schedrisk
