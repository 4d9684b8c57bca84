#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace schedrisk;
using namespace schedrisk::testing;

namespace {

std::vector<double> random_samples(std::mt19937_64& rng) {
    const std::size_t n = 1 + rng() % 60;
    std::vector<double> x(n);
    switch (rng() % 4) {
        case 0: {
            std::uniform_real_distribution<double> U(0, 100);
            for (auto& v : x) v = U(rng);
            break;
        }
        case 1: {
            std::lognormal_distribution<double> L(3, 1);
            for (auto& v : x) v = L(rng);
            break;
        }
        case 2: {
            // Heavy ties.
            for (auto& v : x) v = static_cast<double>(rng() % 4);
            break;
        }
        default: {
            std::normal_distribution<double> N(50, 5);
            for (auto& v : x) v = N(rng);
            if (n > 3) x[rng() % n] = 500;
            break;
        }
    }
    return x;
}

ResultSet result_set_with_totals(const std::vector<double>& totals, const std::string& name) {
    ResultSet rs;
    rs.model_name = name;
    for (double t : totals) {
        IterationOutcome o;
        o.total = t;
        o.category_work[category_index(TaskCategory::ReviewMeetings)] = t / 10.0;
        rs.outcomes.push_back(o);
    }
    rs.config.iterations = rs.outcomes.size();
    return rs;
}

}  // namespace

TEST(Quantile, Examples) {
    const std::vector<double> one = {7};
    EXPECT_EQ(quantile(one, 0.3), 7.0);
    const std::vector<double> x = {40, 10, 30, 20};
    EXPECT_EQ(quantile(x, 0.0), 10.0);
    EXPECT_EQ(quantile(x, 1.0), 40.0);
    EXPECT_EQ(quantile(x, 0.5), 25.0);
    EXPECT_DOUBLE_EQ(quantile(x, 0.25), 17.5);
}

TEST(Quantile, Rejections) {
    const std::vector<double> empty;
    EXPECT_THROW(quantile(empty, 0.5), std::invalid_argument);
    const std::vector<double> x = {1, 2};
    EXPECT_THROW(quantile(x, -0.1), std::invalid_argument);
    EXPECT_THROW(quantile(x, 1.1), std::invalid_argument);
}

TEST(Summarize, HandCheckable) {
    const std::vector<double> x = {1, 2, 3, 4, 5};
    const auto s = summarize(x);
    EXPECT_EQ(s.n, 5u);
    EXPECT_EQ(s.median, 3.0);
    EXPECT_EQ(s.mean, 3.0);
    EXPECT_NEAR(s.sample_std, std::sqrt(2.5), 1e-15);
    EXPECT_NEAR(s.sample_std, 1.5811, 1e-4);
    EXPECT_EQ(s.outliers_low + s.outliers_high, 0u);
    EXPECT_EQ(s.whisker_low, 1.0);
    EXPECT_EQ(s.whisker_high, 5.0);
}

TEST(Summarize, DegenerateSpread) {
    const std::vector<double> x(10, 5.0);
    const auto s = summarize(x);
    EXPECT_EQ(s.sample_std, 0.0);
    EXPECT_EQ(s.q1, 5.0);
    EXPECT_EQ(s.q3, 5.0);
    EXPECT_EQ(s.outliers_low + s.outliers_high, 0u);
}

TEST(Summarize, TukeyHighOutlier) {
    const std::vector<double> x = {1, 2, 3, 4, 100};
    const auto s = summarize(x);
    EXPECT_EQ(s.q1, 2.0);
    EXPECT_EQ(s.q3, 4.0);
    EXPECT_EQ(s.iqr, 2.0);
    EXPECT_EQ(s.outliers_high, 1u);
    EXPECT_EQ(s.outliers_low, 0u);
    EXPECT_EQ(s.whisker_high, 4.0);
    EXPECT_EQ(s.whisker_low, 1.0);
    EXPECT_EQ(s.max, 100.0);
}

TEST(Summarize, TukeyLowOutlierAndFenceBoundary) {
    // q1 = 10, q3 = 12, iqr = 2: fences at 7 and 15; values on a fence are inside.
    const std::vector<double> x = {-50, 7, 10, 10, 11, 12, 12, 15, 15.0001};
    const auto s = summarize(x);
    EXPECT_EQ(s.q1, 10.0);
    EXPECT_EQ(s.q3, 12.0);
    EXPECT_EQ(s.outliers_low, 1u);
    EXPECT_EQ(s.outliers_high, 1u);
    EXPECT_EQ(s.whisker_low, 7.0);
    EXPECT_EQ(s.whisker_high, 15.0);
}

TEST(Summarize, SmallSampleWhiskerClampsToBox) {
    const std::vector<double> x = {0, 100, 100, 100};
    const auto s = summarize(x);
    EXPECT_EQ(s.q1, 75.0);
    EXPECT_EQ(s.outliers_low, 1u);
    EXPECT_EQ(s.whisker_low, 75.0);
}

TEST(Summarize, EmptyRejected) {
    const std::vector<double> empty;
    EXPECT_THROW(summarize(empty), std::invalid_argument);
    EXPECT_THROW(boxplot_descriptor("x", empty), std::invalid_argument);
}

TEST(Boxplot, Examples) {
    const std::vector<double> a = {1, 2, 3, 4, 5};
    auto b = boxplot_descriptor("a", a);
    EXPECT_TRUE(b.outliers.empty());
    EXPECT_EQ(b.whisker_low, 1.0);
    EXPECT_EQ(b.whisker_high, 5.0);

    const std::vector<double> c = {1, 2, 3, 4, 100};
    b = boxplot_descriptor("c", c);
    EXPECT_EQ(b.outliers, std::vector<double>{100});
    EXPECT_EQ(b.label, "c");

    const std::vector<double> d(7, 2.5);
    b = boxplot_descriptor("d", d);
    EXPECT_EQ(b.q1, 2.5);
    EXPECT_EQ(b.median, 2.5);
    EXPECT_EQ(b.q3, 2.5);
}

TEST(PercentReduction, PublishedArithmetic) {
    EXPECT_EQ(percent_reduction(196.1, 97.8), 50.1);
    EXPECT_EQ(percent_reduction(205.2, 104.2), 49.2);
    EXPECT_EQ(percent_reduction(48.2, 28.2), 41.5);
    EXPECT_EQ(percent_reduction(86.6, 9.8), 88.7);
    EXPECT_EQ(percent_reduction(54.0, 25.1), 53.5);
    EXPECT_EQ(percent_reduction(55.2, 25.3), 54.2);
    EXPECT_EQ(percent_reduction(11.0, 7.2), 34.5);
    EXPECT_EQ(percent_reduction(28.7, 24.5), 14.6);
    // Printed as 15.6; 100 * 15.6 / 99.5 = 15.678..., which rounds to 15.7.
    EXPECT_EQ(percent_reduction(99.5, 83.9), 15.7);
    EXPECT_NEAR(percent_reduction_exact(99.5, 83.9), 15.678, 1e-3);
}

TEST(PercentReduction, IdentityAndErrors) {
    EXPECT_EQ(percent_reduction(42.0, 42.0), 0.0);
    EXPECT_THROW(percent_reduction(0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(percent_reduction(-3.0, 1.0), std::invalid_argument);
}

TEST(PercentReduction, InvariantUnderCommonRescaling) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(1, 300);
    std::uniform_real_distribution<double> F(0.1, 10);
    for (int i = 0; i < 1000; ++i) {
        const double b = U(rng);
        const double t = U(rng);
        const double f = F(rng);
        EXPECT_NEAR(percent_reduction_exact(f * b, f * t), percent_reduction_exact(b, t), 1e-9);
    }
}

TEST(RoundDisplay, HalfUp) {
    EXPECT_EQ(round_display(0.25), 0.3);
    EXPECT_EQ(round_display(0.35), 0.4);
    EXPECT_EQ(round_display(1.05), 1.1);
    EXPECT_EQ(round_display(-0.04), -0.0);
    EXPECT_EQ(round_display(15.678), 15.7);
    EXPECT_EQ(round_display(50.127), 50.1);
}

TEST(Compare, DegenerateSingleValueSets) {
    const auto report = compare(result_set_with_totals({196.1}, "as-is"), result_set_with_totals({97.8}, "to-be"));
    const auto& total = report.at(Metric::Total);
    ASSERT_TRUE(total.reduction_pct_median);
    EXPECT_EQ(round_display(*total.reduction_pct_median), 50.1);
    EXPECT_EQ(report.baseline_name, "as-is");
    EXPECT_EQ(report.transformed_name, "to-be");
    EXPECT_EQ(report.metrics.size(), kMetricCount);
    // Zero-work categories have no defined reduction.
    EXPECT_FALSE(report.at(Metric::Disciplinary).reduction_pct_median);
    // A single sample has zero spread, so the std reduction is undefined.
    EXPECT_FALSE(total.reduction_pct_std);
}

TEST(Compare, IdenticalSetsGiveZero) {
    const auto m = load_fixture_model();
    SimulationConfig cfg;
    cfg.iterations = 500;
    const auto rs = run_monte_carlo(m, cfg);
    const auto report = compare(rs, rs);
    for (const auto& mc : report.metrics) {
        ASSERT_TRUE(mc.reduction_pct_median);
        EXPECT_EQ(*mc.reduction_pct_median, 0.0);
        EXPECT_EQ(*mc.reduction_pct_mean, 0.0);
        EXPECT_EQ(*mc.reduction_pct_std, 0.0);
    }
}

TEST(Compare, ReviewMedians) {
    auto report = compare(result_set_with_totals({100, 110, 120}, "a"), result_set_with_totals({70, 72, 90}, "b"));
    const auto& reviews = report.at(Metric::Reviews);
    EXPECT_DOUBLE_EQ(reviews.baseline.median, 11.0);
    EXPECT_DOUBLE_EQ(reviews.transformed.median, 7.2);
    EXPECT_EQ(round_display(*reviews.reduction_pct_median), 34.5);
}

TEST(Compare, EmptyRejected) {
    ResultSet empty;
    EXPECT_THROW(compare(empty, result_set_with_totals({1}, "x")), std::invalid_argument);
}

TEST(SummaryProperties, OrderingChain) {
    std::mt19937_64 rng(100);
    for (int i = 0; i < 1000; ++i) {
        const auto x = random_samples(rng);
        const auto s = summarize(x);
        ASSERT_LE(s.min, s.whisker_low);
        ASSERT_LE(s.whisker_low, s.q1);
        ASSERT_LE(s.q1, s.median);
        ASSERT_LE(s.median, s.q3);
        ASSERT_LE(s.q3, s.whisker_high);
        ASSERT_LE(s.whisker_high, s.max);
        ASSERT_EQ(s.iqr, s.q3 - s.q1);
        ASSERT_GE(s.iqr, 0.0);
    }
}

TEST(SummaryProperties, PermutationInvariance) {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 1000; ++i) {
        auto x = random_samples(rng);
        const auto a = summarize(x);
        std::shuffle(x.begin(), x.end(), rng);
        const auto b = summarize(x);
        ASSERT_EQ(a.median, b.median);
        ASSERT_EQ(a.q1, b.q1);
        ASSERT_EQ(a.q3, b.q3);
        ASSERT_EQ(a.min, b.min);
        ASSERT_EQ(a.max, b.max);
        ASSERT_EQ(a.outliers_low, b.outliers_low);
        ASSERT_EQ(a.outliers_high, b.outliers_high);
        ASSERT_NEAR(a.mean, b.mean, 1e-12 * std::max(1.0, std::fabs(a.mean)));
        ASSERT_NEAR(a.sample_std, b.sample_std, 1e-9 * std::max(1.0, a.sample_std));
    }
}

TEST(SummaryProperties, ScaleEquivariance) {
    std::mt19937_64 rng(102);
    for (int i = 0; i < 1000; ++i) {
        const auto x = random_samples(rng);
        // Powers of two keep every product exact, so outlier counts cannot
        // shift through rounding at a fence.
        const double f = std::ldexp(1.0, static_cast<int>(rng() % 9) - 4);
        std::vector<double> y;
        for (double v : x) y.push_back(f * v);
        const auto a = summarize(x);
        const auto b = summarize(y);
        const auto tol = [&](double v) { return 1e-9 * std::max(1.0, std::fabs(v)); };
        ASSERT_NEAR(b.median, f * a.median, tol(b.median));
        ASSERT_NEAR(b.mean, f * a.mean, tol(b.mean));
        ASSERT_NEAR(b.sample_std, f * a.sample_std, tol(b.sample_std));
        ASSERT_NEAR(b.q1, f * a.q1, tol(b.q1));
        ASSERT_NEAR(b.q3, f * a.q3, tol(b.q3));
        ASSERT_EQ(b.outliers_low, a.outliers_low);
        ASSERT_EQ(b.outliers_high, a.outliers_high);
    }
}

TEST(SummaryProperties, ScaleEquivarianceArbitraryFactor) {
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> F(0.01, 100);
    for (int i = 0; i < 1000; ++i) {
        const auto x = random_samples(rng);
        const double f = F(rng);
        std::vector<double> y;
        for (double v : x) y.push_back(f * v);
        const auto a = summarize(x);
        const auto b = summarize(y);
        ASSERT_NEAR(b.median, f * a.median, 1e-9 * std::max(1.0, std::fabs(b.median)));
        ASSERT_NEAR(b.sample_std, f * a.sample_std, 1e-9 * std::max(1.0, b.sample_std));
    }
}

TEST(SummaryProperties, OutliersLieOutsideFences) {
    std::mt19937_64 rng(104);
    for (int i = 0; i < 1000; ++i) {
        const auto x = random_samples(rng);
        const auto b = boxplot_descriptor("x", x);
        const auto s = summarize(x);
        const double iqr = b.q3 - b.q1;
        ASSERT_TRUE(std::is_sorted(b.outliers.begin(), b.outliers.end()));
        ASSERT_EQ(b.outliers.size(), s.outliers_low + s.outliers_high);
        for (double v : b.outliers) ASSERT_TRUE(v < b.q1 - 1.5 * iqr || v > b.q3 + 1.5 * iqr);
        std::size_t inside = 0;
        for (double v : x) inside += (v >= b.q1 - 1.5 * iqr && v <= b.q3 + 1.5 * iqr);
        ASSERT_EQ(inside + b.outliers.size(), x.size());
    }
}

TEST(SummaryProperties, RightSkewOfFlightOpsShape) {
    SimulationConfig cfg;
    cfg.iterations = 100000;
    cfg.master_seed = 4;
    ProcessModel m;
    m.name = "flight ops";
    m.stakeholders = {"IDT"};
    m.steps.emplace_back(Task{"F", "flight ops", "IDT", TaskCategory::DisciplinaryModeling, triangular(0, 7, 28), ""});
    const auto rs = run_monte_carlo(m, cfg);
    const auto s = summarize(metric_samples(rs, Metric::Total));
    EXPECT_GT(s.mean, s.median);
    EXPECT_NEAR(s.mean, 35.0 / 3.0, 0.1);
    EXPECT_NEAR(s.median, 28.0 - std::sqrt(0.5 * 28 * 21), 0.1);
}
