#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"

using namespace schedrisk;
using namespace schedrisk::testing;

namespace {

ProcessModel deterministic_model() {
    ProcessModel m;
    m.name = "det";
    m.stakeholders = {"IDT"};
    m.steps.emplace_back(Task{"A", "a", "IDT", TaskCategory::ElicitingRequirements, deterministic(1.5), ""});
    m.steps.emplace_back(Task{"B", "b", "IDT", TaskCategory::ReviewMeetings, deterministic(2), ""});
    return m;
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += (c == '\n');
    return n;
}

}  // namespace

TEST(ExportCsv, TwoIterationsGiveThreeLines) {
    SimulationConfig cfg;
    cfg.iterations = 2;
    const auto csv = export_results_csv(run_monte_carlo(deterministic_model(), cfg));
    EXPECT_EQ(count_lines(csv), 3u);
    EXPECT_EQ(csv,
              "iteration,total,eliciting_requirements,information_exchange,system_modeling,disciplinary_modeling,"
              "review_meetings\n"
              "0,3.500000,1.500000,0.000000,0.000000,0.000000,2.000000\n"
              "1,3.500000,1.500000,0.000000,0.000000,0.000000,2.000000\n");
}

TEST(ExportCsv, ByteDeterministic) {
    const auto m = load_fixture_model();
    SimulationConfig cfg;
    cfg.iterations = 300;
    cfg.master_seed = 7;
    const auto rs = run_monte_carlo(m, cfg);
    EXPECT_EQ(export_results_csv(rs), export_results_csv(rs));
    EXPECT_EQ(export_results_csv(rs), export_results_csv(run_monte_carlo(m, cfg)));
}

TEST(ExportCsv, GoldenFile) {
    const auto m = load_fixture_model();
    SimulationConfig cfg;
    cfg.iterations = 100;
    cfg.master_seed = 42;
    const auto golden = read_text(source_path("tests/golden/asis_seed42_n100.csv"));
    EXPECT_EQ(export_results_csv(run_monte_carlo(m, cfg)), golden);
    cfg.workers = 4;
    EXPECT_EQ(export_results_csv(run_monte_carlo(m, cfg)), golden);
}

TEST(ParseCsv, ReadsBackExport) {
    const auto m = load_fixture_model();
    SimulationConfig cfg;
    cfg.iterations = 50;
    const auto rs = run_monte_carlo(m, cfg);
    const auto csv = export_results_csv(rs);
    auto back = parse_results_csv(csv, "r.csv");
    ASSERT_TRUE(back) << back.error().front().to_string();
    ASSERT_EQ(back->outcomes.size(), 50u);
    for (std::size_t i = 0; i < 50; ++i) {
        EXPECT_NEAR(back->outcomes[i].total, rs.outcomes[i].total, 5e-7);
        for (std::size_t c = 0; c < kCategoryCount; ++c) {
            EXPECT_NEAR(back->outcomes[i].category_work[c], rs.outcomes[i].category_work[c], 5e-7);
        }
    }
    EXPECT_EQ(export_results_csv(*back), csv);
}

TEST(ParseCsv, RejectsMalformedInput) {
    const std::string header(kCsvHeader);
    EXPECT_FALSE(parse_results_csv(""));
    EXPECT_FALSE(parse_results_csv("a,b,c\n"));
    EXPECT_FALSE(parse_results_csv(header + "\n"));
    EXPECT_FALSE(parse_results_csv(header + "\n0,1,2,3\n"));
    EXPECT_FALSE(parse_results_csv(header + "\n0,1,2,3,4,5,x\n"));
    EXPECT_FALSE(parse_results_csv(header + "\n0,1,2,3,4,5,6,7\n"));
    auto skipped = parse_results_csv(header + "\n0,1,1,0,0,0,0\n2,1,1,0,0,0,0\n", "r.csv");
    ASSERT_FALSE(skipped);
    EXPECT_EQ(skipped.error().front().line, 3u);
}

TEST(Documents, SummaryKeysMirrorFields) {
    SimulationConfig cfg;
    cfg.iterations = 20;
    cfg.master_seed = 9;
    const auto doc = summary_document(run_monte_carlo(load_fixture_model(), cfg));
    EXPECT_EQ(doc["iterations"], 20);
    EXPECT_EQ(doc["seed"], 9);
    ASSERT_EQ(doc["metrics"].size(), kMetricCount);
    const auto& total = doc["metrics"]["total"];
    for (const char* key : {"n", "median", "mean", "sample_std", "min", "max", "q1", "q3", "iqr", "whisker_low",
                            "whisker_high", "outliers_low", "outliers_high"}) {
        EXPECT_TRUE(total.contains(key)) << key;
    }
    EXPECT_TRUE(doc["metrics"].contains("review_meetings"));
}

TEST(Documents, ComparisonCarriesDisplayRounding) {
    ResultSet a;
    ResultSet b;
    a.model_name = "as-is";
    b.model_name = "to-be";
    IterationOutcome oa;
    oa.total = 196.1;
    IterationOutcome ob;
    ob.total = 97.8;
    a.outcomes = {oa};
    b.outcomes = {ob};
    const auto doc = comparison_document(compare(a, b));
    EXPECT_EQ(doc["baseline"], "as-is");
    ASSERT_EQ(doc["metrics"].size(), kMetricCount);
    const auto& total = doc["metrics"][0];
    EXPECT_EQ(total["metric"], "total");
    EXPECT_EQ(total["display"]["reduction_pct_median"].get<double>(), 50.1);
    EXPECT_NEAR(total["reduction_pct_median"].get<double>(), 50.127, 1e-3);
    EXPECT_TRUE(doc["metrics"][1]["reduction_pct_median"].is_null());
}

TEST(Documents, BoxplotPerMetric) {
    SimulationConfig cfg;
    cfg.iterations = 200;
    const auto rs = run_monte_carlo(load_fixture_model(), cfg);
    const auto doc = boxplot_document(rs);
    ASSERT_EQ(doc.size(), kMetricCount);
    EXPECT_EQ(doc[0]["label"], "total");
    const auto b = boxplot_descriptor("total", metric_samples(rs, Metric::Total));
    EXPECT_EQ(doc[0]["median"].get<double>(), b.median);
    EXPECT_EQ(doc[0]["outliers"].size(), b.outliers.size());
    const auto text = dump_document(doc);
    EXPECT_EQ(text.back(), '\n');
    EXPECT_EQ(text, dump_document(boxplot_document(rs)));
}
