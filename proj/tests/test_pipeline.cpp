#include <catch_amalgamated.hpp>

#include <apcrowd/config.hpp>
#include <apcrowd/pipeline.hpp>

#include <sstream>

using namespace apcrowd;

namespace {

std::string tsv(std::initializer_list<std::string> rows) {
    std::string s = std::string(learn::kReportHeader) + "\n";
    for (const auto& r : rows) s += r + "\n";
    return s;
}

FeatureMatrix small_features(std::uint64_t seed, std::size_t mornings) {
    SimulatorConfig cfg;
    cfg.population.n_scheduled = 120;
    cfg.population.n_unscheduled = 20;
    auto raw = simulate_days(cfg, class_days(cfg.schedule, *parse_date("2017-04-03"), mornings), seed);
    ApRoster roster;
    return featurize(anonymize(raw, seed), roster);
}

}  // namespace

TEST_CASE("two single-task reports merge into two columns", "[pipeline][report]") {
    auto rep = merge_reports({tsv({"bagged\tendofclass\t0.700000\t0.7\t1\t1\t1\t1", "fine_tree\tendofclass\t0.650000\t0.65\t1\t1\t1\t1"}),
                              tsv({"fine_tree\tbreak\t0.800000\t0.8\t1\t1\t1\t1", "bagged\tbreak\t0.900000\t0.9\t1\t1\t1\t1"})});
    CHECK(rep.tasks == std::vector<std::string>{"break", "endofclass"});
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].model == "bagged");
    CHECK(rep.rows[1].model == "fine_tree");
    auto text = rep.render();
    CHECK(text.find("90.0 *") != std::string::npos);
    CHECK(text.find("70.0 *") != std::string::npos);
    CHECK(text.find("80.0 *") == std::string::npos);
}

TEST_CASE("merged rows are sorted by the first column", "[pipeline][report]") {
    auto rep = merge_reports({tsv({"a\tbreak\t0.5\t0.5\t0\t0\t0\t0", "b\tbreak\t0.9\t0.9\t0\t0\t0\t0",
                                   "c\tbreak\t0.7\t0.7\t0\t0\t0\t0", "d\tendofclass\t0.99\t0.99\t0\t0\t0\t0"})});
    REQUIRE(rep.rows.size() == 4);
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        auto prev = rep.rows[i - 1].accuracy.contains("break") ? rep.rows[i - 1].accuracy.at("break") : -1.0;
        auto cur = rep.rows[i].accuracy.contains("break") ? rep.rows[i].accuracy.at("break") : -1.0;
        CHECK(prev >= cur);
    }
    CHECK(rep.rows.back().model == "d");
}

TEST_CASE("conflicting duplicates name the model", "[pipeline][report]") {
    try {
        merge_reports({tsv({"bagged\tbreak\t0.9\t0.9\t0\t0\t0\t0"}), tsv({"bagged\tbreak\t0.8\t0.8\t0\t0\t0\t0"})});
        FAIL("conflict accepted");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("bagged") != std::string::npos);
    }
    // Identical duplicates are fine.
    CHECK_NOTHROW(merge_reports({tsv({"bagged\tbreak\t0.9\t0.9\t0\t0\t0\t0"}), tsv({"bagged\tbreak\t0.9\t0.9\t0\t0\t0\t0"})}));
}

TEST_CASE("malformed reports are rejected", "[pipeline][report]") {
    CHECK_THROWS_AS(merge_reports({"model\tacc\n"}), ParseError);
    CHECK_THROWS_AS(merge_reports({tsv({"bagged\tbreak\t0.9"})}), ParseError);
}

TEST_CASE("no in-scope minutes is a data error", "[pipeline]") {
    FeatureMatrix fm;
    fm.values = Matrix(0, 5);
    std::vector<double> row(5, 1.0);
    fm.values.append_row(row);
    fm.minute_starts.push_back(*parse_timestamp("2017-04-05 09:00:00"));  // a Wednesday
    PipelineOptions opt;
    CHECK_THROWS_AS(evaluate_task(fm, opt), DataError);
}

TEST_CASE("single-class labels name the task and dates", "[pipeline]") {
    FeatureMatrix fm;
    fm.values = Matrix(0, 5);
    std::vector<double> row(5, 1.0);
    for (int m = 0; m < 10; ++m) {
        fm.values.append_row(row);
        fm.minute_starts.push_back(*parse_timestamp("2017-04-03 08:40:00") + std::chrono::minutes{m});
    }
    PipelineOptions opt;
    opt.spec.task = Task::EndOfClass;
    try {
        evaluate_task(fm, opt);
        FAIL("single-class data accepted");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("endofclass") != std::string::npos);
        CHECK(msg.find("2017-04-03") != std::string::npos);
    }
}

TEST_CASE("evaluate_task produces one entry per model in range", "[pipeline]") {
    auto fm = small_features(1, 2);
    PipelineOptions opt;
    opt.models = {"fine_tree", "medium_knn"};
    opt.folds = 5;
    auto res = evaluate_task(fm, opt);
    REQUIRE(res.entries.size() == 2);
    CHECK(res.labeled.count(Label::Positive) == 2 * 37);
    CHECK(res.balanced.size() == 4 * 37);
    for (const auto& e : res.entries) {
        CHECK(e.task == "break");
        CHECK(e.accuracy >= 0.0);
        CHECK(e.accuracy <= 1.0);
    }
    auto again = evaluate_task(fm, opt);
    CHECK(again.entries == res.entries);

    opt.pca_components = 5;
    auto pca = evaluate_task(fm, opt);
    CHECK(pca.labeled.width() == 5);
    CHECK(pca.entries.size() == 2);

    opt.models = {"no_such_model"};
    CHECK_THROWS_AS(evaluate_task(fm, opt), ConfigError);
}

TEST_CASE("a degenerate booster becomes a diagnostic", "[pipeline]") {
    auto fm = small_features(2, 1);
    learn::ModelRegistry reg;
    reg.add("always_degenerate", [](const LabeledDataset&, std::uint64_t) -> learn::TrainedModel {
        throw DegenerateModelError("no skill");
    });
    reg.add("fine_tree", learn::ModelRegistry::with_defaults().get("fine_tree"));
    PipelineOptions opt;
    opt.models = {"always_degenerate", "fine_tree"};
    opt.folds = 3;
    auto res = evaluate_task(fm, opt, reg);
    CHECK(res.entries.size() == 1);
    REQUIRE(res.diagnostics.size() == 1);
    CHECK(res.diagnostics[0].find("always_degenerate") != std::string::npos);
}

TEST_CASE("top_entry picks the best accuracy", "[pipeline]") {
    std::vector<learn::EvalEntry> e(3);
    e[0].model = "a";
    e[0].accuracy = 0.5;
    e[1].model = "b";
    e[1].accuracy = 0.8;
    e[2].model = "c";
    e[2].accuracy = 0.8;
    CHECK(top_entry(e)->model == "b");
    CHECK(top_entry({}) == nullptr);
}
