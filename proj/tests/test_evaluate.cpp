#include <catch_amalgamated.hpp>

#include <apcrowd/learn/evaluate.hpp>

#include "oracles/oracles.hpp"
#include "support.hpp"

#include <set>
#include <sstream>

using namespace apcrowd;
using namespace apcrowd::learn;
using testing_support::make_dataset;

namespace {

LabeledDataset counted(std::size_t pos, std::size_t neg) {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (std::size_t i = 0; i < pos + neg; ++i) {
        x.push_back({static_cast<double>(i)});
        y.push_back(i < pos ? 1 : 0);
    }
    return make_dataset(x, y);
}

std::multiset<double> row_values(const LabeledDataset& d) {
    std::multiset<double> out;
    for (std::size_t i = 0; i < d.size(); ++i) out.insert(d.features(i, 0));
    return out;
}

std::vector<std::size_t> fold_sizes(const std::vector<std::vector<std::size_t>>& folds) {
    std::vector<std::size_t> out;
    for (const auto& f : folds) out.push_back(f.size());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("balancing 37 positives against 143 negatives", "[learn][balance]") {
    auto d = counted(37, 143);
    auto b = balance_subsample(d, 1);
    CHECK(b.count(Label::Positive) == 37);
    CHECK(b.count(Label::Negative) == 37);
    // Every minority row survives and rows stay paired with their labels.
    for (std::size_t i = 0; i < b.size(); ++i) CHECK((b.features(i, 0) < 37) == (b.labels[i] == Label::Positive));
    const auto rows = row_values(b);
    std::set<double> values(rows.begin(), rows.end());
    CHECK(values.size() == 74);
}

TEST_CASE("balanced input keeps the same rows", "[learn][balance]") {
    auto d = counted(20, 20);
    CHECK(row_values(balance_subsample(d, 3)) == row_values(d));
}

TEST_CASE("balancing is deterministic and needs both classes", "[learn][balance]") {
    auto d = counted(10, 50);
    CHECK(balance_subsample(d, 5).features == balance_subsample(d, 5).features);
    CHECK(balance_subsample(d, 5).features != balance_subsample(d, 6).features);
    CHECK_THROWS_AS(balance_subsample(counted(0, 5), 1), DataError);
}

TEST_CASE("k-fold sizes", "[learn][kfold]") {
    auto ten = kfold_split(10, 10, 1);
    for (const auto& f : ten) CHECK(f.size() == 1);
    auto sizes = fold_sizes(kfold_split(74, 10, 2));
    CHECK(sizes == std::vector<std::size_t>{7, 7, 7, 7, 7, 7, 8, 8, 8, 8});
    CHECK_THROWS_AS(kfold_split(5, 10, 1), DataError);
    CHECK_THROWS_AS(kfold_split(5, 1, 1), ConfigError);
}

TEST_CASE("folds partition the index range", "[learn][kfold][property]") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 2 + uniform_index(rng, 9);
        const std::size_t n = k + uniform_index(rng, 300);
        const auto seed = rng();
        auto folds = kfold_split(n, k, seed);
        CHECK(folds == kfold_split(n, k, seed));
        std::vector<int> seen(n, 0);
        for (const auto& f : folds)
            for (auto i : f) ++seen[i];
        CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
        auto sizes = fold_sizes(folds);
        CHECK(sizes.back() - sizes.front() <= 1);
    }
}

TEST_CASE("separable data scores 1.0", "[learn][cv]") {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (int i = 0; i < 60; ++i) {
        // A wide gap keeps every held-out row clear of any fold's midpoint threshold.
        x.push_back({static_cast<double>(i < 30 ? i : i + 100)});
        y.push_back(i >= 30);
    }
    auto d = make_dataset(x, y);
    auto e = cross_validate(d, "fine_tree", ModelRegistry::with_defaults().get("fine_tree"), 10, 4);
    CHECK(e.accuracy == 1.0);
    CHECK(e.fold_accuracies.size() == 10);
    CHECK(e.confusion.total() == 60);
    CHECK(e.confusion.tp == 30);
}

TEST_CASE("coin-flip labels score near chance", "[learn][cv]") {
    // P(accuracy outside [0.35, 0.65]) for n = 200 is far below 0.01; see the tail bound.
    CHECK(oracle::binomial_two_sided_tail(200, 0.15) < 1e-4);
    Rng rng(6);
    int inside = 0;
    for (int seed = 0; seed < 20; ++seed) {
        auto r = testing_support::random_data(rng, 200, 3, 0);
        auto e = cross_validate(make_dataset(r.x, r.y), "fine_knn", ModelRegistry::with_defaults().get("fine_knn"), 10,
                                static_cast<std::uint64_t>(seed));
        inside += e.accuracy >= 0.35 && e.accuracy <= 0.65;
    }
    CHECK(inside >= 19);
}

TEST_CASE("cross-validation reports are deterministic", "[learn][cv]") {
    Rng rng(7);
    auto r = testing_support::random_data(rng, 80, 3, 0);
    auto d = make_dataset(r.x, r.y);
    auto reg = ModelRegistry::with_defaults();
    auto a = cross_validate(d, "bagged", reg.get("bagged"), 5, 9);
    auto b = cross_validate(d, "bagged", reg.get("bagged"), 5, 9);
    CHECK(a == b);
    std::ostringstream sa, sb;
    write_report_tsv(sa, {a});
    write_report_tsv(sb, {b});
    CHECK(sa.str() == sb.str());
}

TEST_CASE("report TSV layout", "[learn][report]") {
    EvalEntry e{"bagged", "break", 0.9375, {1.0, 0.875}, {8, 8}, {7, 0, 8, 1}};
    std::ostringstream os;
    write_report_tsv(os, {e});
    CHECK(os.str() == std::string(kReportHeader) + "\nbagged\tbreak\t0.937500\t1.000000,0.875000\t7\t0\t8\t1\n");
}

TEST_CASE("the registry knows every preset and rejects unknown names", "[learn][registry]") {
    auto reg = ModelRegistry::with_defaults();
    for (const char* name : {"fine_tree", "medium_tree", "coarse_tree", "logistic", "fine_knn", "medium_knn", "coarse_knn",
                             "cosine_knn", "cubic_knn", "weighted_knn", "boosted", "bagged", "subspace_knn"})
        CHECK(reg.contains(name));
    CHECK(reg.names().size() == 13);
    CHECK_THROWS_AS(reg.get("svm"), ConfigError);
}
