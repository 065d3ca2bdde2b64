#include <catch_amalgamated.hpp>

#include <apcrowd/learn/evaluate.hpp>
#include <apcrowd/learn/model_io.hpp>

#include "support.hpp"

using namespace apcrowd;
using namespace apcrowd::learn;

TEST_CASE("every registered model reloads with identical predictions", "[learn][io]") {
    Rng rng(21);
    auto r = testing_support::random_data(rng, 120, 4, 0);
    for (std::size_t i = 0; i < r.x.size(); ++i) r.y[i] = r.x[i][0] + 0.3 * r.x[i][1] > 0;
    auto d = testing_support::make_dataset(r.x, r.y);
    auto reg = ModelRegistry::with_defaults();
    for (const auto& name : reg.names()) {
        INFO(name);
        auto m = reg.get(name)(d, 3);
        auto text = model_to_json(m).dump();
        auto back = model_from_json(json::parse(text));
        CHECK(back.name == m.name);
        CHECK(back.kind() == m.kind());
        CHECK(back.width == m.width);
        CHECK(back.impl->state() == m.impl->state());
        CHECK(model_to_json(back).dump() == text);
        for (int q = 0; q < 100; ++q) {
            std::vector<double> x(4);
            for (auto& v : x) v = uniform_real(rng, -2.5, 2.5);
            CHECK(back.predict(x) == m.predict(x));
        }
    }
}

TEST_CASE("a file without the format tag is rejected", "[learn][io]") {
    CHECK_THROWS_AS(model_from_json(json{{"format", "other"}}), DataError);
    json j{{"format", kModelFormat}, {"name", "x"}, {"width", 1}, {"hyperparameters", json::object()}, {"kind", "svm"},
           {"state", json::object()}};
    CHECK_THROWS_AS(model_from_json(j), DataError);
}

TEST_CASE("any model on its own training row returns that label (Fine kNN)", "[learn][io]") {
    auto d = testing_support::make_dataset({{1, 2}, {3, 4}, {5, 6}}, {1, 0, 1});
    auto m = train_knn(d, KnnPreset::Fine);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(m.predict(d.features.row(i)) == d.labels[i]);
}

TEST_CASE("thirty identical trees vote like one", "[learn][io]") {
    auto d = testing_support::make_dataset({{0}, {1}, {2}, {3}}, {0, 1, 0, 1});
    auto tree = grow_tree(d, {});
    BaggedTrees bag(std::vector<DecisionTree>(30, tree));
    for (double v = -1; v < 5; v += 0.25) CHECK(bag.predict(std::vector<double>{v}) == tree.predict(std::vector<double>{v}));
}
