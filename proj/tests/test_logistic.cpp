#include <catch_amalgamated.hpp>

#include <apcrowd/learn/logistic.hpp>

#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace apcrowd;
using namespace apcrowd::learn;
using testing_support::make_dataset;

TEST_CASE("1-D separable data is fitted with the right weight sign", "[learn][logistic]") {
    auto up = make_dataset({{-3}, {-2}, {-1}, {1}, {2}, {3}}, {0, 0, 0, 1, 1, 1});
    auto m = train_logistic_regression(up);
    CHECK(testing_support::training_accuracy(m, up) == 1.0);
    CHECK(dynamic_cast<const LogisticRegression&>(*m.impl).weights().at(0) > 0);

    auto down = make_dataset({{-3}, {-2}, {-1}, {1}, {2}, {3}}, {1, 1, 1, 0, 0, 0});
    auto m2 = train_logistic_regression(down);
    CHECK(testing_support::training_accuracy(m2, down) == 1.0);
    CHECK(dynamic_cast<const LogisticRegression&>(*m2.impl).weights().at(0) < 0);
}

TEST_CASE("the analytic gradient matches central differences", "[learn][logistic][oracle]") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 5 + uniform_index(rng, 20), d = 1 + uniform_index(rng, 5);
        auto r = testing_support::random_data(rng, n, d, 0);
        auto data = make_dataset(r.x, r.y);
        LogisticObjective obj{data.features, data.labels, 0.01};
        std::vector<double> params(d + 1);
        for (auto& p : params) p = uniform_real(rng, -1, 1);
        auto f = [&](const std::vector<double>& p) {
            return obj.loss(std::span<const double>(p.data(), d), p[d]);
        };
        std::vector<double> gw;
        const double gb = obj.gradient(std::span<const double>(params.data(), d), params[d], gw);
        gw.push_back(gb);
        auto numeric = oracle::central_gradient(f, params, 1e-5);
        CHECK(oracle::max_relative_error(gw, numeric) < 1e-4);
    }
}

TEST_CASE("constant features leave the majority class", "[learn][logistic]") {
    auto d = make_dataset({{4, 1}, {4, 1}, {4, 1}, {4, 1}, {4, 1}}, {1, 1, 1, 0, 0});
    auto m = train_logistic_regression(d);
    CHECK(m.predict(std::vector<double>{4, 1}) == Label::Positive);
    CHECK(m.predict(std::vector<double>{-7, 9}) == Label::Positive);
    CHECK(m.hyperparameters.at("dropped_columns").size() == 2);
    auto d2 = make_dataset({{4}, {4}, {4}}, {0, 0, 1});
    CHECK(train_logistic_regression(d2).predict(std::vector<double>{4}) == Label::Negative);
}

TEST_CASE("training never increases the loss", "[learn][logistic]") {
    Rng rng(14);
    auto r = testing_support::random_data(rng, 80, 4, 0);
    std::vector<double> history;
    train_logistic_regression(make_dataset(r.x, r.y), {1e-4, 5.0, 200}, &history);
    REQUIRE(history.size() > 1);
    for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1]);
}

TEST_CASE("zero weights and zero bias predict Negative", "[learn][logistic]") {
    LogisticRegression lr({0}, {0.0}, {1.0}, {0.0}, 0.0);
    CHECK(lr.predict(std::vector<double>{3.0}) == Label::Negative);
    CHECK(lr.probability(std::vector<double>{3.0}) == 0.5);
}

TEST_CASE("softplus and sigmoid stay finite at extreme margins", "[learn][logistic]") {
    CHECK(std::isfinite(softplus(800)));
    CHECK(softplus(-800) >= 0);
    CHECK(sigmoid(800) == 1.0);
    CHECK(sigmoid(-800) >= 0.0);
}
