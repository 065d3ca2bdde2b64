#pragma once

// Self-describing model files:
//   {"format": "apcrowd-model/1", "name": ..., "kind": ..., "width": ...,
//    "hyperparameters": {...}, "state": {...}}
// Doubles are written in shortest round-trip form, so reloading is bit-exact.

#include <apcrowd/learn/ensemble.hpp>
#include <apcrowd/learn/knn.hpp>
#include <apcrowd/learn/logistic.hpp>
#include <apcrowd/learn/tree.hpp>

#include <functional>
#include <map>
#include <string>

namespace apcrowd::learn {

inline constexpr const char* kModelFormat = "apcrowd-model/1";

using ModelLoader = std::function<std::shared_ptr<const Classifier>(const json& state)>;

class LoaderRegistry {
public:
    static LoaderRegistry& instance() {
        static LoaderRegistry reg;
        return reg;
    }

    void add(const std::string& kind, ModelLoader loader) { loaders_[kind] = std::move(loader); }

    std::shared_ptr<const Classifier> load(const std::string& kind, const json& state) const {
        auto it = loaders_.find(kind);
        if (it == loaders_.end()) throw DataError("unknown model kind '" + kind + "'");
        return it->second(state);
    }

private:
    LoaderRegistry() {
        add("decision_tree", [](const json& s) { return std::make_shared<DecisionTree>(DecisionTree::from_state(s)); });
        add("bagged_trees", [](const json& s) { return std::make_shared<BaggedTrees>(BaggedTrees::from_state(s)); });
        add("boosted_trees", [](const json& s) { return std::make_shared<BoostedTrees>(BoostedTrees::from_state(s)); });
        add("knn", [](const json& s) { return std::make_shared<Knn>(Knn::from_state(s)); });
        add("subspace_knn", [](const json& s) { return std::make_shared<SubspaceKnn>(SubspaceKnn::from_state(s)); });
        add("logistic_regression",
            [](const json& s) { return std::make_shared<LogisticRegression>(LogisticRegression::from_state(s)); });
    }

    std::map<std::string, ModelLoader> loaders_;
};

inline json model_to_json(const TrainedModel& m) {
    return {{"format", kModelFormat},
            {"name", m.name},
            {"kind", m.kind()},
            {"width", m.width},
            {"hyperparameters", m.hyperparameters},
            {"state", m.impl->state()}};
}

inline TrainedModel model_from_json(const json& j) {
    if (j.value("format", "") != kModelFormat) throw DataError("not an apcrowd model file");
    TrainedModel m;
    m.name = j.at("name").get<std::string>();
    m.width = j.at("width").get<std::size_t>();
    m.hyperparameters = j.at("hyperparameters");
    m.impl = LoaderRegistry::instance().load(j.at("kind").get<std::string>(), j.at("state"));
    return m;
}

}  // namespace apcrowd::learn
