#pragma once

// Tree ensembles: bagging (bootstrap + majority vote) and AdaBoost over shallow trees.

#include <apcrowd/learn/tree.hpp>
#include <apcrowd/parallel.hpp>
#include <apcrowd/rng.hpp>

#include <cmath>
#include <numeric>
#include <vector>

namespace apcrowd::learn {

class BaggedTrees final : public Classifier {
public:
    explicit BaggedTrees(std::vector<DecisionTree> trees) : trees_(std::move(trees)) {}

    Label predict(std::span<const double> x) const override {
        double pos = 0, neg = 0;
        for (const auto& t : trees_) (t.predict(x) == Label::Positive ? pos : neg) += 1;
        return majority(pos, neg);
    }

    std::string kind() const override { return "bagged_trees"; }

    json state() const override {
        json trees = json::array();
        for (const auto& t : trees_) trees.push_back(t.state());
        return {{"trees", trees}};
    }

    static BaggedTrees from_state(const json& s) {
        std::vector<DecisionTree> trees;
        for (const auto& t : s.at("trees")) trees.push_back(DecisionTree::from_state(t));
        return BaggedTrees(std::move(trees));
    }

    const std::vector<DecisionTree>& trees() const { return trees_; }

private:
    std::vector<DecisionTree> trees_;
};

struct BaggingOptions {
    std::size_t n_learners = 30;
    TreePreset preset = TreePreset::Fine;
    bool bootstrap = true;  // off only in tests: every member then sees the full data
};

inline TrainedModel train_bagged_trees(const LabeledDataset& data, const BaggingOptions& opt, std::uint64_t seed) {
    require_rows(data, "bagged trees");
    const auto n = data.size();
    const TreeOptions tree_opt{max_splits_for(opt.preset)};
    const std::vector<double> w(n, 1.0);
    std::vector<DecisionTree> trees(opt.n_learners);
    parallel_for(opt.n_learners, [&](std::size_t i) {
        std::vector<std::size_t> rows(n);
        if (opt.bootstrap) {
            Rng rng(derive_seed(seed, i));
            for (auto& r : rows) r = uniform_index(rng, n);
        } else {
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }
        trees[i] = grow_tree(data.features, data.labels, w, std::move(rows), tree_opt);
    });
    TrainedModel m;
    m.name = "bagged";
    m.hyperparameters = {{"n_learners", opt.n_learners}, {"preset", preset_name(opt.preset)}, {"bootstrap", opt.bootstrap}};
    m.width = data.width();
    m.impl = std::make_shared<BaggedTrees>(std::move(trees));
    return m;
}

class BoostedTrees final : public Classifier {
public:
    BoostedTrees(std::vector<DecisionTree> trees, std::vector<double> alphas)
        : trees_(std::move(trees)), alphas_(std::move(alphas)) {}

    double score(std::span<const double> x) const {
        double s = 0;
        for (std::size_t i = 0; i < trees_.size(); ++i) s += alphas_[i] * (trees_[i].predict(x) == Label::Positive ? 1.0 : -1.0);
        return s;
    }

    Label predict(std::span<const double> x) const override { return score(x) > 0 ? Label::Positive : Label::Negative; }

    std::string kind() const override { return "boosted_trees"; }

    json state() const override {
        json trees = json::array();
        for (const auto& t : trees_) trees.push_back(t.state());
        return {{"trees", trees}, {"alphas", alphas_}};
    }

    static BoostedTrees from_state(const json& s) {
        std::vector<DecisionTree> trees;
        for (const auto& t : s.at("trees")) trees.push_back(DecisionTree::from_state(t));
        auto alphas = s.at("alphas").get<std::vector<double>>();
        if (alphas.size() != trees.size()) throw DataError("boosted trees state: alpha count mismatch");
        return BoostedTrees(std::move(trees), std::move(alphas));
    }

    std::size_t rounds() const { return trees_.size(); }
    const std::vector<double>& alphas() const { return alphas_; }

private:
    std::vector<DecisionTree> trees_;
    std::vector<double> alphas_;
};

struct BoostingOptions {
    std::size_t n_rounds = 30;
    int max_splits = 4;
};

// Per-round diagnostics: weighted error, learner weight, and the sample-weight sum after
// renormalization.
struct BoostTrace {
    std::vector<double> errors;
    std::vector<double> alphas;
    std::vector<double> weight_sums;
};

// Error floor used for the learner weight when a round classifies every row correctly.
inline constexpr double kBoostMinError = 1e-10;

// AdaBoost (discrete, two-class). Stops early on a perfect round (which is kept) or on
// a round with weighted error >= 0.5 (which is discarded); the latter on round 1 means
// no learner has skill and raises DegenerateModelError.
inline TrainedModel train_boosted_trees(const LabeledDataset& data, const BoostingOptions& opt, std::uint64_t seed,
                                        BoostTrace* trace = nullptr) {
    require_rows(data, "boosted trees");
    if (data.size() < 2 || data.count(Label::Positive) == 0 || data.count(Label::Negative) == 0)
        throw DataError("boosted trees: both classes are required");
    const auto n = data.size();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const TreeOptions tree_opt{opt.max_splits};
    std::vector<DecisionTree> trees;
    std::vector<double> alphas;
    for (std::size_t round = 0; round < opt.n_rounds; ++round) {
        auto tree = grow_tree(data.features, data.labels, w, rows, tree_opt);
        std::vector<bool> wrong(n);
        double err = 0;
        for (std::size_t i = 0; i < n; ++i) {
            wrong[i] = tree.predict(data.features.row(i)) != data.labels[i];
            if (wrong[i]) err += w[i];
        }
        if (err >= 0.5) {
            if (round == 0)
                throw DegenerateModelError("boosted trees: first weak learner has weighted error " + std::to_string(err) +
                                           " >= 0.5");
            break;
        }
        const double eps = std::max(err, kBoostMinError);
        const double alpha = 0.5 * std::log((1.0 - eps) / eps);
        trees.push_back(std::move(tree));
        alphas.push_back(alpha);
        if (trace) {
            trace->errors.push_back(err);
            trace->alphas.push_back(alpha);
        }
        if (err <= 0) {
            if (trace) trace->weight_sums.push_back(std::accumulate(w.begin(), w.end(), 0.0));
            break;
        }
        double sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] *= std::exp(wrong[i] ? alpha : -alpha);
            sum += w[i];
        }
        for (auto& wi : w) wi /= sum;
        if (trace) trace->weight_sums.push_back(std::accumulate(w.begin(), w.end(), 0.0));
    }
    TrainedModel m;
    m.name = "boosted";
    m.hyperparameters = {{"n_rounds", opt.n_rounds}, {"max_splits", opt.max_splits}, {"seed", seed}};
    m.width = data.width();
    m.impl = std::make_shared<BoostedTrees>(std::move(trees), std::move(alphas));
    return m;
}

}  // namespace apcrowd::learn
