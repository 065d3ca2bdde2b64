#pragma once

// Class balancing, k-fold splitting, the trainer registry, and cross-validated evaluation.

#include <apcrowd/learn/ensemble.hpp>
#include <apcrowd/learn/knn.hpp>
#include <apcrowd/learn/logistic.hpp>
#include <apcrowd/learn/tree.hpp>
#include <apcrowd/parallel.hpp>
#include <apcrowd/rng.hpp>

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace apcrowd::learn {

// Keeps every minority row and a seeded uniform sample (without replacement) of the
// majority class of the same size; output order is a seeded shuffle.
inline LabeledDataset balance_subsample(const LabeledDataset& data, std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < data.size(); ++i) (data.labels[i] == Label::Positive ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty())
        throw DataError(std::string("cannot balance: no ") + (pos.empty() ? "positive" : "negative") + " rows");
    Rng rng(seed);
    auto& major = pos.size() > neg.size() ? pos : neg;
    const auto& minor = pos.size() > neg.size() ? neg : pos;
    std::shuffle(major.begin(), major.end(), rng);
    major.resize(minor.size());
    std::vector<std::size_t> keep(pos);
    keep.insert(keep.end(), neg.begin(), neg.end());
    std::sort(keep.begin(), keep.end());
    std::shuffle(keep.begin(), keep.end(), rng);
    return data.subset(keep);
}

// k disjoint index sets covering [0, n); sizes differ by at most one, larger folds first.
inline std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("k-fold needs at least 2 folds");
    if (n < k) throw DataError("cannot split " + std::to_string(n) + " rows into " + std::to_string(k) + " folds");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t i = 0; i < n; ++i) folds[i % k].push_back(perm[i]);
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

using Trainer = std::function<TrainedModel(const LabeledDataset&, std::uint64_t seed)>;

// Named trainers with their default presets. Additional trainers can be registered.
class ModelRegistry {
public:
    static ModelRegistry with_defaults() {
        ModelRegistry r;
        for (auto p : {TreePreset::Fine, TreePreset::Medium, TreePreset::Coarse})
            r.add(preset_name(p) + "_tree", [p](const LabeledDataset& d, std::uint64_t s) { return train_decision_tree(d, p, s); });
        r.add("logistic", [](const LabeledDataset& d, std::uint64_t) { return train_logistic_regression(d); });
        for (auto p : {KnnPreset::Fine, KnnPreset::Medium, KnnPreset::Coarse, KnnPreset::Cosine, KnnPreset::Cubic,
                       KnnPreset::Weighted})
            r.add(knn_preset_name(p) + "_knn", [p](const LabeledDataset& d, std::uint64_t) { return train_knn(d, p); });
        r.add("boosted", [](const LabeledDataset& d, std::uint64_t s) { return train_boosted_trees(d, {}, s); });
        r.add("bagged", [](const LabeledDataset& d, std::uint64_t s) { return train_bagged_trees(d, {}, s); });
        r.add("subspace_knn", [](const LabeledDataset& d, std::uint64_t s) { return train_subspace_knn(d, {}, s); });
        return r;
    }

    void add(const std::string& name, Trainer t) {
        if (!trainers_.contains(name)) order_.push_back(name);
        trainers_[name] = std::move(t);
    }

    const Trainer& get(const std::string& name) const {
        auto it = trainers_.find(name);
        if (it == trainers_.end()) throw ConfigError("unknown model '" + name + "'");
        return it->second;
    }

    bool contains(const std::string& name) const { return trainers_.contains(name); }
    const std::vector<std::string>& names() const { return order_; }

private:
    std::map<std::string, Trainer> trainers_;
    std::vector<std::string> order_;
};

struct Confusion {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }

    void add(Label truth, Label predicted) {
        if (truth == Label::Positive) (predicted == Label::Positive ? tp : fn)++;
        else (predicted == Label::Positive ? fp : tn)++;
    }

    bool operator==(const Confusion&) const = default;
};

struct EvalEntry {
    std::string model;
    std::string task;
    double accuracy = 0;
    std::vector<double> fold_accuracies;
    std::vector<std::size_t> fold_sizes;
    Confusion confusion;

    bool operator==(const EvalEntry&) const = default;
};

// Trains on k - 1 folds and scores the held-out fold, for every fold. Fold f trains with
// seed derive_seed(seed, f + 1); the split itself uses derive_seed(seed, 0).
inline EvalEntry cross_validate(const LabeledDataset& data, const std::string& model_name, const Trainer& trainer,
                                std::size_t k, std::uint64_t seed) {
    auto folds = kfold_split(data.size(), k, derive_seed(seed, 0));
    std::vector<Confusion> per_fold(k);
    parallel_for(k, [&](std::size_t f) {
        std::vector<std::size_t> train;
        for (std::size_t g = 0; g < k; ++g)
            if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
        std::sort(train.begin(), train.end());
        auto model = trainer(data.subset(train), derive_seed(seed, f + 1));
        for (auto i : folds[f]) per_fold[f].add(data.labels[i], model.predict(data.features.row(i)));
    });
    EvalEntry e;
    e.model = model_name;
    for (std::size_t f = 0; f < k; ++f) {
        const auto& c = per_fold[f];
        e.fold_sizes.push_back(c.total());
        e.fold_accuracies.push_back(static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total()));
        e.confusion.tp += c.tp;
        e.confusion.fp += c.fp;
        e.confusion.tn += c.tn;
        e.confusion.fn += c.fn;
    }
    e.accuracy = static_cast<double>(e.confusion.tp + e.confusion.tn) / static_cast<double>(data.size());
    return e;
}

inline constexpr const char* kReportHeader = "model\ttask\taccuracy\tfold_accuracies\ttp\tfp\ttn\tfn";

inline std::string format_fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline void write_report_tsv(std::ostream& out, const std::vector<EvalEntry>& entries) {
    out << kReportHeader << '\n';
    for (const auto& e : entries) {
        out << e.model << '\t' << e.task << '\t' << format_fixed(e.accuracy) << '\t';
        for (std::size_t f = 0; f < e.fold_accuracies.size(); ++f) out << (f ? "," : "") << format_fixed(e.fold_accuracies[f]);
        out << '\t' << e.confusion.tp << '\t' << e.confusion.fp << '\t' << e.confusion.tn << '\t' << e.confusion.fn << '\n';
    }
}

}  // namespace apcrowd::learn
