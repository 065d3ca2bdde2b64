#pragma once

// k-nearest-neighbour classifiers. Neighbours are ranked by (distance, row index), votes are
// unweighted or inverse-squared-distance weighted; a tied vote is Negative.

#include <apcrowd/learn/classifier.hpp>
#include <apcrowd/rng.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace apcrowd::learn {

enum class Metric { Euclidean, Cosine, Minkowski3 };

inline std::string metric_name(Metric m) {
    switch (m) {
        case Metric::Euclidean: return "euclidean";
        case Metric::Cosine: return "cosine";
        case Metric::Minkowski3: return "minkowski3";
    }
    return "euclidean";
}

inline Metric parse_metric(const std::string& s) {
    if (s == "euclidean") return Metric::Euclidean;
    if (s == "cosine") return Metric::Cosine;
    if (s == "minkowski3") return Metric::Minkowski3;
    throw DataError("unknown kNN metric '" + s + "'");
}

enum class KnnPreset { Fine, Medium, Coarse, Cosine, Cubic, Weighted };

struct KnnOptions {
    std::size_t k = 1;
    Metric metric = Metric::Euclidean;
    bool inverse_square_weights = false;
};

inline KnnOptions knn_options(KnnPreset p) {
    switch (p) {
        case KnnPreset::Fine: return {1, Metric::Euclidean, false};
        case KnnPreset::Medium: return {10, Metric::Euclidean, false};
        case KnnPreset::Coarse: return {100, Metric::Euclidean, false};
        case KnnPreset::Cosine: return {10, Metric::Cosine, false};
        case KnnPreset::Cubic: return {10, Metric::Minkowski3, false};
        case KnnPreset::Weighted: return {10, Metric::Euclidean, true};
    }
    return {};
}

inline std::string knn_preset_name(KnnPreset p) {
    switch (p) {
        case KnnPreset::Fine: return "fine";
        case KnnPreset::Medium: return "medium";
        case KnnPreset::Coarse: return "coarse";
        case KnnPreset::Cosine: return "cosine";
        case KnnPreset::Cubic: return "cubic";
        case KnnPreset::Weighted: return "weighted";
    }
    return "fine";
}

// Cosine distance is 1 - cos(a, b); a zero vector is at distance 1 from anything except
// another zero vector.
inline double distance(Metric m, std::span<const double> a, std::span<const double> b) {
    switch (m) {
        case Metric::Euclidean: {
            double s = 0;
            for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
            return std::sqrt(s);
        }
        case Metric::Minkowski3: {
            double s = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = std::abs(a[i] - b[i]);
                s += d * d * d;
            }
            return std::cbrt(s);
        }
        case Metric::Cosine: {
            double dot = 0, na = 0, nb = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                dot += a[i] * b[i];
                na += a[i] * a[i];
                nb += b[i] * b[i];
            }
            if (na == 0 && nb == 0) return 0;
            if (na == 0 || nb == 0) return 1;
            // One division of exact-in-practice products, so equal angles give identical distances
            // and tied neighbours fall back to index order instead of rounding noise.
            // Directions parallel up to rounding (always the case in one dimension) count as parallel.
            double c2 = dot * dot / (na * nb);
            if (c2 > 1.0 - 8 * std::numeric_limits<double>::epsilon()) c2 = 1.0;
            return 1.0 - std::copysign(std::sqrt(c2), dot);
        }
    }
    return 0;
}

class Knn final : public Classifier {
public:
    Knn(Matrix x, std::vector<Label> y, KnnOptions opt) : x_(std::move(x)), y_(std::move(y)), opt_(opt) {}

    Label predict(std::span<const double> q) const override {
        const auto n = x_.rows();
        const auto k = std::min(opt_.k, n);
        std::vector<std::pair<double, std::size_t>> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = {distance(opt_.metric, q, x_.row(i)), i};
        std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
        double pos = 0, neg = 0;
        if (opt_.inverse_square_weights && d[0].first == 0) {
            for (std::size_t j = 0; j < k && d[j].first == 0; ++j) (y_[d[j].second] == Label::Positive ? pos : neg) += 1;
            return majority(pos, neg);
        }
        for (std::size_t j = 0; j < k; ++j) {
            const double w = opt_.inverse_square_weights ? 1.0 / (d[j].first * d[j].first) : 1.0;
            (y_[d[j].second] == Label::Positive ? pos : neg) += w;
        }
        return majority(pos, neg);
    }

    std::string kind() const override { return "knn"; }

    json state() const override {
        json labels = json::array();
        for (auto l : y_) labels.push_back(l == Label::Positive ? 1 : 0);
        return {{"k", opt_.k},
                {"metric", metric_name(opt_.metric)},
                {"inverse_square_weights", opt_.inverse_square_weights},
                {"rows", x_.rows()},
                {"cols", x_.cols()},
                {"x", x_.data()},
                {"y", labels}};
    }

    static Knn from_state(const json& s) {
        KnnOptions opt{s.at("k").get<std::size_t>(), parse_metric(s.at("metric").get<std::string>()),
                       s.at("inverse_square_weights").get<bool>()};
        const auto rows = s.at("rows").get<std::size_t>(), cols = s.at("cols").get<std::size_t>();
        auto flat = s.at("x").get<std::vector<double>>();
        if (flat.size() != rows * cols) throw DataError("kNN state: matrix size mismatch");
        Matrix x(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) x(r, c) = flat[r * cols + c];
        std::vector<Label> y;
        for (int v : s.at("y")) y.push_back(v ? Label::Positive : Label::Negative);
        return Knn(std::move(x), std::move(y), opt);
    }

    const KnnOptions& options() const { return opt_; }

private:
    Matrix x_;
    std::vector<Label> y_;
    KnnOptions opt_;
};

inline TrainedModel train_knn(const LabeledDataset& data, const KnnOptions& opt, std::string name = "knn") {
    require_rows(data, "kNN");
    TrainedModel m;
    m.name = std::move(name);
    m.hyperparameters = {{"k", opt.k}, {"metric", metric_name(opt.metric)}, {"inverse_square_weights", opt.inverse_square_weights}};
    m.width = data.width();
    m.impl = std::make_shared<Knn>(data.features, data.labels, opt);
    return m;
}

inline TrainedModel train_knn(const LabeledDataset& data, KnnPreset preset) {
    return train_knn(data, knn_options(preset), knn_preset_name(preset) + "_knn");
}

// Random-subspace ensemble of Fine (1-NN) members.
class SubspaceKnn final : public Classifier {
public:
    SubspaceKnn(std::vector<std::vector<std::size_t>> subspaces, std::vector<Knn> members)
        : subspaces_(std::move(subspaces)), members_(std::move(members)) {}

    Label predict(std::span<const double> x) const override {
        double pos = 0, neg = 0;
        std::vector<double> proj;
        for (std::size_t m = 0; m < members_.size(); ++m) {
            proj.clear();
            for (auto f : subspaces_[m]) proj.push_back(x[f]);
            (members_[m].predict(proj) == Label::Positive ? pos : neg) += 1;
        }
        return majority(pos, neg);
    }

    std::string kind() const override { return "subspace_knn"; }

    json state() const override {
        json members = json::array();
        for (std::size_t m = 0; m < members_.size(); ++m)
            members.push_back({{"features", subspaces_[m]}, {"knn", members_[m].state()}});
        return {{"members", members}};
    }

    static SubspaceKnn from_state(const json& s) {
        std::vector<std::vector<std::size_t>> subspaces;
        std::vector<Knn> members;
        for (const auto& m : s.at("members")) {
            subspaces.push_back(m.at("features").get<std::vector<std::size_t>>());
            members.push_back(Knn::from_state(m.at("knn")));
        }
        return SubspaceKnn(std::move(subspaces), std::move(members));
    }

    const std::vector<std::vector<std::size_t>>& subspaces() const { return subspaces_; }

private:
    std::vector<std::vector<std::size_t>> subspaces_;
    std::vector<Knn> members_;
};

struct SubspaceOptions {
    std::size_t n_learners = 30;
    std::size_t subspace_dim = 0;  // 0 selects ceil(d / 2)
};

inline TrainedModel train_subspace_knn(const LabeledDataset& data, const SubspaceOptions& opt, std::uint64_t seed) {
    require_rows(data, "subspace kNN");
    const auto d = data.width();
    if (d == 0) throw DataError("subspace kNN: data has no features");
    const auto dim = opt.subspace_dim == 0 ? (d + 1) / 2 : std::min(opt.subspace_dim, d);
    std::vector<std::vector<std::size_t>> subspaces;
    std::vector<Knn> members;
    for (std::size_t m = 0; m < opt.n_learners; ++m) {
        Rng rng(derive_seed(seed, m));
        std::vector<std::size_t> all(d);
        std::iota(all.begin(), all.end(), std::size_t{0});
        std::shuffle(all.begin(), all.end(), rng);
        all.resize(dim);
        std::sort(all.begin(), all.end());
        members.emplace_back(data.features.select_cols(all), data.labels, knn_options(KnnPreset::Fine));
        subspaces.push_back(std::move(all));
    }
    TrainedModel mdl;
    mdl.name = "subspace_knn";
    mdl.hyperparameters = {{"n_learners", opt.n_learners}, {"subspace_dim", dim}, {"seed", seed}};
    mdl.width = d;
    mdl.impl = std::make_shared<SubspaceKnn>(std::move(subspaces), std::move(members));
    return mdl;
}

}  // namespace apcrowd::learn
