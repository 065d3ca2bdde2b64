#pragma once

// Binary CART classification tree with weighted Gini impurity.
//
// Nodes are expanded breadth-first until the split budget is used. An impure node is
// always split when any feature separates its rows, even at zero impurity gain, so that
// interactions such as XOR remain learnable. Candidate splits tie-break on the lowest
// feature index, then the lowest threshold. Rows with x[feature] <= threshold go left.

#include <apcrowd/learn/classifier.hpp>

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <deque>
#include <numeric>
#include <optional>
#include <vector>

namespace apcrowd::learn {

enum class TreePreset { Fine, Medium, Coarse };

inline int max_splits_for(TreePreset p) {
    switch (p) {
        case TreePreset::Fine: return 100;
        case TreePreset::Medium: return 20;
        case TreePreset::Coarse: return 4;
    }
    return 100;
}

inline std::string preset_name(TreePreset p) {
    switch (p) {
        case TreePreset::Fine: return "fine";
        case TreePreset::Medium: return "medium";
        case TreePreset::Coarse: return "coarse";
    }
    return "fine";
}

struct TreeOptions {
    int max_splits = 100;
    std::size_t min_parent_size = 2;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0;
    int left = -1;
    int right = -1;
    Label label = Label::Negative;

    bool is_leaf() const { return feature < 0; }
};

// Relative slack under which two impurities count as equal.
inline constexpr double kImpurityTieEps = 1e-12;

class DecisionTree final : public Classifier {
public:
    DecisionTree() = default;
    explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

    Label predict(std::span<const double> x) const override {
        int i = 0;
        while (!nodes_[static_cast<std::size_t>(i)].is_leaf()) {
            const auto& n = nodes_[static_cast<std::size_t>(i)];
            i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
        }
        return nodes_[static_cast<std::size_t>(i)].label;
    }

    std::string kind() const override { return "decision_tree"; }

    json state() const override {
        json nodes = json::array();
        for (const auto& n : nodes_) {
            if (n.is_leaf())
                nodes.push_back({{"leaf", label_char(n.label) == 'P' ? "P" : "N"}});
            else
                nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right}});
        }
        return {{"nodes", nodes}};
    }

    static DecisionTree from_state(const json& s) {
        std::vector<TreeNode> nodes;
        for (const auto& j : s.at("nodes")) {
            TreeNode n;
            if (j.contains("leaf")) {
                n.label = j.at("leaf").get<std::string>() == "P" ? Label::Positive : Label::Negative;
            } else {
                n.feature = j.at("feature").get<int>();
                n.threshold = j.at("threshold").get<double>();
                n.left = j.at("left").get<int>();
                n.right = j.at("right").get<int>();
            }
            nodes.push_back(n);
        }
        if (nodes.empty()) throw DataError("decision tree state has no nodes");
        return DecisionTree(std::move(nodes));
    }

    const std::vector<TreeNode>& nodes() const { return nodes_; }

    std::size_t leaf_count() const {
        return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
    }

    std::size_t split_count() const { return nodes_.size() - leaf_count(); }

private:
    std::vector<TreeNode> nodes_;
};

namespace detail {

struct SplitChoice {
    int feature = -1;
    double threshold = 0;
    double impurity = 0;
};

inline double weighted_gini(double w_pos, double w_total) {
    if (w_total <= 0) return 0;
    const double p = w_pos / w_total;
    return w_total * 2.0 * p * (1.0 - p);
}

// A node's training slots, listed once per feature in ascending (value, row) order.
// Slots index the `rows` vector handed to grow_tree, so bootstrap duplicates are distinct.
struct NodeOrder {
    std::vector<std::vector<std::uint32_t>> by_feature;
};

class TreeGrower {
public:
    TreeGrower(const Matrix& x, std::span<const Label> y, std::span<const double> w, std::vector<std::size_t> rows)
        : x_(x), rows_(std::move(rows)), side_(rows_.size()) {
        const auto m = rows_.size();
        cols_.resize(x_.cols() * m);
        for (std::size_t s = 0; s < m; ++s) {
            auto src = x_.row(rows_[s]);
            for (std::size_t f = 0; f < src.size(); ++f) cols_[f * m + s] = src[f];
            slot_label_.push_back(y[rows_[s]]);
            slot_weight_.push_back(w[rows_[s]]);
        }
    }

    DecisionTree grow(const TreeOptions& opt) {
        std::vector<TreeNode> nodes(1);
        std::deque<std::pair<int, NodeOrder>> queue;
        queue.emplace_back(0, root_order());
        int splits = 0;
        while (!queue.empty()) {
            auto [id, order] = std::move(queue.front());
            queue.pop_front();
            const auto& slots = order.by_feature.front();
            double pos = 0, neg = 0;
            for (auto s : slots) (label(s) == Label::Positive ? pos : neg) += weight(s);
            nodes[static_cast<std::size_t>(id)].label = majority(pos, neg);
            const bool pure = pos <= 0 || neg <= 0;
            if (pure || splits >= opt.max_splits || slots.size() < opt.min_parent_size) continue;
            auto split = best_split(order, pos, pos + neg);
            if (!split) continue;
            auto [left, right] = partition(order, *split);
            const int l = static_cast<int>(nodes.size());
            nodes.emplace_back();
            nodes.emplace_back();
            auto& n = nodes[static_cast<std::size_t>(id)];
            n.feature = split->feature;
            n.threshold = split->threshold;
            n.left = l;
            n.right = l + 1;
            ++splits;
            queue.emplace_back(l, std::move(left));
            queue.emplace_back(l + 1, std::move(right));
        }
        return DecisionTree(std::move(nodes));
    }

private:
    double value(std::uint32_t slot, std::size_t f) const { return cols_[f * rows_.size() + slot]; }
    Label label(std::uint32_t slot) const { return slot_label_[slot]; }
    double weight(std::uint32_t slot) const { return slot_weight_[slot]; }

    NodeOrder root_order() const {
        NodeOrder o;
        o.by_feature.resize(std::max<std::size_t>(x_.cols(), 1));
        std::vector<std::uint32_t> base(rows_.size());
        std::iota(base.begin(), base.end(), 0u);
        for (std::size_t f = 0; f < x_.cols(); ++f) {
            auto& v = o.by_feature[f];
            v = base;
            std::sort(v.begin(), v.end(), [&](std::uint32_t a, std::uint32_t b) {
                const double va = value(a, f), vb = value(b, f);
                if (va != vb) return va < vb;
                if (rows_[a] != rows_[b]) return rows_[a] < rows_[b];
                return a < b;
            });
        }
        if (x_.cols() == 0) o.by_feature[0] = base;
        return o;
    }

    std::optional<SplitChoice> best_split(const NodeOrder& order, double total_pos, double total_w) const {
        std::optional<SplitChoice> best;
        for (std::size_t f = 0; f < x_.cols(); ++f) {
            const auto& v = order.by_feature[f];
            double left_w = 0, left_pos = 0;
            for (std::size_t i = 0; i + 1 < v.size(); ++i) {
                const auto s = v[i];
                left_w += weight(s);
                if (label(s) == Label::Positive) left_pos += weight(s);
                const double a = value(s, f), b = value(v[i + 1], f);
                if (!(a < b)) continue;
                const double imp = weighted_gini(left_pos, left_w) + weighted_gini(total_pos - left_pos, total_w - left_w);
                if (!best || imp < best->impurity - kImpurityTieEps * std::max(1.0, std::abs(best->impurity))) {
                    double thr = a + (b - a) / 2;
                    if (!(thr >= a && thr < b)) thr = a;
                    best = SplitChoice{static_cast<int>(f), thr, imp};
                }
            }
        }
        return best;
    }

    std::pair<NodeOrder, NodeOrder> partition(const NodeOrder& order, const SplitChoice& split) {
        const auto f = static_cast<std::size_t>(split.feature);
        std::size_t n_left = 0;
        for (auto s : order.by_feature[f]) {
            side_[s] = value(s, f) <= split.threshold ? 1 : 2;
            n_left += side_[s] == 1;
        }
        const std::size_t n_right = order.by_feature[f].size() - n_left;
        NodeOrder left, right;
        left.by_feature.resize(order.by_feature.size());
        right.by_feature.resize(order.by_feature.size());
        for (std::size_t g = 0; g < order.by_feature.size(); ++g) {
            auto& l = left.by_feature[g];
            auto& r = right.by_feature[g];
            l.reserve(n_left);
            r.reserve(n_right);
            for (auto s : order.by_feature[g]) (side_[s] == 1 ? l : r).push_back(s);
        }
        return {std::move(left), std::move(right)};
    }

    const Matrix& x_;
    std::vector<std::size_t> rows_;
    std::vector<double> cols_;  // column-major copy of the training rows, by slot
    std::vector<Label> slot_label_;
    std::vector<double> slot_weight_;
    std::vector<unsigned char> side_;
};

}  // namespace detail

// Grows a tree on `rows` of (x, y) with per-row weights `w` (indexed like x). Rows may
// repeat, as in a bootstrap sample.
inline DecisionTree grow_tree(const Matrix& x, std::span<const Label> y, std::span<const double> w,
                              std::vector<std::size_t> rows, const TreeOptions& opt) {
    if (rows.empty()) throw DataError("decision tree: training data is empty");
    return detail::TreeGrower(x, y, w, std::move(rows)).grow(opt);
}

inline DecisionTree grow_tree(const LabeledDataset& data, const TreeOptions& opt) {
    std::vector<double> w(data.size(), 1.0);
    std::vector<std::size_t> rows(data.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return grow_tree(data.features, data.labels, w, std::move(rows), opt);
}

// The seed is accepted for a uniform trainer signature; tree growth is deterministic.
inline TrainedModel train_decision_tree(const LabeledDataset& data, TreePreset preset, std::uint64_t /*seed*/ = 0) {
    require_rows(data, "decision tree");
    TreeOptions opt{max_splits_for(preset)};
    TrainedModel m;
    m.name = preset_name(preset) + "_tree";
    m.hyperparameters = {{"preset", preset_name(preset)}, {"max_splits", opt.max_splits}};
    m.width = data.width();
    m.impl = std::make_shared<DecisionTree>(grow_tree(data, opt));
    return m;
}

}  // namespace apcrowd::learn
