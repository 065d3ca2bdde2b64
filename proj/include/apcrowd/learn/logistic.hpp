#pragma once

// L2-regularized logistic regression on standardized features, fit by full-batch gradient
// descent. Loss: mean log-loss + (l2 / 2) * |w|^2, bias unregularized. A step that would
// raise the loss is retried at half the learning rate, so the loss never increases.

#include <apcrowd/learn/classifier.hpp>

#include <cmath>
#include <vector>

namespace apcrowd::learn {

struct LogisticOptions {
    double l2 = 1e-4;
    double learning_rate = 0.1;
    std::size_t epochs = 500;
};

inline double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

inline double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// Loss and gradient on an already-standardized design matrix.
struct LogisticObjective {
    const Matrix& x;
    std::span<const Label> y;
    double l2;

    double loss(std::span<const double> w, double b) const {
        double s = 0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const double z = margin(i, w, b);
            s += softplus(z) - (y[i] == Label::Positive ? z : 0.0);
        }
        double reg = 0;
        for (double wi : w) reg += wi * wi;
        return s / static_cast<double>(x.rows()) + 0.5 * l2 * reg;
    }

    // Returns d loss / d b; fills grad_w.
    double gradient(std::span<const double> w, double b, std::vector<double>& grad_w) const {
        grad_w.assign(w.size(), 0.0);
        double gb = 0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const double r = sigmoid(margin(i, w, b)) - (y[i] == Label::Positive ? 1.0 : 0.0);
            gb += r;
            auto row = x.row(i);
            for (std::size_t j = 0; j < w.size(); ++j) grad_w[j] += r * row[j];
        }
        const double inv_n = 1.0 / static_cast<double>(x.rows());
        for (std::size_t j = 0; j < w.size(); ++j) grad_w[j] = grad_w[j] * inv_n + l2 * w[j];
        return gb * inv_n;
    }

    double margin(std::size_t i, std::span<const double> w, double b) const {
        double z = b;
        auto row = x.row(i);
        for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * row[j];
        return z;
    }
};

class LogisticRegression final : public Classifier {
public:
    LogisticRegression(std::vector<std::size_t> kept, std::vector<double> means, std::vector<double> scales,
                       std::vector<double> weights, double bias)
        : kept_(std::move(kept)), means_(std::move(means)), scales_(std::move(scales)), weights_(std::move(weights)),
          bias_(bias) {}

    double decision(std::span<const double> x) const {
        double z = bias_;
        for (std::size_t j = 0; j < kept_.size(); ++j) z += weights_[j] * (x[kept_[j]] - means_[j]) / scales_[j];
        return z;
    }

    double probability(std::span<const double> x) const { return sigmoid(decision(x)); }

    // Positive only above probability 0.5.
    Label predict(std::span<const double> x) const override {
        return decision(x) > 0 ? Label::Positive : Label::Negative;
    }

    std::string kind() const override { return "logistic_regression"; }

    json state() const override {
        return {{"kept", kept_}, {"means", means_}, {"scales", scales_}, {"weights", weights_}, {"bias", bias_}};
    }

    static LogisticRegression from_state(const json& s) {
        return LogisticRegression(s.at("kept").get<std::vector<std::size_t>>(), s.at("means").get<std::vector<double>>(),
                                  s.at("scales").get<std::vector<double>>(), s.at("weights").get<std::vector<double>>(),
                                  s.at("bias").get<double>());
    }

    const std::vector<std::size_t>& kept_columns() const { return kept_; }
    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }

private:
    std::vector<std::size_t> kept_;
    std::vector<double> means_;
    std::vector<double> scales_;
    std::vector<double> weights_;
    double bias_;
};

struct StandardizedDesign {
    Matrix x;
    std::vector<std::size_t> kept;
    std::vector<double> means;
    std::vector<double> scales;
    std::vector<std::size_t> dropped;  // constant columns
};

// Per-column z-scores with population std; constant columns are dropped.
inline StandardizedDesign standardize(const Matrix& x) {
    StandardizedDesign out;
    const auto n = static_cast<double>(x.rows());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        double mean = 0;
        for (std::size_t r = 0; r < x.rows(); ++r) mean += x(r, c);
        mean /= n;
        double ss = 0;
        for (std::size_t r = 0; r < x.rows(); ++r) ss += (x(r, c) - mean) * (x(r, c) - mean);
        const double sd = std::sqrt(ss / n);
        if (sd > 0) {
            out.kept.push_back(c);
            out.means.push_back(mean);
            out.scales.push_back(sd);
        } else {
            out.dropped.push_back(c);
        }
    }
    out.x = Matrix(x.rows(), out.kept.size());
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t j = 0; j < out.kept.size(); ++j) out.x(r, j) = (x(r, out.kept[j]) - out.means[j]) / out.scales[j];
    return out;
}

inline TrainedModel train_logistic_regression(const LabeledDataset& data, const LogisticOptions& opt = {},
                                              std::vector<double>* loss_history = nullptr) {
    require_rows(data, "logistic regression");
    auto design = standardize(data.features);
    LogisticObjective obj{design.x, data.labels, opt.l2};
    std::vector<double> w(design.kept.size(), 0.0), gw, trial(w.size());
    double b = 0;
    double lr = opt.learning_rate;
    double loss = obj.loss(w, b);
    if (loss_history) loss_history->push_back(loss);
    for (std::size_t epoch = 0; epoch < opt.epochs; ++epoch) {
        const double gb = obj.gradient(w, b, gw);
        double next = loss;
        double trial_b = b;
        for (int attempt = 0; attempt < 60; ++attempt) {
            for (std::size_t j = 0; j < w.size(); ++j) trial[j] = w[j] - lr * gw[j];
            trial_b = b - lr * gb;
            next = obj.loss(trial, trial_b);
            if (next <= loss) break;
            lr *= 0.5;
        }
        if (next > loss) break;
        w = trial;
        b = trial_b;
        loss = next;
        if (loss_history) loss_history->push_back(loss);
    }
    TrainedModel m;
    m.name = "logistic";
    m.hyperparameters = {{"l2", opt.l2},
                         {"learning_rate", opt.learning_rate},
                         {"epochs", opt.epochs},
                         {"dropped_columns", design.dropped}};
    m.width = data.width();
    m.impl = std::make_shared<LogisticRegression>(std::move(design.kept), std::move(design.means), std::move(design.scales),
                                                  std::move(w), b);
    return m;
}

}  // namespace apcrowd::learn
