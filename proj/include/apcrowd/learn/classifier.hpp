#pragma once

#include <apcrowd/dataset.hpp>
#include <apcrowd/error.hpp>

#include <json.hpp>

#include <memory>
#include <span>
#include <string>

namespace apcrowd::learn {

using json = nlohmann::json;

class Classifier {
public:
    virtual ~Classifier() = default;

    virtual Label predict(std::span<const double> x) const = 0;
    virtual std::string kind() const = 0;
    // Learned state; must be enough to rebuild an identical classifier.
    virtual json state() const = 0;
};

// A trained classifier with the preset that produced it.
struct TrainedModel {
    std::string name;   // registry name, e.g. "bagged"
    json hyperparameters = json::object();
    std::size_t width = 0;
    std::shared_ptr<const Classifier> impl;

    std::string kind() const { return impl ? impl->kind() : std::string{}; }

    Label predict(std::span<const double> x) const {
        if (x.size() != width)
            throw DataError("feature vector has width " + std::to_string(x.size()) + ", model expects " +
                            std::to_string(width));
        return impl->predict(x);
    }
};

// Majority of positive vs negative votes; ties resolve to Negative.
inline Label majority(double positive, double negative) {
    return positive > negative ? Label::Positive : Label::Negative;
}

inline void require_rows(const LabeledDataset& data, const char* who) {
    if (data.size() == 0) throw DataError(std::string(who) + ": training data is empty");
    if (data.features.rows() != data.size()) throw DataError(std::string(who) + ": feature and label counts differ");
}

}  // namespace apcrowd::learn
