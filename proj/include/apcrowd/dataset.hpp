#pragma once

#include <apcrowd/features.hpp>
#include <apcrowd/labeling.hpp>
#include <apcrowd/matrix.hpp>

#include <istream>
#include <ostream>
#include <vector>

namespace apcrowd {

struct LabeledDataset {
    Matrix features;
    std::vector<Label> labels;
    std::vector<Timestamp> minute_starts;

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t width() const noexcept { return features.cols(); }

    std::size_t count(Label l) const {
        return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), l));
    }

    LabeledDataset subset(std::span<const std::size_t> idx) const {
        LabeledDataset out;
        out.features = features.select_rows(idx);
        for (auto i : idx) {
            out.labels.push_back(labels[i]);
            if (!minute_starts.empty()) out.minute_starts.push_back(minute_starts[i]);
        }
        return out;
    }
};

// Drops out-of-scope minutes and labels the rest from the schedule alone.
inline LabeledDataset label_dataset(const FeatureMatrix& fm, const ScheduleConfig& schedule, const TaskSpec& spec) {
    LabeledDataset out;
    out.features = Matrix(0, fm.values.cols());
    for (std::size_t r = 0; r < fm.rows(); ++r) {
        if (!in_scope(fm.minute_starts[r], schedule)) continue;
        out.features.append_row(fm.values.row(r));
        out.labels.push_back(label_minute(fm.minute_starts[r], schedule, spec));
        out.minute_starts.push_back(fm.minute_starts[r]);
    }
    return out;
}

inline void write_labeled_csv(std::ostream& out, const LabeledDataset& data) {
    FeatureMatrix fm{data.features, data.minute_starts};
    std::vector<char> labels;
    for (auto l : data.labels) labels.push_back(label_char(l));
    write_feature_csv(out, fm, &labels);
}

inline LabeledDataset read_labeled_csv(std::istream& in) {
    std::vector<char> labels;
    auto fm = read_feature_csv(in, &labels);
    LabeledDataset out{std::move(fm.values), {}, std::move(fm.minute_starts)};
    for (char c : labels) out.labels.push_back(c == 'P' ? Label::Positive : Label::Negative);
    return out;
}

}  // namespace apcrowd
