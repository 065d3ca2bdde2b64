#pragma once
// Small builders shared by the unit tests.

#include <apcrowd/apcrowd.hpp>

#include <vector>

namespace testing_support {

using apcrowd::Label;
using apcrowd::LabeledDataset;

inline LabeledDataset make_dataset(const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
    LabeledDataset d;
    const std::size_t width = x.empty() ? 0 : x[0].size();
    d.features = apcrowd::Matrix(0, width);
    for (const auto& row : x) d.features.append_row(row);
    for (int v : y) d.labels.push_back(v ? Label::Positive : Label::Negative);
    auto t = *apcrowd::parse_timestamp("2017-04-03 08:30:00");
    for (std::size_t i = 0; i < x.size(); ++i) d.minute_starts.push_back(t + std::chrono::minutes{static_cast<long>(i)});
    return d;
}

struct RandomData {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
};

// Random rows; values come from a small grid when `grid` > 0 so that ties are common.
inline RandomData random_data(apcrowd::Rng& rng, std::size_t n, std::size_t d, int grid) {
    RandomData out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(d);
        for (auto& v : row)
            v = grid > 0 ? static_cast<double>(apcrowd::uniform_index(rng, static_cast<std::size_t>(grid)))
                         : apcrowd::uniform_real(rng, -2.0, 2.0);
        out.x.push_back(row);
        out.y.push_back(apcrowd::bernoulli(rng, 0.5) ? 1 : 0);
    }
    return out;
}

inline double training_accuracy(const apcrowd::learn::TrainedModel& m, const LabeledDataset& d) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < d.size(); ++i) ok += m.predict(d.features.row(i)) == d.labels[i];
    return static_cast<double>(ok) / static_cast<double>(d.size());
}

}  // namespace testing_support
