#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tsdict {

using TimeSeries = std::vector<double>;

/// A set of equal-length series with contiguous 0-based integer labels.
/// `label_names[c]` preserves the original label string for class c.
struct LabeledDataset {
    std::string name;
    std::vector<TimeSeries> series;
    std::vector<int> labels;
    std::vector<std::string> label_names;

    std::size_t size() const { return series.size(); }
    std::size_t length() const { return series.empty() ? 0 : series.front().size(); }
    int num_classes() const { return static_cast<int>(label_names.size()); }
};

}  // namespace tsdict
