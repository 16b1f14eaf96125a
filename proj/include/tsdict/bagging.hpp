#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsdict/sparse.hpp"
#include "tsdict/symbolic.hpp"
#include "tsdict/types.hpp"

namespace tsdict {

/// One cell of the sliding-window transform space.
struct BagConfig {
    int w = 0;
    int l = 0;
    int alpha = 4;
    bool p = false;  // DFT mean-coefficient drop; ignored for PAA
    Approx approx = Approx::PAA;
    Disc disc = Disc::Gaussian;
    bool numerosity = true;
};

/// Packed word key for every sliding window of the series, in window order.
/// `table` is required iff cfg.disc == MCB.
std::vector<std::uint64_t> word_sequence(const TimeSeries& series, const BagConfig& cfg,
                                         const BreakpointTable* table = nullptr);

/// Marks the windows whose word survives numerosity reduction (the first of
/// each run of identical consecutive words). All-true when disabled.
std::vector<char> numerosity_survivors(const std::vector<std::uint64_t>& keys, bool numerosity);

SparseHistogram bag_series(const TimeSeries& series, const BagConfig& cfg,
                           const BreakpointTable* table = nullptr);

struct BaggedDataset {
    std::vector<SparseHistogram> bags;
    std::vector<int> labels;
    std::optional<BreakpointTable> model;  // present iff cfg.disc == MCB
};

/// Fits MCB on the dataset when required, then bags every series with the
/// same fitted model. Bags come back in input order.
BaggedDataset bag_dataset(const LabeledDataset& data, const BagConfig& cfg);

/// Line-oriented text format: `label k key:count key:count ...`, keys ascending.
std::string bags_to_text(const std::vector<SparseHistogram>& bags, const std::vector<int>& labels);
std::pair<std::vector<SparseHistogram>, std::vector<int>> bags_from_text(const std::string& text);

}  // namespace tsdict
