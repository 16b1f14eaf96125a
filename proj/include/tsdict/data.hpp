#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "tsdict/types.hpp"

namespace tsdict {

/// Reads the UCR text format: one case per line, label then m values,
/// delimiter auto-detected among comma/tab/space. Labels are mapped to
/// contiguous 0-based ints in sorted numeric order of the originals.
/// Throws std::runtime_error with a line number on malformed input.
LabeledDataset read_ucr(const std::string& path);

/// Writes the same format with 17 significant digits and original labels.
void write_ucr(const LabeledDataset& data, const std::string& path, char delim = ',');

/// Redraws a stratified train/test split from the pooled cases. Seed 0
/// returns the original split unchanged; any other seed shuffles per class
/// and redraws with the original per-class train/test counts.
std::pair<LabeledDataset, LabeledDataset> stratified_resample(const LabeledDataset& train,
                                                              const LabeledDataset& test,
                                                              std::uint64_t seed);

/// Synthetic two-class dictionary data: Gaussian noise with k1 (class 0)
/// or k2 (class 1) shapelets embedded at random non-overlapping offsets.
/// Shapelets are one-period sines or head-and-shoulders bumps (three lobes,
/// middle largest) of fixed length.
struct GeneratorParams {
    int n_per_class = 50;
    int m = 500;
    int k1 = 6;
    int k2 = 2;
    double noise_std = 1.0;
    std::uint64_t seed = 0;
    double amplitude = 1.0;   // free knob; the figure gives no value
    int shapelet_len = 29;
};

LabeledDataset generate_dictionary_data(const GeneratorParams& params);

}  // namespace tsdict
