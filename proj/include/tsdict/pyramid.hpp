#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsdict/bagging.hpp"
#include "tsdict/classifiers.hpp"
#include "tsdict/distances.hpp"

namespace tsdict {

/// Spatial pyramid over one series: per level l = 1..L, 2^(l-1) segment
/// histograms, stored level-major. Segment weight is 1/2^(L-l); the level-1
/// histogram of an L=1 pyramid is exactly the plain bag.
struct PyramidHistogram {
    int levels = 1;
    std::vector<SparseHistogram> segments;  // (1 << levels) - 1 histograms

    double segment_weight(int level) const { return 1.0 / static_cast<double>(1 << (levels - level)); }
    /// Total mass after weighting; the l1 normaliser used by HI.
    double weighted_mass() const;
};

/// Segment (0-based) of level `level` containing index `pos` when [0, m) is
/// split into 2^(level-1) near-equal parts, remainder on leading segments.
int pyramid_segment_of(int pos, int m, int level);

/// Builds the pyramid from the global word sequence: numerosity reduction is
/// applied once across the whole series and each surviving window increments
/// the segment containing its start index at every level.
PyramidHistogram build_pyramid(const TimeSeries& series, const BagConfig& cfg,
                               const BreakpointTable* table, int levels);

/// Measure over the weighted concatenated key space. BossDist uses raw
/// weighted counts; HI compares the l1-normalised weighted features.
double pyramid_distance(const PyramidHistogram& test, const PyramidHistogram& train,
                        Measure measure);

struct SpMember {
    MemberParams params;  // levels carried in params.levels
    double train_acc = 0;
    std::vector<PyramidHistogram> train_feats;
    std::vector<int> labels;
    std::optional<BreakpointTable> model;
};

/// Algorithm-3 ensemble construction: per window size, best word length by
/// LOOCV at L=1, then L in {2,3} on that feature set (strict improvement
/// only); retains windows within 92% of the best and caps the ensemble at
/// min(100, lambda).
std::vector<SpMember> build_sp_ensemble(const LabeledDataset& train, const ParameterGrid& grid,
                                        Measure measure);

/// Text form of a pyramid set: `label k level.segment:key:count ...`.
std::string pyramids_to_text(const std::vector<PyramidHistogram>& feats,
                             const std::vector<int>& labels);
std::pair<std::vector<PyramidHistogram>, std::vector<int>> pyramids_from_text(
    const std::string& text);

/// Spatial-pyramid BOSS (SP-BD / SP-HI).
class SpClassifier {
public:
    explicit SpClassifier(Measure measure, ParameterGrid grid = {})
        : measure_(measure), grid_(std::move(grid)) {}

    void fit(const LabeledDataset& train);
    int predict(const TimeSeries& query) const;
    double accuracy(const LabeledDataset& test) const;

    Measure measure() const { return measure_; }
    const std::vector<SpMember>& members() const { return members_; }
    const std::vector<std::string>& label_names() const { return label_names_; }

    void save(const std::string& dir) const;
    static SpClassifier load(const std::string& dir);

private:
    Measure measure_;
    ParameterGrid grid_;
    std::vector<SpMember> members_;
    std::vector<std::string> label_names_;
};

}  // namespace tsdict
