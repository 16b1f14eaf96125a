#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tsdict/classifiers.hpp"
#include "tsdict/distances.hpp"
#include "tsdict/types.hpp"

namespace tsdict {

/// One BOTSW transform cell: sampling rate, filter scales, descriptor
/// geometry (n_b blocks of a points) and codebook size.
struct BotswParams {
    int r = 4;
    std::vector<double> scales;  // empty => 1.6 * 2^(j/2), j = 0..3
    int n_b = 8;
    int a = 4;
    int k = 64;

    std::vector<double> resolve_scales() const;
};

/// Regularly sampled keypoint positions 0, r, 2r, ... < m.
std::vector<int> sample_keypoints(int m, int r);

/// Gaussian smoothing with std s; kernel truncated at +-ceil(4s),
/// renormalised to sum 1, reflective boundary padding.
TimeSeries gaussian_filter(const TimeSeries& series, double s);

/// Block gradient descriptor: n_b blocks of a points centred on the keypoint,
/// central-difference gradients weighted by exp(-d^2 / (2 sigma^2)) with
/// sigma = n_b * a / 2; slot 2i sums the positive gradients of block i,
/// slot 2i+1 the negative ones.
std::vector<double> describe_keypoint(const TimeSeries& filtered, int pos, int n_b, int a);

struct Codebook {
    std::vector<std::vector<double>> centroids;

    std::size_t size() const { return centroids.size(); }
    std::string to_text() const;
    static Codebook from_text(const std::string& text);
};

/// Lloyd's algorithm from seeded k-means++ starts; stops when assignments
/// stabilise or after 100 iterations. An emptied cluster is reseeded to the
/// point farthest from its assigned centroid. `wcss_trace`, when given,
/// records the within-cluster sum of squares after every update step.
Codebook kmeans_fit(const std::vector<std::vector<double>>& vectors, int k, std::uint64_t seed,
                    std::vector<double>* wcss_trace = nullptr);

/// Signed square root followed by l2 normalisation of a count vector.
WeightedVector ssr_l2(const std::vector<double>& counts);

/// Nearest centroid by squared Euclidean distance, ties to the lowest index.
std::size_t nearest_centroid(const Codebook& codebook, const std::vector<double>& vector);

/// All (keypoint x scale) descriptors of one series.
std::vector<std::vector<double>> botsw_descriptors(const TimeSeries& series,
                                                   const BotswParams& params);

/// Quantised descriptor histogram normalised by signed square root then l2.
WeightedVector botsw_bag(const TimeSeries& series, const Codebook& codebook,
                         const BotswParams& params);

struct BotswGrid {
    std::vector<int> block_counts = {4, 8, 12, 16, 20};
    std::vector<int> block_sizes = {4, 8};
    std::vector<int> codebook_sizes = {32, 64, 128, 256, 512, 1024};
    int r = 4;
    std::vector<double> scales;  // empty => defaults
    std::uint64_t seed = 7;
};

struct BotswMember {
    BotswParams params;
    double train_acc = 0;
    Codebook codebook;
    std::vector<WeightedVector> train_vectors;
    std::vector<int> labels;
};

class BotswClassifier {
public:
    explicit BotswClassifier(Measure measure, BotswGrid grid = {})
        : measure_(measure), grid_(std::move(grid)) {}

    void fit(const LabeledDataset& train);
    int predict(const TimeSeries& query) const;
    double accuracy(const LabeledDataset& test) const;

    const std::vector<BotswMember>& members() const { return members_; }
    const std::vector<std::string>& label_names() const { return label_names_; }

    void save(const std::string& dir) const;
    static BotswClassifier load(const std::string& dir);

private:
    Measure measure_;
    BotswGrid grid_;
    std::vector<BotswMember> members_;
    std::vector<std::string> label_names_;
};

}  // namespace tsdict
