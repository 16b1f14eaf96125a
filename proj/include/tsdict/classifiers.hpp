#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsdict/bagging.hpp"
#include "tsdict/distances.hpp"
#include "tsdict/types.hpp"

namespace tsdict {

/// Parameter search space. An empty window list means the published BOSS
/// default, w = 10..m, filled in at fit time.
struct ParameterGrid {
    std::vector<int> windows;
    std::vector<int> word_lengths = {8, 10, 12, 14, 16};
    std::vector<int> alphas = {4};
    std::vector<char> p_values = {0, 1};

    std::vector<int> resolve_windows(int series_length) const;
};

/// The four swappable components plus the search space: every Table-2 cell
/// of the BOP/BOSS ablation is an instance of this descriptor.
struct DictionaryConfig {
    Approx approx = Approx::PAA;
    Disc disc = Disc::Gaussian;
    Measure measure = Measure::Euclid;
    bool ensemble = false;
    ParameterGrid grid;
    bool numerosity = true;
    std::size_t member_cap = 0;  // 0 = unlimited
};

/// The ten ablation variants: BOP, BOP+FT, BOP+MCB, BOP+BD, BOP+Ens,
/// BOSS, BOSS-FT, BOSS-MCB, BOSS-BD, BOSS-Ens.
const std::vector<std::string>& variant_names();
DictionaryConfig variant_config(const std::string& name);

struct MemberParams {
    int w = 0;
    int l = 0;
    int alpha = 4;
    bool p = false;
    int levels = 1;  // spatial-pyramid depth; 1 for plain bags
};

struct EnsembleMember {
    MemberParams params;
    double train_acc = 0;
    std::vector<SparseHistogram> train_bags;  // empty until materialised
    std::vector<int> labels;
    std::optional<BreakpointTable> model;
};

/// Index of the closest reference; ties go to the lowest index.
template <class Feature, class Score>
std::size_t nn_index(const Feature& query, const std::vector<Feature>& refs, Measure measure,
                     Score&& score) {
    if (refs.empty()) throw std::invalid_argument("nn_classify: empty reference set");
    std::size_t best = 0;
    double best_score = score(query, refs[0]);
    for (std::size_t i = 1; i < refs.size(); ++i) {
        const double s = score(query, refs[i]);
        if (closer(measure, s, best_score)) {
            best_score = s;
            best = i;
        }
    }
    return best;
}

template <class Feature, class Score>
int nn_classify(const Feature& query, const std::vector<Feature>& refs,
                const std::vector<int>& labels, Measure measure, Score&& score) {
    return labels[nn_index(query, refs, measure, score)];
}

/// Leave-one-out 1-NN accuracy; each case is scored against all others,
/// nearest-neighbour ties resolved to the lowest reference index.
template <class Feature, class Score>
double loocv_accuracy(const std::vector<Feature>& feats, const std::vector<int>& labels,
                      Measure measure, Score&& score) {
    const std::size_t n = feats.size();
    if (n < 2) throw std::invalid_argument("loocv_accuracy: need at least 2 cases");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = n;
        double best_score = worst_score(measure);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double s = score(feats[i], feats[j]);
            if (best == n || closer(measure, s, best_score)) {
                best_score = s;
                best = j;
            }
        }
        if (labels[best] == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(n);
}

inline double bag_score(Measure m, const SparseHistogram& test, const SparseHistogram& ref) {
    return evaluate_measure(m, test, ref);
}

/// Modal label; ties go to the lowest class index.
int majority_vote(const std::vector<int>& votes, int num_classes);

/// Evaluates every viable grid cell by LOOCV and returns all of them with
/// accuracies, sorted by accuracy descending then (w, l, p) ascending.
/// Members come back without bags; materialise the retained ones.
std::vector<EnsembleMember> grid_search(const LabeledDataset& train, const DictionaryConfig& cfg);

/// Keeps the sorted prefix with train_acc >= 0.92 * best (all of it when
/// `ensemble`, only the single best otherwise), then applies the optional
/// size cap (highest accuracy first, lowest window on ties).
std::vector<EnsembleMember> retain_ensemble(std::vector<EnsembleMember> sorted_members,
                                            bool ensemble, std::size_t cap = 0);

/// Rebuilds bags and discretisation models for the retained members.
void materialize_members(const LabeledDataset& train, const DictionaryConfig& cfg,
                         std::vector<EnsembleMember>& members);

/// Majority vote over the members: each transforms the query with its own
/// parameters and fitted model and votes via 1-NN.
int ensemble_classify(const TimeSeries& query, const std::vector<EnsembleMember>& members,
                      const DictionaryConfig& cfg, int num_classes);

/// The full four-component dictionary classifier (any Table-2 variant).
class DictionaryClassifier {
public:
    explicit DictionaryClassifier(DictionaryConfig cfg) : cfg_(std::move(cfg)) {}

    void fit(const LabeledDataset& train);
    int predict(const TimeSeries& query) const;
    std::vector<int> predict_all(const std::vector<TimeSeries>& queries) const;
    double accuracy(const LabeledDataset& test) const;

    const DictionaryConfig& config() const { return cfg_; }
    const std::vector<EnsembleMember>& members() const { return members_; }
    const std::vector<std::string>& label_names() const { return label_names_; }

    void save(const std::string& dir) const;
    static DictionaryClassifier load(const std::string& dir);

private:
    DictionaryConfig cfg_;
    std::vector<EnsembleMember> members_;
    std::vector<std::string> label_names_;
};

/// log(1+tf) * log(c/df) with natural logs; 0 when the word is absent from
/// every class (df = 0).
double tfidf_weight(double tf, double df, int num_classes);

/// SAXVSM: tf-idf weighted class vectors over pooled SAX bags, classified
/// by maximal cosine similarity.
struct SaxVsmModel {
    int w = 0, l = 0, alpha = 0;
    double train_acc = 0;
    std::vector<WeightedVector> class_vectors;

    int predict(const SparseHistogram& bag) const;
};

SaxVsmModel saxvsm_build(const LabeledDataset& train, int w, int l, int alpha);

class SaxVsmClassifier {
public:
    explicit SaxVsmClassifier(ParameterGrid grid = {}) : grid_(std::move(grid)) {}

    void fit(const LabeledDataset& train);
    int predict(const TimeSeries& query) const;
    double accuracy(const LabeledDataset& test) const;

    const SaxVsmModel& model() const { return model_; }
    const std::vector<std::string>& label_names() const { return label_names_; }

    void save(const std::string& dir) const;
    static SaxVsmClassifier load(const std::string& dir);

private:
    ParameterGrid grid_;
    SaxVsmModel model_;
    std::vector<std::string> label_names_;
};

}  // namespace tsdict
