#include "tsdict/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "tsdict/detail/textio.hpp"
#include "tsdict/parallel.hpp"

namespace tsdict {

std::vector<int> ParameterGrid::resolve_windows(int series_length) const {
    if (!windows.empty()) return windows;
    std::vector<int> out;
    for (int w = std::min(10, series_length); w <= series_length; ++w) out.push_back(w);
    return out;
}

const std::vector<std::string>& variant_names() {
    static const std::vector<std::string> names = {
        "BOP",  "BOP+FT",  "BOP+MCB",  "BOP+BD",  "BOP+Ens",
        "BOSS", "BOSS-FT", "BOSS-MCB", "BOSS-BD", "BOSS-Ens",
    };
    return names;
}

DictionaryConfig variant_config(const std::string& name) {
    DictionaryConfig cfg;
    if (name == "BOP") {
        cfg = {Approx::PAA, Disc::Gaussian, Measure::Euclid, false, {}, true, 0};
    } else if (name == "BOP+FT") {
        cfg = {Approx::DFT, Disc::Gaussian, Measure::Euclid, false, {}, true, 0};
    } else if (name == "BOP+MCB") {
        cfg = {Approx::PAA, Disc::MCB, Measure::Euclid, false, {}, true, 0};
    } else if (name == "BOP+BD") {
        cfg = {Approx::PAA, Disc::Gaussian, Measure::BossDist, false, {}, true, 0};
    } else if (name == "BOP+Ens") {
        cfg = {Approx::PAA, Disc::Gaussian, Measure::Euclid, true, {}, true, 0};
    } else if (name == "BOSS") {
        cfg = {Approx::DFT, Disc::MCB, Measure::BossDist, true, {}, true, 0};
    } else if (name == "BOSS-FT") {
        cfg = {Approx::PAA, Disc::MCB, Measure::BossDist, true, {}, true, 0};
    } else if (name == "BOSS-MCB") {
        cfg = {Approx::DFT, Disc::Gaussian, Measure::BossDist, true, {}, true, 0};
    } else if (name == "BOSS-BD") {
        cfg = {Approx::DFT, Disc::MCB, Measure::Euclid, true, {}, true, 0};
    } else if (name == "BOSS-Ens") {
        cfg = {Approx::DFT, Disc::MCB, Measure::BossDist, false, {}, true, 0};
    } else {
        throw std::invalid_argument("unknown variant: " + name);
    }
    return cfg;
}

int majority_vote(const std::vector<int>& votes, int num_classes) {
    if (votes.empty()) throw std::invalid_argument("majority_vote: no votes");
    std::vector<int> counts(num_classes, 0);
    for (int v : votes) counts.at(v)++;
    int best = 0;
    for (int c = 1; c < num_classes; ++c)
        if (counts[c] > counts[best]) best = c;
    return best;
}

namespace {

bool cell_viable(const MemberParams& mp, Approx approx, int m) {
    if (mp.w < 2 || mp.w > m) return false;
    if (approx == Approx::PAA) return mp.l >= 1 && mp.l <= mp.w;
    return mp.l >= 2 && mp.l % 2 == 0 && mp.l / 2 + (mp.p ? 1 : 0) <= mp.w;
}

std::vector<MemberParams> expand_grid(const ParameterGrid& grid, Approx approx, int m) {
    std::vector<MemberParams> cells;
    const std::vector<char> p_list =
        approx == Approx::DFT ? grid.p_values : std::vector<char>{0};
    for (int w : grid.resolve_windows(m))
        for (int l : grid.word_lengths)
            for (int alpha : grid.alphas)
                for (char p : p_list) {
                    MemberParams mp{w, l, alpha, p != 0, 1};
                    if (cell_viable(mp, approx, m)) cells.push_back(mp);
                }
    return cells;
}

BagConfig member_bag_config(const DictionaryConfig& cfg, const MemberParams& mp) {
    BagConfig bc;
    bc.w = mp.w;
    bc.l = mp.l;
    bc.alpha = mp.alpha;
    bc.p = mp.p;
    bc.approx = cfg.approx;
    bc.disc = cfg.disc;
    bc.numerosity = cfg.numerosity;
    return bc;
}

void sort_members(std::vector<EnsembleMember>& members) {
    std::stable_sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
        if (a.train_acc != b.train_acc) return a.train_acc > b.train_acc;
        if (a.params.w != b.params.w) return a.params.w < b.params.w;
        if (a.params.l != b.params.l) return a.params.l < b.params.l;
        if (a.params.p != b.params.p) return !a.params.p;
        return a.params.alpha < b.params.alpha;
    });
}

}  // namespace

std::vector<EnsembleMember> grid_search(const LabeledDataset& train, const DictionaryConfig& cfg) {
    const auto cells = expand_grid(cfg.grid, cfg.approx, static_cast<int>(train.length()));
    if (cells.empty()) throw std::invalid_argument("grid_search: no viable grid cells");

    std::vector<EnsembleMember> members(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const auto bagged = bag_dataset(train, member_bag_config(cfg, cells[i]));
        members[i].params = cells[i];
        members[i].train_acc =
            loocv_accuracy(bagged.bags, bagged.labels, cfg.measure,
                           [&](const SparseHistogram& a, const SparseHistogram& b) {
                               return bag_score(cfg.measure, a, b);
                           });
    });
    sort_members(members);
    return members;
}

std::vector<EnsembleMember> retain_ensemble(std::vector<EnsembleMember> sorted_members,
                                            bool ensemble, std::size_t cap) {
    if (sorted_members.empty()) return sorted_members;
    if (!ensemble) {
        sorted_members.resize(1);
        return sorted_members;
    }
    const double threshold = 0.92 * sorted_members.front().train_acc;
    std::size_t keep = 0;
    while (keep < sorted_members.size() && sorted_members[keep].train_acc >= threshold) ++keep;
    sorted_members.resize(keep);
    if (cap > 0 && sorted_members.size() > cap) sorted_members.resize(cap);
    return sorted_members;
}

void materialize_members(const LabeledDataset& train, const DictionaryConfig& cfg,
                         std::vector<EnsembleMember>& members) {
    parallel_for(members.size(), [&](std::size_t i) {
        auto bagged = bag_dataset(train, member_bag_config(cfg, members[i].params));
        members[i].train_bags = std::move(bagged.bags);
        members[i].labels = std::move(bagged.labels);
        members[i].model = std::move(bagged.model);
    });
}

int ensemble_classify(const TimeSeries& query, const std::vector<EnsembleMember>& members,
                      const DictionaryConfig& cfg, int num_classes) {
    if (members.empty()) throw std::invalid_argument("ensemble_classify: no members");
    std::vector<int> votes;
    votes.reserve(members.size());
    for (const auto& member : members) {
        const auto bag = bag_series(query, member_bag_config(cfg, member.params),
                                    member.model ? &*member.model : nullptr);
        votes.push_back(nn_classify(bag, member.train_bags, member.labels, cfg.measure,
                                    [&](const SparseHistogram& a, const SparseHistogram& b) {
                                        return bag_score(cfg.measure, a, b);
                                    }));
    }
    return majority_vote(votes, num_classes);
}

void DictionaryClassifier::fit(const LabeledDataset& train) {
    label_names_ = train.label_names;
    members_ = retain_ensemble(grid_search(train, cfg_), cfg_.ensemble, cfg_.member_cap);
    materialize_members(train, cfg_, members_);
}

int DictionaryClassifier::predict(const TimeSeries& query) const {
    return ensemble_classify(query, members_, cfg_, static_cast<int>(label_names_.size()));
}

std::vector<int> DictionaryClassifier::predict_all(const std::vector<TimeSeries>& queries) const {
    std::vector<int> preds(queries.size());
    parallel_for(queries.size(), [&](std::size_t i) { preds[i] = predict(queries[i]); });
    return preds;
}

double DictionaryClassifier::accuracy(const LabeledDataset& test) const {
    const auto preds = predict_all(test.series);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.size(); ++i)
        if (label_names_[preds[i]] == test.label_names[test.labels[i]]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

namespace {

std::string member_file(const std::string& dir, std::size_t i, const char* suffix) {
    std::ostringstream os;
    os << dir << "/member_" << i << suffix;
    return os.str();
}

}  // namespace

void DictionaryClassifier::save(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    std::ostringstream manifest;
    manifest.precision(17);
    manifest << "dictionary\n";
    manifest << "approx " << (cfg_.approx == Approx::PAA ? "paa" : "dft") << '\n';
    manifest << "disc " << (cfg_.disc == Disc::Gaussian ? "gaussian" : "mcb") << '\n';
    manifest << "measure " << measure_name(cfg_.measure) << '\n';
    manifest << "ensemble " << (cfg_.ensemble ? 1 : 0) << '\n';
    manifest << "numerosity " << (cfg_.numerosity ? 1 : 0) << '\n';
    manifest << "classes " << label_names_.size();
    for (const auto& n : label_names_) manifest << ' ' << n;
    manifest << '\n';
    manifest << "members " << members_.size() << '\n';
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const auto& m = members_[i];
        manifest << "member " << i << ' ' << m.params.w << ' ' << m.params.l << ' '
                 << m.params.alpha << ' ' << (m.params.p ? 1 : 0) << ' ' << m.params.levels << ' '
                 << m.train_acc << '\n';
        detail::write_file(member_file(dir, i, ".bags"), bags_to_text(m.train_bags, m.labels));
        if (m.model) detail::write_file(member_file(dir, i, ".mcb"), m.model->to_text());
    }
    detail::write_file(dir + "/manifest.txt", manifest.str());
}

DictionaryClassifier DictionaryClassifier::load(const std::string& dir) {
    std::istringstream manifest(detail::read_file(dir + "/manifest.txt"));
    std::string kind;
    std::getline(manifest, kind);
    if (kind != "dictionary") throw std::runtime_error(dir + ": not a dictionary classifier");

    DictionaryConfig cfg;
    std::vector<std::string> classes;
    std::size_t member_count = 0;
    DictionaryClassifier out(cfg);
    std::string tag;
    while (manifest >> tag) {
        if (tag == "approx") {
            std::string v;
            manifest >> v;
            cfg.approx = v == "paa" ? Approx::PAA : Approx::DFT;
        } else if (tag == "disc") {
            std::string v;
            manifest >> v;
            cfg.disc = v == "gaussian" ? Disc::Gaussian : Disc::MCB;
        } else if (tag == "measure") {
            std::string v;
            manifest >> v;
            cfg.measure = measure_from_name(v);
        } else if (tag == "ensemble") {
            int v;
            manifest >> v;
            cfg.ensemble = v != 0;
        } else if (tag == "numerosity") {
            int v;
            manifest >> v;
            cfg.numerosity = v != 0;
        } else if (tag == "classes") {
            std::size_t c;
            manifest >> c;
            classes.resize(c);
            for (auto& n : classes) manifest >> n;
        } else if (tag == "members") {
            manifest >> member_count;
        } else if (tag == "member") {
            std::size_t idx;
            EnsembleMember m;
            int p = 0;
            manifest >> idx >> m.params.w >> m.params.l >> m.params.alpha >> p >>
                m.params.levels >> m.train_acc;
            m.params.p = p != 0;
            auto [bags, labels] = bags_from_text(detail::read_file(member_file(dir, idx, ".bags")));
            m.train_bags = std::move(bags);
            m.labels = std::move(labels);
            if (cfg.disc == Disc::MCB)
                m.model = BreakpointTable::from_text(detail::read_file(member_file(dir, idx, ".mcb")));
            out.members_.push_back(std::move(m));
        } else {
            throw std::runtime_error(dir + ": unknown manifest tag " + tag);
        }
    }
    if (out.members_.size() != member_count)
        throw std::runtime_error(dir + ": manifest member count mismatch");
    out.cfg_ = cfg;
    out.label_names_ = classes;
    return out;
}

double tfidf_weight(double tf, double df, int num_classes) {
    if (df <= 0) return 0.0;
    return std::log1p(tf) * std::log(static_cast<double>(num_classes) / df);
}

namespace {

constexpr int kSaxVsmDefaultAlpha = 4;

BagConfig saxvsm_bag_config(int w, int l, int alpha) {
    BagConfig bc;
    bc.w = w;
    bc.l = l;
    bc.alpha = alpha;
    bc.approx = Approx::PAA;
    bc.disc = Disc::Gaussian;
    bc.numerosity = true;
    return bc;
}

// per-class term frequencies over a shared sorted vocabulary
struct ClassTf {
    std::vector<std::uint64_t> vocab;
    std::vector<std::vector<double>> tf;  // [class][vocab index]
};

ClassTf class_term_frequencies(const std::vector<SparseHistogram>& bags,
                               const std::vector<int>& labels, int num_classes) {
    std::map<std::uint64_t, std::vector<double>> acc;
    for (std::size_t i = 0; i < bags.size(); ++i)
        for (const auto& [key, count] : bags[i].entries) {
            auto it = acc.find(key);
            if (it == acc.end()) it = acc.emplace(key, std::vector<double>(num_classes, 0.0)).first;
            it->second[labels[i]] += count;
        }
    ClassTf out;
    out.tf.assign(num_classes, {});
    out.vocab.reserve(acc.size());
    for (auto& [key, counts] : acc) {
        out.vocab.push_back(key);
        for (int c = 0; c < num_classes; ++c) out.tf[c].push_back(counts[c]);
    }
    return out;
}

std::vector<WeightedVector> build_class_vectors(const ClassTf& ct, int num_classes) {
    std::vector<WeightedVector> vectors(num_classes);
    for (std::size_t v = 0; v < ct.vocab.size(); ++v) {
        int df = 0;
        for (int c = 0; c < num_classes; ++c)
            if (ct.tf[c][v] > 0) ++df;
        for (int c = 0; c < num_classes; ++c) {
            const double w = tfidf_weight(ct.tf[c][v], df, num_classes);
            if (w != 0.0) vectors[c].entries.push_back({ct.vocab[v], w});
        }
    }
    return vectors;
}

int predict_against_class_vectors(const SparseHistogram& bag,
                                  const std::vector<WeightedVector>& vectors) {
    const WeightedVector q = to_weighted(bag);
    int best = 0;
    double best_sim = -1.0;
    for (std::size_t c = 0; c < vectors.size(); ++c) {
        const double sim =
            (vectors[c].empty() || q.empty()) ? 0.0 : cosine_similarity(q, vectors[c]);
        if (sim > best_sim) {
            best_sim = sim;
            best = static_cast<int>(c);
        }
    }
    return best;
}

double saxvsm_loocv(const std::vector<SparseHistogram>& bags, const std::vector<int>& labels,
                    int num_classes) {
    const ClassTf ct = class_term_frequencies(bags, labels, num_classes);
    std::size_t correct = 0;
    std::vector<double> held(ct.vocab.size());
    for (std::size_t i = 0; i < bags.size(); ++i) {
        // adjusted tf with case i held out
        std::fill(held.begin(), held.end(), 0.0);
        {
            std::size_t v = 0;
            for (const auto& [key, count] : bags[i].entries) {
                while (v < ct.vocab.size() && ct.vocab[v] < key) ++v;
                if (v < ct.vocab.size() && ct.vocab[v] == key) held[v] = count;
            }
        }
        std::vector<WeightedVector> vectors(num_classes);
        for (std::size_t v = 0; v < ct.vocab.size(); ++v) {
            int df = 0;
            for (int c = 0; c < num_classes; ++c) {
                const double tf = ct.tf[c][v] - (c == labels[i] ? held[v] : 0.0);
                if (tf > 0) ++df;
            }
            for (int c = 0; c < num_classes; ++c) {
                const double tf = ct.tf[c][v] - (c == labels[i] ? held[v] : 0.0);
                const double w = tfidf_weight(tf, df, num_classes);
                if (w != 0.0) vectors[c].entries.push_back({ct.vocab[v], w});
            }
        }
        if (predict_against_class_vectors(bags[i], vectors) == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(bags.size());
}

}  // namespace

SaxVsmModel saxvsm_build(const LabeledDataset& train, int w, int l, int alpha) {
    const int c = train.num_classes();
    std::vector<int> per_class(c, 0);
    for (int lab : train.labels) per_class.at(lab)++;
    for (int k = 0; k < c; ++k)
        if (per_class[k] == 0) throw std::invalid_argument("saxvsm_build: empty class");

    const BagConfig bc = saxvsm_bag_config(w, l, alpha);
    std::vector<SparseHistogram> bags;
    bags.reserve(train.size());
    for (const auto& s : train.series) bags.push_back(bag_series(s, bc));

    SaxVsmModel model;
    model.w = w;
    model.l = l;
    model.alpha = alpha;
    model.class_vectors = build_class_vectors(class_term_frequencies(bags, train.labels, c), c);
    return model;
}

int SaxVsmModel::predict(const SparseHistogram& bag) const {
    return predict_against_class_vectors(bag, class_vectors);
}

void SaxVsmClassifier::fit(const LabeledDataset& train) {
    label_names_ = train.label_names;
    const int m = static_cast<int>(train.length());
    const int c = train.num_classes();

    struct Cell {
        int w, l, alpha;
        double acc = -1;
    };
    std::vector<Cell> cells;
    for (int w : grid_.resolve_windows(m))
        for (int l : grid_.word_lengths)
            for (int alpha : grid_.alphas)
                if (l >= 1 && l <= w && w <= m) cells.push_back({w, l, alpha});
    if (cells.empty()) throw std::invalid_argument("saxvsm: no viable grid cells");

    parallel_for(cells.size(), [&](std::size_t i) {
        const BagConfig bc = saxvsm_bag_config(cells[i].w, cells[i].l, cells[i].alpha);
        std::vector<SparseHistogram> bags;
        bags.reserve(train.size());
        for (const auto& s : train.series) bags.push_back(bag_series(s, bc));
        cells[i].acc = saxvsm_loocv(bags, train.labels, c);
    });
    const auto best = std::min_element(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
        if (a.acc != b.acc) return a.acc > b.acc;
        if (a.w != b.w) return a.w < b.w;
        if (a.l != b.l) return a.l < b.l;
        return a.alpha < b.alpha;
    });
    model_ = saxvsm_build(train, best->w, best->l, best->alpha);
    model_.train_acc = best->acc;
}

int SaxVsmClassifier::predict(const TimeSeries& query) const {
    const BagConfig bc = saxvsm_bag_config(model_.w, model_.l, model_.alpha);
    return model_.predict(bag_series(query, bc));
}

double SaxVsmClassifier::accuracy(const LabeledDataset& test) const {
    std::vector<int> preds(test.size());
    parallel_for(test.size(), [&](std::size_t i) { preds[i] = predict(test.series[i]); });
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.size(); ++i)
        if (label_names_[preds[i]] == test.label_names[test.labels[i]]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

void SaxVsmClassifier::save(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    std::ostringstream os;
    os.precision(17);
    os << "saxvsm\n";
    os << "params " << model_.w << ' ' << model_.l << ' ' << model_.alpha << ' '
       << model_.train_acc << '\n';
    os << "classes " << label_names_.size();
    for (const auto& n : label_names_) os << ' ' << n;
    os << '\n';
    for (std::size_t c = 0; c < model_.class_vectors.size(); ++c) {
        os << "vector " << c << ' ' << model_.class_vectors[c].entries.size();
        for (const auto& [key, value] : model_.class_vectors[c].entries)
            os << ' ' << key << ':' << value;
        os << '\n';
    }
    detail::write_file(dir + "/manifest.txt", os.str());
}

SaxVsmClassifier SaxVsmClassifier::load(const std::string& dir) {
    std::istringstream is(detail::read_file(dir + "/manifest.txt"));
    std::string kind;
    std::getline(is, kind);
    if (kind != "saxvsm") throw std::runtime_error(dir + ": not a saxvsm classifier");
    SaxVsmClassifier out;
    std::string tag;
    while (is >> tag) {
        if (tag == "params") {
            is >> out.model_.w >> out.model_.l >> out.model_.alpha >> out.model_.train_acc;
        } else if (tag == "classes") {
            std::size_t c;
            is >> c;
            out.label_names_.resize(c);
            for (auto& n : out.label_names_) is >> n;
            out.model_.class_vectors.resize(c);
        } else if (tag == "vector") {
            std::size_t c, k;
            is >> c >> k;
            auto& vec = out.model_.class_vectors.at(c);
            vec.entries.resize(k);
            for (auto& [key, value] : vec.entries) {
                char sep;
                is >> key >> sep >> value;
            }
        } else {
            throw std::runtime_error(dir + ": unknown manifest tag " + tag);
        }
    }
    return out;
}

}  // namespace tsdict
