#include "tsdict/pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "tsdict/detail/textio.hpp"
#include "tsdict/parallel.hpp"

namespace tsdict {

double PyramidHistogram::weighted_mass() const {
    double total = 0;
    std::size_t idx = 0;
    for (int level = 1; level <= levels; ++level) {
        const double wt = segment_weight(level);
        for (int s = 0; s < (1 << (level - 1)); ++s, ++idx) total += wt * segments[idx].mass();
    }
    return total;
}

int pyramid_segment_of(int pos, int m, int level) {
    const int parts = 1 << (level - 1);
    const int base = m / parts;
    const int rem = m % parts;
    const int wide = rem * (base + 1);
    if (pos < wide) return pos / (base + 1);
    return rem + (pos - wide) / base;
}

PyramidHistogram build_pyramid(const TimeSeries& series, const BagConfig& cfg,
                               const BreakpointTable* table, int levels) {
    if (levels < 1) throw std::invalid_argument("build_pyramid: levels must be >= 1");
    const int m = static_cast<int>(series.size());
    if (m / (1 << (levels - 1)) < cfg.w)
        throw std::invalid_argument("build_pyramid: segment shorter than window");

    PyramidHistogram pyr;
    pyr.levels = levels;
    pyr.segments.resize((1u << levels) - 1);

    const auto keys = word_sequence(series, cfg, table);
    const auto keep = numerosity_survivors(keys, cfg.numerosity);
    for (std::size_t j = 0; j < keys.size(); ++j) {
        if (!keep[j]) continue;
        int base_idx = 0;
        for (int level = 1; level <= levels; ++level) {
            const int seg = pyramid_segment_of(static_cast<int>(j), m, level);
            pyr.segments[base_idx + seg].entries.push_back({keys[j], 1});
            base_idx += 1 << (level - 1);
        }
    }
    for (auto& seg : pyr.segments) seg.normalize();
    return pyr;
}

namespace {

double scaled_intersection(const SparseHistogram& a, const SparseHistogram& b, double sa,
                           double sb) {
    double sum = 0;
    std::size_t i = 0, j = 0;
    const auto& ea = a.entries;
    const auto& eb = b.entries;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].first == eb[j].first) {
            sum += std::min(sa * ea[i].second, sb * eb[j].second);
            ++i, ++j;
        } else if (ea[i].first < eb[j].first) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum;
}

}  // namespace

double pyramid_distance(const PyramidHistogram& test, const PyramidHistogram& train,
                        Measure measure) {
    if (test.levels != train.levels)
        throw std::invalid_argument("pyramid_distance: mismatched pyramid depth");
    if (measure != Measure::BossDist && measure != Measure::HI)
        throw std::invalid_argument("pyramid_distance: measure must be BossDist or HI");

    if (measure == Measure::BossDist) {
        double sum = 0;
        std::size_t idx = 0;
        for (int level = 1; level <= test.levels; ++level) {
            const double wt = test.segment_weight(level);
            for (int s = 0; s < (1 << (level - 1)); ++s, ++idx)
                sum += wt * wt * boss_distance(test.segments[idx], train.segments[idx]);
        }
        return sum;
    }

    const double mass_test = test.weighted_mass();
    const double mass_train = train.weighted_mass();
    if (mass_test == 0 || mass_train == 0) return 0;
    double sum = 0;
    std::size_t idx = 0;
    for (int level = 1; level <= test.levels; ++level) {
        const double wt = test.segment_weight(level);
        for (int s = 0; s < (1 << (level - 1)); ++s, ++idx)
            sum += scaled_intersection(test.segments[idx], train.segments[idx], wt / mass_test,
                                       wt / mass_train);
    }
    return sum;
}

namespace {

PyramidHistogram as_flat_pyramid(SparseHistogram bag) {
    PyramidHistogram pyr;
    pyr.levels = 1;
    pyr.segments.push_back(std::move(bag));
    return pyr;
}

double pyramid_loocv(const std::vector<PyramidHistogram>& feats, const std::vector<int>& labels,
                     Measure measure) {
    return loocv_accuracy(feats, labels, measure,
                          [&](const PyramidHistogram& a, const PyramidHistogram& b) {
                              return pyramid_distance(a, b, measure);
                          });
}

BagConfig sp_bag_config(const MemberParams& mp) {
    BagConfig bc;
    bc.w = mp.w;
    bc.l = mp.l;
    bc.alpha = mp.alpha;
    bc.p = mp.p;
    bc.approx = Approx::DFT;
    bc.disc = Disc::MCB;
    bc.numerosity = true;
    return bc;
}

}  // namespace

std::vector<SpMember> build_sp_ensemble(const LabeledDataset& train, const ParameterGrid& grid,
                                        Measure measure) {
    const int m = static_cast<int>(train.length());
    const auto windows = grid.resolve_windows(m);
    if (windows.empty()) throw std::invalid_argument("build_sp_ensemble: empty grid");

    struct WindowBest {
        bool viable = false;
        MemberParams params;
        double acc = -1;
        std::optional<BreakpointTable> model;
    };
    std::vector<WindowBest> best(windows.size());

    parallel_for(windows.size(), [&](std::size_t wi) {
        const int w = windows[wi];
        if (w < 2 || w > m) return;
        WindowBest& wb = best[wi];

        // Algorithm-3 inner search: best word length (and p) at L=1
        for (int l : grid.word_lengths)
            for (int alpha : grid.alphas)
                for (char p : grid.p_values) {
                    MemberParams mp{w, l, alpha, p != 0, 1};
                    if (l < 2 || l % 2 != 0 || l / 2 + (mp.p ? 1 : 0) > w) continue;
                    auto bagged = bag_dataset(train, sp_bag_config(mp));
                    std::vector<PyramidHistogram> feats;
                    feats.reserve(bagged.bags.size());
                    for (auto& b : bagged.bags) feats.push_back(as_flat_pyramid(std::move(b)));
                    const double acc = pyramid_loocv(feats, bagged.labels, measure);
                    if (acc > wb.acc) {
                        wb.viable = true;
                        wb.params = mp;
                        wb.acc = acc;
                        wb.model = std::move(bagged.model);
                    }
                }
        if (!wb.viable) return;

        // then L in {2, 3} on the chosen feature set; strict improvement only
        for (int levels = 2; levels <= 3; ++levels) {
            if (m / (1 << (levels - 1)) < w) continue;  // segment shorter than window
            std::vector<PyramidHistogram> feats;
            feats.reserve(train.size());
            for (const auto& s : train.series)
                feats.push_back(build_pyramid(s, sp_bag_config(wb.params), &*wb.model, levels));
            const double acc = pyramid_loocv(feats, train.labels, measure);
            if (acc > wb.acc) {
                wb.acc = acc;
                wb.params.levels = levels;
            }
        }
    });

    std::vector<SpMember> members;
    for (const auto& wb : best) {
        if (!wb.viable) continue;
        SpMember member;
        member.params = wb.params;
        member.train_acc = wb.acc;
        members.push_back(std::move(member));
    }
    if (members.empty()) throw std::invalid_argument("build_sp_ensemble: no viable windows");

    std::stable_sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
        if (a.train_acc != b.train_acc) return a.train_acc > b.train_acc;
        return a.params.w < b.params.w;
    });
    const double threshold = 0.92 * members.front().train_acc;
    std::size_t keep = 0;
    while (keep < members.size() && members[keep].train_acc >= threshold) ++keep;
    members.resize(std::min<std::size_t>(keep, 100));

    // materialise retained members
    parallel_for(members.size(), [&](std::size_t i) {
        auto& member = members[i];
        auto bagged = bag_dataset(train, sp_bag_config(member.params));
        member.model = std::move(bagged.model);
        member.labels = bagged.labels;
        member.train_feats.reserve(train.size());
        for (const auto& s : train.series)
            member.train_feats.push_back(build_pyramid(s, sp_bag_config(member.params),
                                                       &*member.model, member.params.levels));
    });
    return members;
}

void SpClassifier::fit(const LabeledDataset& train) {
    label_names_ = train.label_names;
    members_ = build_sp_ensemble(train, grid_, measure_);
}

int SpClassifier::predict(const TimeSeries& query) const {
    if (members_.empty()) throw std::logic_error("SpClassifier: not fitted");
    std::vector<int> votes;
    votes.reserve(members_.size());
    for (const auto& member : members_) {
        const auto pyr = build_pyramid(query, sp_bag_config(member.params), &*member.model,
                                       member.params.levels);
        votes.push_back(nn_classify(pyr, member.train_feats, member.labels, measure_,
                                    [&](const PyramidHistogram& a, const PyramidHistogram& b) {
                                        return pyramid_distance(a, b, measure_);
                                    }));
    }
    return majority_vote(votes, static_cast<int>(label_names_.size()));
}

double SpClassifier::accuracy(const LabeledDataset& test) const {
    std::vector<int> preds(test.size());
    parallel_for(test.size(), [&](std::size_t i) { preds[i] = predict(test.series[i]); });
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.size(); ++i)
        if (label_names_[preds[i]] == test.label_names[test.labels[i]]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

std::string pyramids_to_text(const std::vector<PyramidHistogram>& feats,
                             const std::vector<int>& labels) {
    std::ostringstream os;
    for (std::size_t i = 0; i < feats.size(); ++i) {
        std::size_t total = 0;
        for (const auto& seg : feats[i].segments) total += seg.entries.size();
        os << labels[i] << ' ' << total;
        std::size_t idx = 0;
        for (int level = 1; level <= feats[i].levels; ++level)
            for (int s = 0; s < (1 << (level - 1)); ++s, ++idx)
                for (const auto& [key, count] : feats[i].segments[idx].entries)
                    os << ' ' << level << '.' << s << ':' << key << ':' << count;
        os << '\n';
    }
    return os.str();
}

std::pair<std::vector<PyramidHistogram>, std::vector<int>> pyramids_from_text(
    const std::string& text) {
    std::vector<PyramidHistogram> feats;
    std::vector<int> labels;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int label = 0;
        std::size_t k = 0;
        if (!(ls >> label >> k)) throw std::runtime_error("pyramids_from_text: malformed header");
        PyramidHistogram pyr;
        int max_level = 1;
        struct Entry {
            int level, seg;
            std::uint64_t key;
            std::uint32_t count;
        };
        std::vector<Entry> entries;
        entries.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            Entry e;
            char d1, d2, d3;
            if (!(ls >> e.level >> d1 >> e.seg >> d2 >> e.key >> d3 >> e.count) || d1 != '.' ||
                d2 != ':' || d3 != ':')
                throw std::runtime_error("pyramids_from_text: malformed entry");
            max_level = std::max(max_level, e.level);
            entries.push_back(e);
        }
        pyr.levels = max_level;
        pyr.segments.resize((1u << max_level) - 1);
        for (const auto& e : entries) {
            const int base = (1 << (e.level - 1)) - 1;
            pyr.segments[base + e.seg].entries.push_back({e.key, e.count});
        }
        for (auto& seg : pyr.segments) seg.normalize();
        feats.push_back(std::move(pyr));
        labels.push_back(label);
    }
    return {std::move(feats), std::move(labels)};
}

void SpClassifier::save(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    std::ostringstream manifest;
    manifest.precision(17);
    manifest << "sp\n";
    manifest << "measure " << measure_name(measure_) << '\n';
    manifest << "classes " << label_names_.size();
    for (const auto& n : label_names_) manifest << ' ' << n;
    manifest << '\n';
    manifest << "members " << members_.size() << '\n';
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const auto& m = members_[i];
        manifest << "member " << i << ' ' << m.params.w << ' ' << m.params.l << ' '
                 << m.params.alpha << ' ' << (m.params.p ? 1 : 0) << ' ' << m.params.levels << ' '
                 << m.train_acc << '\n';
        std::ostringstream base;
        base << dir << "/member_" << i;
        detail::write_file(base.str() + ".pyr", pyramids_to_text(m.train_feats, m.labels));
        detail::write_file(base.str() + ".mcb", m.model->to_text());
    }
    detail::write_file(dir + "/manifest.txt", manifest.str());
}

SpClassifier SpClassifier::load(const std::string& dir) {
    std::istringstream manifest(detail::read_file(dir + "/manifest.txt"));
    std::string kind;
    std::getline(manifest, kind);
    if (kind != "sp") throw std::runtime_error(dir + ": not an SP classifier");
    SpClassifier out(Measure::HI);
    std::string tag;
    std::size_t member_count = 0;
    while (manifest >> tag) {
        if (tag == "measure") {
            std::string v;
            manifest >> v;
            out.measure_ = measure_from_name(v);
        } else if (tag == "classes") {
            std::size_t c;
            manifest >> c;
            out.label_names_.resize(c);
            for (auto& n : out.label_names_) manifest >> n;
        } else if (tag == "members") {
            manifest >> member_count;
        } else if (tag == "member") {
            std::size_t idx;
            SpMember m;
            int p = 0;
            manifest >> idx >> m.params.w >> m.params.l >> m.params.alpha >> p >>
                m.params.levels >> m.train_acc;
            m.params.p = p != 0;
            std::ostringstream base;
            base << dir << "/member_" << idx;
            auto [feats, labels] = pyramids_from_text(detail::read_file(base.str() + ".pyr"));
            m.train_feats = std::move(feats);
            m.labels = std::move(labels);
            m.model = BreakpointTable::from_text(detail::read_file(base.str() + ".mcb"));
            out.members_.push_back(std::move(m));
        } else {
            throw std::runtime_error(dir + ": unknown manifest tag " + tag);
        }
    }
    if (out.members_.size() != member_count)
        throw std::runtime_error(dir + ": manifest member count mismatch");
    return out;
}

}  // namespace tsdict
