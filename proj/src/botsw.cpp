#include "tsdict/botsw.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "tsdict/detail/textio.hpp"
#include "tsdict/parallel.hpp"
#include "tsdict/rng.hpp"

namespace tsdict {

std::vector<double> BotswParams::resolve_scales() const {
    if (!scales.empty()) return scales;
    std::vector<double> out;
    for (int j = 0; j < 4; ++j) out.push_back(1.6 * std::pow(2.0, j / 2.0));
    return out;
}

std::vector<int> sample_keypoints(int m, int r) {
    if (r < 1) throw std::invalid_argument("sample_keypoints: rate must be >= 1");
    std::vector<int> positions;
    for (int p = 0; p < m; p += r) positions.push_back(p);
    return positions;
}

namespace {

// mirror index into [0, m) without repeating the edge sample
int reflect(int i, int m) {
    if (m == 1) return 0;
    const int period = 2 * (m - 1);
    i = ((i % period) + period) % period;
    return i < m ? i : period - i;
}

}  // namespace

TimeSeries gaussian_filter(const TimeSeries& series, double s) {
    if (!(s > 0)) throw std::invalid_argument("gaussian_filter: width must be positive");
    const int m = static_cast<int>(series.size());
    const int half = static_cast<int>(std::ceil(4.0 * s));
    std::vector<double> kernel(2 * half + 1);
    double total = 0;
    for (int i = -half; i <= half; ++i) {
        kernel[i + half] = std::exp(-0.5 * i * i / (s * s));
        total += kernel[i + half];
    }
    for (auto& k : kernel) k /= total;

    TimeSeries out(m);
    for (int t = 0; t < m; ++t) {
        double acc = 0;
        for (int i = -half; i <= half; ++i) acc += kernel[i + half] * series[reflect(t + i, m)];
        out[t] = acc;
    }
    return out;
}

std::vector<double> describe_keypoint(const TimeSeries& filtered, int pos, int n_b, int a) {
    if (n_b < 1 || a < 1) throw std::invalid_argument("describe_keypoint: invalid block geometry");
    const int m = static_cast<int>(filtered.size());
    const int span = n_b * a;
    const int start = pos - span / 2;
    const double sigma = static_cast<double>(span) / 2.0;

    std::vector<double> desc(2 * n_b, 0.0);
    for (int b = 0; b < n_b; ++b) {
        for (int t = 0; t < a; ++t) {
            const int u = start + b * a + t;
            const double grad =
                (filtered[reflect(u + 1, m)] - filtered[reflect(u - 1, m)]) / 2.0;
            const double d = static_cast<double>(u - pos);
            const double weighted = grad * std::exp(-0.5 * d * d / (sigma * sigma));
            if (weighted > 0)
                desc[2 * b] += weighted;
            else
                desc[2 * b + 1] += weighted;
        }
    }
    return desc;
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

}  // namespace

Codebook kmeans_fit(const std::vector<std::vector<double>>& vectors, int k, std::uint64_t seed,
                    std::vector<double>* wcss_trace) {
    if (vectors.empty()) throw std::invalid_argument("kmeans_fit: no vectors");
    if (k < 1) throw std::invalid_argument("kmeans_fit: k must be >= 1");
    const std::size_t n = vectors.size();
    const std::size_t dim = vectors.front().size();
    Rng rng(seed);

    // k-means++ seeding
    Codebook cb;
    cb.centroids.reserve(k);
    cb.centroids.push_back(vectors[rng.uniform_index(n)]);
    std::vector<double> dist2(n);
    for (std::size_t i = 0; i < n; ++i) dist2[i] = sq_dist(vectors[i], cb.centroids[0]);
    while (cb.centroids.size() < static_cast<std::size_t>(k)) {
        double total = 0;
        for (double d : dist2) total += d;
        std::size_t pick = 0;
        if (total > 0) {
            const double target = rng.uniform() * total;
            double acc = 0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += dist2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.uniform_index(n);
        }
        cb.centroids.push_back(vectors[pick]);
        for (std::size_t i = 0; i < n; ++i)
            dist2[i] = std::min(dist2[i], sq_dist(vectors[i], cb.centroids.back()));
    }

    // Lloyd iterations
    std::vector<std::size_t> assign(n, 0);
    std::vector<std::size_t> prev(n, SIZE_MAX);
    for (int iter = 0; iter < 100; ++iter) {
        for (std::size_t i = 0; i < n; ++i) assign[i] = nearest_centroid(cb, vectors[i]);
        if (assign == prev) break;
        prev = assign;

        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            counts[assign[i]]++;
            for (std::size_t d = 0; d < dim; ++d) sums[assign[i]][d] += vectors[i][d];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            for (std::size_t d = 0; d < dim; ++d) cb.centroids[c][d] = sums[c][d] / counts[c];
        }
        // reseed empty clusters to the point farthest from its centroid
        for (int c = 0; c < k; ++c) {
            if (counts[c] != 0) continue;
            double worst = -1;
            std::size_t donor = SIZE_MAX;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[assign[i]] <= 1) continue;
                const double d = sq_dist(vectors[i], cb.centroids[assign[i]]);
                if (d > worst) {
                    worst = d;
                    donor = i;
                }
            }
            if (donor == SIZE_MAX) continue;  // no cluster can spare a point
            counts[assign[donor]]--;
            cb.centroids[c] = vectors[donor];
            counts[c] = 1;
            assign[donor] = c;
        }
        if (wcss_trace) {
            double wcss = 0;
            for (std::size_t i = 0; i < n; ++i)
                wcss += sq_dist(vectors[i], cb.centroids[nearest_centroid(cb, vectors[i])]);
            wcss_trace->push_back(wcss);
        }
    }
    return cb;
}

WeightedVector ssr_l2(const std::vector<double>& counts) {
    std::vector<double> values(counts.size());
    double norm2 = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        values[i] = counts[i] >= 0 ? std::sqrt(counts[i]) : -std::sqrt(-counts[i]);
        norm2 += values[i] * values[i];
    }
    const double norm = std::sqrt(norm2);
    WeightedVector out;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] != 0) out.entries.push_back({i, values[i] / norm});
    return out;
}

std::size_t nearest_centroid(const Codebook& codebook, const std::vector<double>& vector) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < codebook.centroids.size(); ++c) {
        const double d = sq_dist(codebook.centroids[c], vector);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

std::vector<std::vector<double>> botsw_descriptors(const TimeSeries& series,
                                                   const BotswParams& params) {
    const auto positions = sample_keypoints(static_cast<int>(series.size()), params.r);
    std::vector<std::vector<double>> descriptors;
    for (double s : params.resolve_scales()) {
        const TimeSeries filtered = gaussian_filter(series, s);
        for (int pos : positions)
            descriptors.push_back(describe_keypoint(filtered, pos, params.n_b, params.a));
    }
    return descriptors;
}

WeightedVector botsw_bag(const TimeSeries& series, const Codebook& codebook,
                         const BotswParams& params) {
    std::vector<double> counts(codebook.size(), 0.0);
    for (const auto& d : botsw_descriptors(series, params)) counts[nearest_centroid(codebook, d)]++;
    return ssr_l2(counts);
}

void BotswClassifier::fit(const LabeledDataset& train) {
    if (train.size() == 0) throw std::invalid_argument("botsw: empty training set");
    label_names_ = train.label_names;

    struct Cell {
        BotswParams params;
        double acc = -1;
        Codebook codebook;
        std::vector<WeightedVector> vectors;
    };
    std::vector<Cell> cells;
    for (int n_b : grid_.block_counts)
        for (int a : grid_.block_sizes)
            for (int k : grid_.codebook_sizes) {
                Cell cell;
                cell.params = BotswParams{grid_.r, grid_.scales, n_b, a, k};
                cells.push_back(std::move(cell));
            }

    // descriptors depend on (n_b, a) only; share them across codebook sizes
    parallel_for(cells.size(), [&](std::size_t i) {
        auto& cell = cells[i];
        std::vector<std::vector<double>> all;
        std::vector<std::pair<std::size_t, std::size_t>> ranges;  // per-series [begin, end)
        for (const auto& s : train.series) {
            const std::size_t begin = all.size();
            auto d = botsw_descriptors(s, cell.params);
            all.insert(all.end(), std::make_move_iterator(d.begin()),
                       std::make_move_iterator(d.end()));
            ranges.push_back({begin, all.size()});
        }
        cell.codebook = kmeans_fit(all, cell.params.k, grid_.seed);
        cell.vectors.reserve(train.size());
        for (std::size_t si = 0; si < train.size(); ++si) {
            std::vector<double> counts(cell.codebook.size(), 0.0);
            for (std::size_t di = ranges[si].first; di < ranges[si].second; ++di)
                counts[nearest_centroid(cell.codebook, all[di])]++;
            cell.vectors.push_back(ssr_l2(counts));
        }
        cell.acc = loocv_accuracy(cell.vectors, train.labels, measure_,
                                  [&](const WeightedVector& x, const WeightedVector& y) {
                                      return evaluate_measure(measure_, x, y);
                                  });
    });

    std::stable_sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) {
        if (x.acc != y.acc) return x.acc > y.acc;
        if (x.params.n_b != y.params.n_b) return x.params.n_b < y.params.n_b;
        if (x.params.a != y.params.a) return x.params.a < y.params.a;
        return x.params.k < y.params.k;
    });
    const double threshold = 0.92 * cells.front().acc;
    members_.clear();
    for (auto& cell : cells) {
        if (cell.acc < threshold) break;
        BotswMember member;
        member.params = cell.params;
        member.train_acc = cell.acc;
        member.codebook = std::move(cell.codebook);
        member.train_vectors = std::move(cell.vectors);
        member.labels = train.labels;
        members_.push_back(std::move(member));
    }
}

int BotswClassifier::predict(const TimeSeries& query) const {
    if (members_.empty()) throw std::logic_error("BotswClassifier: not fitted");
    std::vector<int> votes;
    votes.reserve(members_.size());
    for (const auto& member : members_) {
        const auto bag = botsw_bag(query, member.codebook, member.params);
        votes.push_back(nn_classify(bag, member.train_vectors, member.labels, measure_,
                                    [&](const WeightedVector& x, const WeightedVector& y) {
                                        return evaluate_measure(measure_, x, y);
                                    }));
    }
    return majority_vote(votes, static_cast<int>(label_names_.size()));
}

double BotswClassifier::accuracy(const LabeledDataset& test) const {
    std::vector<int> preds(test.size());
    parallel_for(test.size(), [&](std::size_t i) { preds[i] = predict(test.series[i]); });
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.size(); ++i)
        if (label_names_[preds[i]] == test.label_names[test.labels[i]]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

std::string Codebook::to_text() const {
    std::ostringstream os;
    os.precision(17);
    for (const auto& row : centroids) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ' ';
            os << row[i];
        }
        os << '\n';
    }
    return os.str();
}

Codebook Codebook::from_text(const std::string& text) {
    Codebook cb;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        cb.centroids.push_back(std::move(row));
    }
    return cb;
}

namespace {

std::string weighted_to_text(const std::vector<WeightedVector>& vectors,
                             const std::vector<int>& labels) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        os << labels[i] << ' ' << vectors[i].entries.size();
        for (const auto& [key, value] : vectors[i].entries) os << ' ' << key << ':' << value;
        os << '\n';
    }
    return os.str();
}

std::pair<std::vector<WeightedVector>, std::vector<int>> weighted_from_text(
    const std::string& text) {
    std::vector<WeightedVector> vectors;
    std::vector<int> labels;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int label;
        std::size_t k;
        if (!(ls >> label >> k)) throw std::runtime_error("weighted_from_text: malformed header");
        WeightedVector wv;
        wv.entries.resize(k);
        for (auto& [key, value] : wv.entries) {
            char sep;
            if (!(ls >> key >> sep >> value) || sep != ':')
                throw std::runtime_error("weighted_from_text: malformed entry");
        }
        vectors.push_back(std::move(wv));
        labels.push_back(label);
    }
    return {std::move(vectors), std::move(labels)};
}

}  // namespace

void BotswClassifier::save(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    std::ostringstream manifest;
    manifest.precision(17);
    manifest << "botsw\n";
    manifest << "measure " << measure_name(measure_) << '\n';
    manifest << "classes " << label_names_.size();
    for (const auto& n : label_names_) manifest << ' ' << n;
    manifest << '\n';
    manifest << "members " << members_.size() << '\n';
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const auto& m = members_[i];
        manifest << "member " << i << ' ' << m.params.r << ' ' << m.params.n_b << ' '
                 << m.params.a << ' ' << m.params.k << ' ' << m.train_acc << " scales";
        for (double s : m.params.resolve_scales()) manifest << ' ' << s;
        manifest << '\n';
        std::ostringstream base;
        base << dir << "/member_" << i;
        detail::write_file(base.str() + ".codebook", m.codebook.to_text());
        detail::write_file(base.str() + ".bags", weighted_to_text(m.train_vectors, m.labels));
    }
    detail::write_file(dir + "/manifest.txt", manifest.str());
}

BotswClassifier BotswClassifier::load(const std::string& dir) {
    std::istringstream manifest(detail::read_file(dir + "/manifest.txt"));
    std::string kind;
    std::getline(manifest, kind);
    if (kind != "botsw") throw std::runtime_error(dir + ": not a botsw classifier");
    BotswClassifier out(Measure::BossDist);
    std::string line;
    while (std::getline(manifest, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "measure") {
            std::string v;
            ls >> v;
            out.measure_ = measure_from_name(v);
        } else if (tag == "classes") {
            std::size_t c;
            ls >> c;
            out.label_names_.resize(c);
            for (auto& n : out.label_names_) ls >> n;
        } else if (tag == "members") {
            continue;
        } else if (tag == "member") {
            std::size_t idx;
            BotswMember m;
            ls >> idx >> m.params.r >> m.params.n_b >> m.params.a >> m.params.k >> m.train_acc;
            std::string scales_tag;
            ls >> scales_tag;
            double s;
            while (ls >> s) m.params.scales.push_back(s);
            std::ostringstream base;
            base << dir << "/member_" << idx;
            m.codebook = Codebook::from_text(detail::read_file(base.str() + ".codebook"));
            auto [vectors, labels] = weighted_from_text(detail::read_file(base.str() + ".bags"));
            m.train_vectors = std::move(vectors);
            m.labels = std::move(labels);
            out.members_.push_back(std::move(m));
        } else {
            throw std::runtime_error(dir + ": unknown manifest tag " + tag);
        }
    }
    return out;
}

}  // namespace tsdict
