#include "tsdict/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "tsdict/detail/textio.hpp"

namespace tsdict {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

ResultTable ResultTable::from_csv(const std::string& text) {
    ResultTable table;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("classifier", 0) == 0) continue;  // header
        const auto fields = split_csv_line(line);
        if (fields.size() < 4)
            throw std::runtime_error("malformed CSV row " + std::to_string(lineno));
        ResultRow row;
        row.classifier = fields[0];
        row.dataset = fields[1];
        try {
            row.resample = std::stoi(fields[2]);
            row.accuracy = std::stod(fields[3]);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed CSV row " + std::to_string(lineno));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

ResultTable ResultTable::from_csv_file(const std::string& path) {
    return from_csv(detail::read_file(path));
}

MeanAccuracy mean_accuracy(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean_accuracy: empty cell");
    MeanAccuracy out;
    const double n = static_cast<double>(values.size());
    for (double v : values) out.mean += v;
    out.mean /= n;
    if (values.size() == 1) {
        out.single_resample = true;
        return out;
    }
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stderr_value = std::sqrt(ss / (n - 1)) / std::sqrt(n);
    return out;
}

AccuracySummary summarize(const ResultTable& table) {
    AccuracySummary out;
    std::map<std::string, std::size_t> cls_idx, ds_idx;
    for (const auto& row : table.rows) {
        if (!cls_idx.count(row.classifier)) {
            cls_idx[row.classifier] = out.classifiers.size();
            out.classifiers.push_back(row.classifier);
        }
        if (!ds_idx.count(row.dataset)) {
            ds_idx[row.dataset] = out.datasets.size();
            out.datasets.push_back(row.dataset);
        }
    }
    std::vector<std::vector<std::vector<double>>> cells(
        out.classifiers.size(), std::vector<std::vector<double>>(out.datasets.size()));
    for (const auto& row : table.rows)
        cells[cls_idx[row.classifier]][ds_idx[row.dataset]].push_back(row.accuracy);

    out.means.assign(out.classifiers.size(), std::vector<double>(out.datasets.size(), 0));
    out.stderrs = out.means;
    for (std::size_t c = 0; c < out.classifiers.size(); ++c)
        for (std::size_t d = 0; d < out.datasets.size(); ++d) {
            if (cells[c][d].empty())
                throw std::runtime_error("missing cell: " + out.classifiers[c] + " x " +
                                         out.datasets[d]);
            const auto ma = mean_accuracy(cells[c][d]);
            out.means[c][d] = ma.mean;
            out.stderrs[c][d] = ma.stderr_value;
        }
    return out;
}

std::vector<std::vector<double>> rank_matrix(const std::vector<std::vector<double>>& accs) {
    const std::size_t k = accs.size();
    if (k < 2) throw std::invalid_argument("rank_matrix: need at least 2 classifiers");
    const std::size_t n = accs.front().size();
    std::vector<std::vector<double>> ranks(k, std::vector<double>(n, 0));
    for (std::size_t d = 0; d < n; ++d) {
        std::vector<std::size_t> order(k);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return accs[a][d] > accs[b][d]; });
        std::size_t i = 0;
        while (i < k) {
            std::size_t j = i;
            while (j + 1 < k && accs[order[j + 1]][d] == accs[order[i]][d]) ++j;
            const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
            for (std::size_t t = i; t <= j; ++t) ranks[order[t]][d] = mid;
            i = j + 1;
        }
    }
    return ranks;
}

std::vector<double> average_ranks(const std::vector<std::vector<double>>& accs) {
    const auto ranks = rank_matrix(accs);
    std::vector<double> avg(ranks.size(), 0);
    const double n = static_cast<double>(ranks.front().size());
    for (std::size_t c = 0; c < ranks.size(); ++c) {
        for (double r : ranks[c]) avg[c] += r;
        avg[c] /= n;
    }
    return avg;
}

double friedman_test(const std::vector<std::vector<double>>& ranks) {
    const std::size_t k = ranks.size();
    if (k < 2) throw std::invalid_argument("friedman_test: need at least 2 classifiers");
    const std::size_t n = ranks.front().size();
    if (n < 2) throw std::invalid_argument("friedman_test: need at least 2 datasets");

    double sum_sq = 0;
    for (std::size_t c = 0; c < k; ++c) {
        double mean_rank = 0;
        for (double r : ranks[c]) mean_rank += r;
        mean_rank /= static_cast<double>(n);
        sum_sq += mean_rank * mean_rank;
    }
    const double kk = static_cast<double>(k);
    const double stat = 12.0 * static_cast<double>(n) / (kk * (kk + 1.0)) *
                        (sum_sq - kk * (kk + 1.0) * (kk + 1.0) / 4.0);
    if (stat <= 0) return 1.0;
    const boost::math::chi_squared_distribution<double> chi2(kk - 1.0);
    return boost::math::cdf(boost::math::complement(chi2, stat));
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("wilcoxon_signed_rank: length mismatch");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0) diffs.push_back(d);
    }
    WilcoxonResult out;
    out.effective_n = static_cast<int>(diffs.size());
    if (diffs.empty()) {
        out.p = 1.0;
        out.warning = true;
        return out;
    }
    if (out.effective_n < 5) out.warning = true;

    const std::size_t n = diffs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::fabs(diffs[x]) < std::fabs(diffs[y]);
    });

    std::vector<double> rank(n, 0);
    double tie_correction = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && std::fabs(diffs[order[j + 1]]) == std::fabs(diffs[order[i]])) ++j;
        const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        const double t = static_cast<double>(j - i + 1);
        tie_correction += t * t * t - t;
        for (std::size_t u = i; u <= j; ++u) rank[order[u]] = mid;
        i = j + 1;
    }

    double w_plus = 0;
    for (std::size_t u = 0; u < n; ++u)
        if (diffs[u] > 0) w_plus += rank[u];

    const double nn = static_cast<double>(n);
    const double mu = nn * (nn + 1.0) / 4.0;
    const double sigma2 = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_correction / 48.0;
    if (sigma2 <= 0) {  // all differences tie to the same magnitude on tiny n
        out.p = 1.0;
        out.warning = true;
        return out;
    }
    const double z = (std::fabs(w_plus - mu) - 0.5) / std::sqrt(sigma2);
    out.p = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::max(0.0, z))));
    return out;
}

std::vector<std::vector<int>> holm_cliques(const std::vector<double>& avg_ranks,
                                           const std::vector<std::vector<double>>& pairwise_p,
                                           double alpha) {
    const std::size_t k = avg_ranks.size();
    struct Pair {
        double p;
        std::size_t a, b;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) pairs.push_back({pairwise_p[i][j], i, j});
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Pair& x, const Pair& y) { return x.p < y.p; });

    // Holm step-down: reject while p_(i) <= alpha / (m - i + 1), stop at the
    // first failure
    std::vector<std::vector<bool>> rejected(k, std::vector<bool>(k, false));
    const std::size_t m = pairs.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (pairs[i].p <= alpha / static_cast<double>(m - i)) {
            rejected[pairs[i].a][pairs[i].b] = rejected[pairs[i].b][pairs[i].a] = true;
        } else {
            break;
        }
    }

    // rank order, best (lowest average rank) first
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return avg_ranks[a] < avg_ranks[b]; });

    std::vector<std::vector<int>> cliques;
    std::size_t prev_end = 0;
    bool have_prev = false;
    for (std::size_t a = 0; a < k; ++a) {
        std::size_t b = a;
        auto extendable = [&](std::size_t next) {
            for (std::size_t t = a; t <= next - 1; ++t)
                if (rejected[order[t]][order[next]]) return false;
            return true;
        };
        while (b + 1 < k && extendable(b + 1)) ++b;
        if (!have_prev || b > prev_end) {
            std::vector<int> clique;
            for (std::size_t t = a; t <= b; ++t) clique.push_back(static_cast<int>(order[t]));
            cliques.push_back(std::move(clique));
            prev_end = b;
            have_prev = true;
        }
    }
    return cliques;
}

RankReport build_rank_report(const AccuracySummary& summary, double alpha) {
    const std::size_t k = summary.classifiers.size();
    RankReport report;
    const auto avg = average_ranks(summary.means);
    // a single dataset carries no evidence of rank differences
    report.friedman_p =
        summary.datasets.size() < 2 ? 1.0 : friedman_test(rank_matrix(summary.means));

    report.pairwise_p.assign(k, std::vector<double>(k, 1.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const auto res = wilcoxon_signed_rank(summary.means[i], summary.means[j]);
            report.pairwise_p[i][j] = report.pairwise_p[j][i] = res.p;
        }

    report.cliques = holm_cliques(avg, report.pairwise_p, alpha);

    // present classifiers in rank order
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return avg[a] < avg[b]; });
    std::vector<int> position(k);
    for (std::size_t i = 0; i < k; ++i) position[order[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < k; ++i) {
        report.classifiers.push_back(summary.classifiers[order[i]]);
        report.avg_ranks.push_back(avg[order[i]]);
    }
    for (auto& clique : report.cliques)
        for (auto& idx : clique) idx = position[idx];
    return report;
}

}  // namespace tsdict
