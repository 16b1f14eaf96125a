#pragma once

#include <span>
#include <string>
#include <vector>

namespace tsdict {

struct ResultRow {
    std::string classifier;
    std::string dataset;
    int resample = 0;
    double accuracy = 0;
};

/// Accuracy records, one per (classifier, dataset, resample). Extra CSV
/// columns beyond the first four are ignored on ingest.
struct ResultTable {
    std::vector<ResultRow> rows;

    static ResultTable from_csv(const std::string& text);
    static ResultTable from_csv_file(const std::string& path);
};

struct MeanAccuracy {
    double mean = 0;
    double stderr_value = 0;
    bool single_resample = false;  // stderr is 0 by convention, flagged
};

/// Arithmetic mean and standard error (sample sd / sqrt(n)) over resamples.
MeanAccuracy mean_accuracy(std::span<const double> values);

/// Per-cell means of a full (classifier x dataset) table; throws naming the
/// first missing cell if coverage is not rectangular.
struct AccuracySummary {
    std::vector<std::string> classifiers;
    std::vector<std::string> datasets;
    std::vector<std::vector<double>> means;    // [classifier][dataset]
    std::vector<std::vector<double>> stderrs;  // [classifier][dataset]
};

AccuracySummary summarize(const ResultTable& table);

/// Ranks per dataset: rank 1 is the highest accuracy, ties get mid-ranks.
std::vector<std::vector<double>> rank_matrix(const std::vector<std::vector<double>>& accs);

/// Mean rank per classifier over datasets.
std::vector<double> average_ranks(const std::vector<std::vector<double>>& accs);

/// Friedman chi-square test on the rank matrix [classifier][dataset];
/// returns the p-value against chi-square with K-1 degrees of freedom.
double friedman_test(const std::vector<std::vector<double>>& ranks);

struct WilcoxonResult {
    double p = 1.0;
    int effective_n = 0;  // pairs remaining after dropping zero differences
    bool warning = false;  // all-zero differences or too few pairs for the approximation
};

/// Two-sided Wilcoxon signed-rank test via the normal approximation with
/// tie and continuity corrections. Zero differences are dropped.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Holm step-down rejection over all classifier pairs, then maximal runs in
/// rank order with no internally rejected pair. Every classifier belongs to
/// at least one clique.
std::vector<std::vector<int>> holm_cliques(const std::vector<double>& avg_ranks,
                                           const std::vector<std::vector<double>>& pairwise_p,
                                           double alpha);

/// Full comparison pipeline over a summary: ranks, Friedman, pairwise
/// Wilcoxon over per-dataset means, Holm cliques.
struct RankReport {
    std::vector<std::string> classifiers;       // rank order, best first
    std::vector<double> avg_ranks;              // aligned with `classifiers`
    double friedman_p = 1.0;
    std::vector<std::vector<double>> pairwise_p;  // original classifier order
    std::vector<std::vector<int>> cliques;        // indices into `classifiers`
};

RankReport build_rank_report(const AccuracySummary& summary, double alpha);

}  // namespace tsdict
