// Command-line frontend: transform inspection, training/prediction,
// resample experiments, the BOP/BOSS ablation, rank reports and synthetic
// data generation. Logs go to stderr; data outputs to named files or stdout.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "tsdict/bagging.hpp"
#include "tsdict/botsw.hpp"
#include "tsdict/classifiers.hpp"
#include "tsdict/data.hpp"
#include "tsdict/detail/textio.hpp"
#include "tsdict/eval.hpp"
#include "tsdict/parallel.hpp"
#include "tsdict/pyramid.hpp"

namespace {

using namespace tsdict;

struct DatasetPair {
    std::string name;
    LabeledDataset train;
    LabeledDataset test;
};

std::string find_split_file(const std::string& dir, const std::string& name,
                            const std::string& split) {
    for (const char* ext : {".txt", ".tsv", ".csv", ""}) {
        const auto candidate = dir + "/" + name + "_" + split + ext;
        if (std::filesystem::exists(candidate)) return candidate;
    }
    throw std::runtime_error("no " + split + " file for dataset " + name + " under " + dir);
}

// Accepts either a dataset directory (containing NAME_TRAIN.txt/NAME_TEST.txt)
// or a path prefix such as path/to/Coffee.
DatasetPair load_dataset(const std::string& path) {
    DatasetPair out;
    std::filesystem::path p(path);
    std::string dir, name;
    if (std::filesystem::is_directory(p)) {
        dir = p.string();
        name = p.filename().string();
    } else {
        dir = p.parent_path().empty() ? "." : p.parent_path().string();
        name = p.filename().string();
    }
    out.name = name;
    out.train = read_ucr(find_split_file(dir, name, "TRAIN"));
    out.test = read_ucr(find_split_file(dir, name, "TEST"));
    out.train.name = out.test.name = name;
    return out;
}

// Uniform handle over the four classifier families.
class AnyClassifier {
public:
    virtual ~AnyClassifier() = default;
    virtual void fit(const LabeledDataset& train) = 0;
    virtual double accuracy(const LabeledDataset& test) = 0;
    virtual std::string predict_label(const TimeSeries& query) = 0;
    virtual void save(const std::string& dir) = 0;
    virtual std::string params_summary() = 0;
};

struct GridOptions {
    std::vector<int> windows;
    std::vector<int> word_lengths;
    std::vector<int> alphas;
    std::size_t member_cap = 0;

    void apply(ParameterGrid& grid) const {
        if (!windows.empty()) grid.windows = windows;
        if (!word_lengths.empty()) grid.word_lengths = word_lengths;
        if (!alphas.empty()) grid.alphas = alphas;
    }
};

class DictionaryAny : public AnyClassifier {
public:
    explicit DictionaryAny(DictionaryConfig cfg) : clf_(std::move(cfg)) {}
    void fit(const LabeledDataset& train) override { clf_.fit(train); }
    double accuracy(const LabeledDataset& test) override { return clf_.accuracy(test); }
    std::string predict_label(const TimeSeries& query) override {
        return clf_.label_names()[clf_.predict(query)];
    }
    void save(const std::string& dir) override { clf_.save(dir); }
    std::string params_summary() override {
        std::ostringstream os;
        os << "members=" << clf_.members().size();
        if (!clf_.members().empty()) {
            const auto& best = clf_.members().front().params;
            os << ";best w=" << best.w << " l=" << best.l << " a=" << best.alpha
               << " p=" << (best.p ? 1 : 0);
        }
        return os.str();
    }

    DictionaryClassifier clf_;
};

class SpAny : public AnyClassifier {
public:
    SpAny(Measure measure, ParameterGrid grid) : clf_(measure, std::move(grid)) {}
    void fit(const LabeledDataset& train) override { clf_.fit(train); }
    double accuracy(const LabeledDataset& test) override { return clf_.accuracy(test); }
    std::string predict_label(const TimeSeries& query) override {
        return clf_.label_names()[clf_.predict(query)];
    }
    void save(const std::string& dir) override { clf_.save(dir); }
    std::string params_summary() override {
        std::ostringstream os;
        os << "members=" << clf_.members().size();
        if (!clf_.members().empty()) {
            const auto& best = clf_.members().front().params;
            os << ";best w=" << best.w << " l=" << best.l << " L=" << best.levels;
        }
        return os.str();
    }

    SpClassifier clf_;
};

class BotswAny : public AnyClassifier {
public:
    BotswAny(Measure measure, BotswGrid grid) : clf_(measure, std::move(grid)) {}
    void fit(const LabeledDataset& train) override { clf_.fit(train); }
    double accuracy(const LabeledDataset& test) override { return clf_.accuracy(test); }
    std::string predict_label(const TimeSeries& query) override {
        return clf_.label_names()[clf_.predict(query)];
    }
    void save(const std::string& dir) override { clf_.save(dir); }
    std::string params_summary() override {
        std::ostringstream os;
        os << "members=" << clf_.members().size();
        if (!clf_.members().empty()) {
            const auto& best = clf_.members().front().params;
            os << ";best nb=" << best.n_b << " a=" << best.a << " k=" << best.k;
        }
        return os.str();
    }

    BotswClassifier clf_;
};

class SaxVsmAny : public AnyClassifier {
public:
    explicit SaxVsmAny(ParameterGrid grid) : clf_(std::move(grid)) {}
    void fit(const LabeledDataset& train) override { clf_.fit(train); }
    double accuracy(const LabeledDataset& test) override { return clf_.accuracy(test); }
    std::string predict_label(const TimeSeries& query) override {
        return clf_.label_names()[clf_.predict(query)];
    }
    void save(const std::string& dir) override { clf_.save(dir); }
    std::string params_summary() override {
        std::ostringstream os;
        os << "w=" << clf_.model().w << " l=" << clf_.model().l << " a=" << clf_.model().alpha;
        return os.str();
    }

    SaxVsmClassifier clf_;
};

std::unique_ptr<AnyClassifier> make_classifier(const std::string& name, const GridOptions& opts) {
    if (name == "SP-HI" || name == "SP-BD") {
        ParameterGrid grid;
        opts.apply(grid);
        return std::make_unique<SpAny>(name == "SP-HI" ? Measure::HI : Measure::BossDist, grid);
    }
    if (name == "BOTSW-HI" || name == "BOTSW-BD") {
        BotswGrid grid;
        return std::make_unique<BotswAny>(name == "BOTSW-HI" ? Measure::HI : Measure::BossDist,
                                          grid);
    }
    if (name == "SAXVSM") {
        ParameterGrid grid;
        opts.apply(grid);
        return std::make_unique<SaxVsmAny>(grid);
    }
    DictionaryConfig cfg = variant_config(name);  // throws on unknown names
    opts.apply(cfg.grid);
    cfg.member_cap = opts.member_cap;
    return std::make_unique<DictionaryAny>(cfg);
}

int run_experiment(const std::vector<std::string>& classifiers,
                   const std::vector<std::string>& datasets, int resamples,
                   std::uint64_t seed_base, const std::string& out_csv, const GridOptions& opts) {
    // completed (classifier, dataset, resample) rows survive a rerun
    std::set<std::tuple<std::string, std::string, int>> done;
    if (std::filesystem::exists(out_csv)) {
        const auto existing = ResultTable::from_csv_file(out_csv);
        for (const auto& row : existing.rows)
            done.insert({row.classifier, row.dataset, row.resample});
    } else {
        std::ofstream header(out_csv);
        header << "classifier,dataset,resample,accuracy,train_time_s,params\n";
    }

    bool any_failure = false;
    for (const auto& dataset_path : datasets) {
        DatasetPair pair;
        try {
            pair = load_dataset(dataset_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            any_failure = true;
            continue;
        }
        for (const auto& clf_name : classifiers) {
            double sum_acc = 0;
            int ran = 0;
            for (int r = 0; r < resamples; ++r) {
                if (done.count({clf_name, pair.name, r})) continue;
                try {
                    const auto [train, test] =
                        stratified_resample(pair.train, pair.test, seed_base + r);
                    auto clf = make_classifier(clf_name, opts);
                    const auto start = std::chrono::steady_clock::now();
                    clf->fit(train);
                    const double train_s =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                            .count();
                    const double acc = clf->accuracy(test);
                    sum_acc += acc;
                    ++ran;
                    std::ofstream out(out_csv, std::ios::app);
                    out.precision(17);
                    out << clf_name << ',' << pair.name << ',' << r << ',' << acc << ','
                        << train_s << ',' << clf->params_summary() << '\n';
                } catch (const std::exception& e) {
                    std::cerr << "error: " << clf_name << " on " << pair.name << " resample " << r
                              << ": " << e.what() << "\n";
                    any_failure = true;
                }
            }
            if (ran > 0)
                std::cerr << clf_name << " on " << pair.name << ": mean accuracy "
                          << sum_acc / ran << " over " << ran << " new resample(s)\n";
        }
    }
    return any_failure ? 1 : 0;
}

int cmd_ranks(const std::string& results_csv, double alpha, const std::string& out_dir) {
    const auto table = ResultTable::from_csv_file(results_csv);
    const auto summary = summarize(table);
    const auto report = build_rank_report(summary, alpha);
    std::filesystem::create_directories(out_dir);

    {
        std::ostringstream os;
        os.precision(17);
        os << "classifier,avg_rank\n";
        for (std::size_t i = 0; i < report.classifiers.size(); ++i)
            os << report.classifiers[i] << ',' << report.avg_ranks[i] << '\n';
        detail::write_file(out_dir + "/ranks.csv", os.str());
    }
    {
        std::ostringstream os;
        os.precision(17);
        os << "friedman_p," << report.friedman_p << '\n';
        detail::write_file(out_dir + "/friedman.txt", os.str());
    }
    {
        std::ostringstream os;
        os.precision(17);
        os << "classifier";
        for (const auto& c : summary.classifiers) os << ',' << c;
        os << '\n';
        for (std::size_t i = 0; i < summary.classifiers.size(); ++i) {
            os << summary.classifiers[i];
            for (std::size_t j = 0; j < summary.classifiers.size(); ++j)
                os << ',' << report.pairwise_p[i][j];
            os << '\n';
        }
        detail::write_file(out_dir + "/pairwise_p.csv", os.str());
    }
    {
        // the textual counterpart of a critical-difference diagram: one bar
        // (clique) per line across the rank-ordered classifiers
        std::ostringstream os;
        os.precision(6);
        os << "rank order (best first):\n";
        for (std::size_t i = 0; i < report.classifiers.size(); ++i)
            os << "  " << i + 1 << ". " << report.classifiers[i] << " (avg rank "
               << report.avg_ranks[i] << ")\n";
        os << "cliques (no significant difference within a group, alpha=" << alpha << "):\n";
        for (const auto& clique : report.cliques) {
            os << " ";
            for (int idx : clique) os << ' ' << report.classifiers[idx];
            os << '\n';
        }
        detail::write_file(out_dir + "/cliques.txt", os.str());
    }
    std::cerr << "rank report written to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dictionary-based time series classification toolkit"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker threads (results are identical for any value)");

    // ---- bag
    auto* bag_cmd = app.add_subcommand("bag", "dump sliding-window bags for one dataset file");
    std::string bag_data, bag_out, bag_approx = "paa", bag_disc = "gaussian";
    BagConfig bag_cfg;
    bool bag_no_numerosity = false;
    bag_cmd->add_option("--data", bag_data, "UCR-format input file")->required();
    bag_cmd->add_option("--out", bag_out, "output bag file")->required();
    bag_cmd->add_option("--w", bag_cfg.w, "window length")->required();
    bag_cmd->add_option("--l", bag_cfg.l, "word length")->required();
    bag_cmd->add_option("--alpha", bag_cfg.alpha, "alphabet size");
    bag_cmd->add_flag("--p", bag_cfg.p, "drop the mean Fourier coefficient");
    bag_cmd->add_option("--approx", bag_approx, "paa or dft");
    bag_cmd->add_option("--disc", bag_disc, "gaussian or mcb");
    bag_cmd->add_flag("--no-numerosity", bag_no_numerosity, "count every window");

    // ---- train / predict
    auto* train_cmd = app.add_subcommand("train", "fit a classifier and save the model");
    std::string train_file, train_classifier = "BOSS", train_out;
    GridOptions grid_opts;
    train_cmd->add_option("--train", train_file, "UCR-format training file")->required();
    train_cmd->add_option("--classifier", train_classifier,
                          "BOP, BOP+FT, BOP+MCB, BOP+BD, BOP+Ens, BOSS, BOSS-FT, BOSS-MCB, "
                          "BOSS-BD, BOSS-Ens, SP-HI, SP-BD, BOTSW-HI, BOTSW-BD or SAXVSM");
    train_cmd->add_option("--out", train_out, "model output directory")->required();
    train_cmd->add_option("--windows", grid_opts.windows, "window grid override")->delimiter(',');
    train_cmd->add_option("--word-lengths", grid_opts.word_lengths, "word length grid override")
        ->delimiter(',');
    train_cmd->add_option("--alphas", grid_opts.alphas, "alphabet grid override")->delimiter(',');
    train_cmd->add_option("--member-cap", grid_opts.member_cap, "optional ensemble size cap");

    auto* predict_cmd = app.add_subcommand("predict", "classify a test file with a saved model");
    std::string model_dir, predict_file, predict_out;
    predict_cmd->add_option("--model", model_dir, "model directory")->required();
    predict_cmd->add_option("--test", predict_file, "UCR-format test file")->required();
    predict_cmd->add_option("--out", predict_out, "write predicted labels here");

    // ---- experiment / ablation
    auto* exp_cmd = app.add_subcommand("experiment", "resample experiments over a grid of cells");
    std::vector<std::string> exp_classifiers, exp_datasets;
    int exp_resamples = 1;
    std::uint64_t exp_seed_base = 0;
    std::string exp_out = "results.csv", exp_spec;
    exp_cmd->add_option("--spec", exp_spec, "JSON spec file (flags override its fields)");
    exp_cmd->add_option("--classifiers", exp_classifiers, "classifier names")->delimiter(',');
    exp_cmd->add_option("--datasets", exp_datasets, "dataset directories or prefixes")
        ->delimiter(',');
    exp_cmd->add_option("--resamples", exp_resamples, "stratified resamples per cell");
    exp_cmd->add_option("--seed-base", exp_seed_base, "seed of resample 0 (0 = original split)");
    exp_cmd->add_option("--out", exp_out, "results CSV (appended idempotently)");
    exp_cmd->add_option("--windows", grid_opts.windows, "window grid override")->delimiter(',');
    exp_cmd->add_option("--word-lengths", grid_opts.word_lengths, "word length grid override")
        ->delimiter(',');
    exp_cmd->add_option("--member-cap", grid_opts.member_cap, "optional ensemble size cap");

    auto* abl_cmd = app.add_subcommand("ablation", "run the ten BOP/BOSS component variants");
    std::vector<std::string> abl_datasets;
    int abl_resamples = 1;
    std::uint64_t abl_seed_base = 0;
    std::string abl_out = "ablation.csv";
    abl_cmd->add_option("--datasets", abl_datasets, "dataset directories or prefixes")
        ->required()
        ->delimiter(',');
    abl_cmd->add_option("--resamples", abl_resamples, "stratified resamples per cell");
    abl_cmd->add_option("--seed-base", abl_seed_base, "seed of resample 0");
    abl_cmd->add_option("--out", abl_out, "results CSV");

    // ---- ranks
    auto* ranks_cmd = app.add_subcommand("ranks", "rank report from a results CSV");
    std::string ranks_results, ranks_out = "ranks";
    double ranks_alpha = 0.05;
    ranks_cmd->add_option("--results", ranks_results, "results CSV")->required();
    ranks_cmd->add_option("--alpha", ranks_alpha, "Holm family-wise level");
    ranks_cmd->add_option("--out-dir", ranks_out, "report directory");

    // ---- generate
    auto* gen_cmd = app.add_subcommand("generate", "synthetic dictionary data");
    GeneratorParams gen;
    std::vector<int> gen_counts = {6, 2};
    std::string gen_out;
    gen_cmd->add_option("--out", gen_out, "output UCR file")->required();
    gen_cmd->add_option("--n-per-class", gen.n_per_class, "cases per class");
    gen_cmd->add_option("--length", gen.m, "series length");
    gen_cmd->add_option("--counts", gen_counts, "shapelets per class, k1,k2")->delimiter(',');
    gen_cmd->add_option("--noise", gen.noise_std, "noise standard deviation");
    gen_cmd->add_option("--seed", gen.seed, "generator seed");
    gen_cmd->add_option("--amplitude", gen.amplitude, "shapelet amplitude");
    gen_cmd->add_option("--shapelet-len", gen.shapelet_len, "shapelet length");

    CLI11_PARSE(app, argc, argv);
    set_threads(threads);

    try {
        if (*bag_cmd) {
            bag_cfg.approx = bag_approx == "dft" ? Approx::DFT : Approx::PAA;
            bag_cfg.disc = bag_disc == "mcb" ? Disc::MCB : Disc::Gaussian;
            bag_cfg.numerosity = !bag_no_numerosity;
            const auto data = read_ucr(bag_data);
            const auto bagged = bag_dataset(data, bag_cfg);
            detail::write_file(bag_out, bags_to_text(bagged.bags, bagged.labels));
            if (bagged.model) detail::write_file(bag_out + ".mcb", bagged.model->to_text());
            std::cerr << "wrote " << bagged.bags.size() << " bags to " << bag_out << "\n";
            return 0;
        }
        if (*train_cmd) {
            const auto train = read_ucr(train_file);
            auto clf = make_classifier(train_classifier, grid_opts);
            clf->fit(train);
            clf->save(train_out);
            std::cerr << "model (" << clf->params_summary() << ") saved to " << train_out << "\n";
            return 0;
        }
        if (*predict_cmd) {
            const auto test = read_ucr(predict_file);
            std::istringstream manifest(detail::read_file(model_dir + "/manifest.txt"));
            std::string kind;
            std::getline(manifest, kind);
            std::unique_ptr<AnyClassifier> clf;
            if (kind == "dictionary") {
                auto any = std::make_unique<DictionaryAny>(DictionaryConfig{});
                any->clf_ = DictionaryClassifier::load(model_dir);
                clf = std::move(any);
            } else if (kind == "sp") {
                auto any = std::make_unique<SpAny>(Measure::HI, ParameterGrid{});
                any->clf_ = SpClassifier::load(model_dir);
                clf = std::move(any);
            } else if (kind == "botsw") {
                auto any = std::make_unique<BotswAny>(Measure::HI, BotswGrid{});
                any->clf_ = BotswClassifier::load(model_dir);
                clf = std::move(any);
            } else if (kind == "saxvsm") {
                auto any = std::make_unique<SaxVsmAny>(ParameterGrid{});
                any->clf_ = SaxVsmClassifier::load(model_dir);
                clf = std::move(any);
            } else {
                throw std::runtime_error("unknown model kind: " + kind);
            }

            std::ostringstream preds;
            std::size_t correct = 0;
            for (std::size_t i = 0; i < test.size(); ++i) {
                const auto label = clf->predict_label(test.series[i]);
                preds << label << '\n';
                if (label == test.label_names[test.labels[i]]) ++correct;
            }
            if (!predict_out.empty()) detail::write_file(predict_out, preds.str());
            std::cout.precision(17);
            std::cout << static_cast<double>(correct) / static_cast<double>(test.size()) << "\n";
            return 0;
        }
        if (*exp_cmd) {
            if (!exp_spec.empty()) {
                const auto spec = nlohmann::json::parse(detail::read_file(exp_spec));
                if (exp_classifiers.empty() && spec.contains("classifiers"))
                    exp_classifiers = spec["classifiers"].get<std::vector<std::string>>();
                if (exp_datasets.empty() && spec.contains("datasets"))
                    exp_datasets = spec["datasets"].get<std::vector<std::string>>();
                if (spec.contains("resamples") && !exp_cmd->count("--resamples"))
                    exp_resamples = spec["resamples"].get<int>();
                if (spec.contains("seed_base") && !exp_cmd->count("--seed-base"))
                    exp_seed_base = spec["seed_base"].get<std::uint64_t>();
                if (spec.contains("output") && !exp_cmd->count("--out"))
                    exp_out = spec["output"].get<std::string>();
                if (spec.contains("threads") && !app.count("--threads"))
                    set_threads(spec["threads"].get<int>());
            }
            if (exp_classifiers.empty() || exp_datasets.empty())
                throw std::runtime_error("experiment needs classifiers and datasets");
            if (exp_resamples < 1) throw std::runtime_error("resamples must be >= 1");
            return run_experiment(exp_classifiers, exp_datasets, exp_resamples, exp_seed_base,
                                  exp_out, grid_opts);
        }
        if (*abl_cmd) {
            return run_experiment(variant_names(), abl_datasets, abl_resamples, abl_seed_base,
                                  abl_out, GridOptions{});
        }
        if (*ranks_cmd) {
            return cmd_ranks(ranks_results, ranks_alpha, ranks_out);
        }
        if (*gen_cmd) {
            if (gen_counts.size() != 2) throw std::runtime_error("--counts needs exactly k1,k2");
            gen.k1 = gen_counts[0];
            gen.k2 = gen_counts[1];
            const auto data = generate_dictionary_data(gen);
            write_ucr(data, gen_out);
            nlohmann::json sidecar = {
                {"n_per_class", gen.n_per_class}, {"length", gen.m},
                {"counts", {gen.k1, gen.k2}},     {"noise_std", gen.noise_std},
                {"seed", gen.seed},               {"amplitude", gen.amplitude},
                {"shapelet_len", gen.shapelet_len}};
            detail::write_file(gen_out + ".json", sidecar.dump(2) + "\n");
            std::cerr << "wrote " << data.size() << " series to " << gen_out << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
