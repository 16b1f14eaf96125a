#include "tsdict/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tsdict/rng.hpp"

namespace tsdict {

namespace {

std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> fields;
    if (delim == ' ') {
        std::istringstream is(line);
        std::string tok;
        while (is >> tok) fields.push_back(tok);
        return fields;
    }
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_value(const std::string& tok, const std::string& path, std::size_t lineno) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": non-numeric field '" +
                                 tok + "'");
    if (!std::isfinite(v))
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": non-finite value");
    return v;
}

}  // namespace

LabeledDataset read_ucr(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::vector<std::string> raw_labels;
    std::vector<TimeSeries> series;
    std::size_t lineno = 0;
    std::size_t expected = 0;
    char delim = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        if (delim == 0)
            delim = line.find(',') != std::string::npos ? ','
                  : line.find('\t') != std::string::npos ? '\t'
                                                         : ' ';
        const auto fields = split_fields(line, delim);
        if (fields.size() < 2)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": too few fields");
        if (expected == 0) expected = fields.size() - 1;
        if (fields.size() - 1 != expected)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(expected) + " values, got " +
                                     std::to_string(fields.size() - 1));
        parse_value(fields[0], path, lineno);  // label must be numeric
        raw_labels.push_back(fields[0]);
        TimeSeries s(expected);
        for (std::size_t i = 0; i < expected; ++i) s[i] = parse_value(fields[i + 1], path, lineno);
        series.push_back(std::move(s));
    }
    if (series.empty()) throw std::runtime_error(path + ": empty file");

    // map labels to contiguous 0-based ints, sorted by numeric value
    std::map<double, std::string> uniq;
    for (const auto& lab : raw_labels) uniq.emplace(std::strtod(lab.c_str(), nullptr), lab);
    std::map<double, int> index;
    LabeledDataset data;
    for (const auto& [value, text] : uniq) {
        index[value] = static_cast<int>(data.label_names.size());
        data.label_names.push_back(text);
    }
    data.series = std::move(series);
    data.labels.reserve(raw_labels.size());
    for (const auto& lab : raw_labels)
        data.labels.push_back(index.at(std::strtod(lab.c_str(), nullptr)));
    auto base = path.find_last_of("/\\");
    data.name = base == std::string::npos ? path : path.substr(base + 1);
    return data;
}

void write_ucr(const LabeledDataset& data, const std::string& path, char delim) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << data.label_names[data.labels[i]];
        for (double v : data.series[i]) out << delim << v;
        out << '\n';
    }
}

std::pair<LabeledDataset, LabeledDataset> stratified_resample(const LabeledDataset& train,
                                                              const LabeledDataset& test,
                                                              std::uint64_t seed) {
    if (seed == 0) return {train, test};

    // shared class space keyed by label name
    std::map<std::string, int> classes;
    for (const auto& n : train.label_names) classes.emplace(n, 0);
    for (const auto& n : test.label_names) classes.emplace(n, 0);
    std::vector<std::string> names;
    for (auto& [n, idx] : classes) {
        idx = static_cast<int>(names.size());
        names.push_back(n);
    }
    const int c = static_cast<int>(names.size());

    struct Case {
        const TimeSeries* series;
        int cls;
    };
    std::vector<std::vector<Case>> pool(c);
    std::vector<std::size_t> train_count(c, 0);
    for (std::size_t i = 0; i < train.size(); ++i) {
        const int k = classes.at(train.label_names[train.labels[i]]);
        pool[k].push_back({&train.series[i], k});
        ++train_count[k];
    }
    for (std::size_t i = 0; i < test.size(); ++i) {
        const int k = classes.at(test.label_names[test.labels[i]]);
        pool[k].push_back({&test.series[i], k});
    }
    for (int k = 0; k < c; ++k)
        if (pool[k].empty()) throw std::invalid_argument("stratified_resample: empty class pool");

    Rng rng(seed);
    LabeledDataset new_train, new_test;
    new_train.name = train.name;
    new_test.name = test.name;
    new_train.label_names = names;
    new_test.label_names = names;
    for (int k = 0; k < c; ++k) {
        std::vector<std::size_t> order(pool[k].size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(order);
        for (std::size_t i = 0; i < order.size(); ++i) {
            auto& dst = i < train_count[k] ? new_train : new_test;
            dst.series.push_back(*pool[k][order[i]].series);
            dst.labels.push_back(k);
        }
    }
    return {std::move(new_train), std::move(new_test)};
}

namespace {

std::vector<double> sine_shapelet(int len, double amplitude) {
    std::vector<double> s(len);
    for (int t = 0; t < len; ++t)
        s[t] = amplitude * std::sin(2.0 * std::numbers::pi * t / len);
    return s;
}

std::vector<double> head_and_shoulders_shapelet(int len, double amplitude) {
    // three positive lobes, middle largest
    const int first = len / 3;
    const int mid = len - 2 * first;
    const int lens[3] = {first, mid, first};
    const double amps[3] = {0.6 * amplitude, amplitude, 0.6 * amplitude};
    std::vector<double> s;
    s.reserve(len);
    for (int b = 0; b < 3; ++b)
        for (int t = 0; t < lens[b]; ++t)
            s.push_back(amps[b] * std::sin(std::numbers::pi * (t + 1) / (lens[b] + 1)));
    return s;
}

// uniformly chosen non-overlapping offsets with a 1-point guard gap
std::vector<std::size_t> place_intervals(Rng& rng, int k, int span, int m) {
    if (k == 0) return {};
    const int stride = span + 1;
    const long long slots = static_cast<long long>(m) + 1 - static_cast<long long>(k) * stride + k;
    if (slots < k) throw std::invalid_argument("generate_dictionary_data: infeasible packing");
    auto picks = rng.sample_sorted(static_cast<std::size_t>(k), static_cast<std::size_t>(slots));
    std::vector<std::size_t> offsets(k);
    for (int i = 0; i < k; ++i) offsets[i] = picks[i] + static_cast<std::size_t>(i) * (stride - 1);
    return offsets;
}

}  // namespace

LabeledDataset generate_dictionary_data(const GeneratorParams& params) {
    if (params.k1 == params.k2)
        throw std::invalid_argument("generate_dictionary_data: class counts must differ");
    if (params.k1 < 0 || params.k2 < 0 || params.n_per_class < 1 || params.shapelet_len < 2)
        throw std::invalid_argument("generate_dictionary_data: invalid parameters");
    const int kmax = std::max(params.k1, params.k2);
    if (static_cast<long long>(kmax) * params.shapelet_len > params.m)
        throw std::invalid_argument("generate_dictionary_data: infeasible packing");

    Rng rng(params.seed);
    LabeledDataset data;
    data.name = "dictionary_synth";
    data.label_names = {"0", "1"};

    for (int cls = 0; cls < 2; ++cls) {
        const int k = cls == 0 ? params.k1 : params.k2;
        for (int i = 0; i < params.n_per_class; ++i) {
            TimeSeries s(params.m);
            for (auto& v : s) v = params.noise_std * rng.normal();
            const auto offsets = place_intervals(rng, k, params.shapelet_len, params.m);
            for (auto off : offsets) {
                const bool use_sine = rng.uniform_index(2) == 0;
                const auto shape = use_sine
                                       ? sine_shapelet(params.shapelet_len, params.amplitude)
                                       : head_and_shoulders_shapelet(params.shapelet_len,
                                                                     params.amplitude);
                for (int t = 0; t < params.shapelet_len; ++t) s[off + t] += shape[t];
            }
            data.series.push_back(std::move(s));
            data.labels.push_back(cls);
        }
    }
    return data;
}

}  // namespace tsdict
