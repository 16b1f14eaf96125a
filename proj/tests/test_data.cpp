#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "tsdict/data.hpp"
#include "tsdict/rng.hpp"

using namespace tsdict;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
    const auto path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << content;
    return path;
}

// multiset of (label-name, series) pairs for pool-conservation checks
std::multiset<std::pair<std::string, TimeSeries>> pool_of(const LabeledDataset& a,
                                                          const LabeledDataset& b) {
    std::multiset<std::pair<std::string, TimeSeries>> pool;
    for (std::size_t i = 0; i < a.size(); ++i)
        pool.insert({a.label_names[a.labels[i]], a.series[i]});
    for (std::size_t i = 0; i < b.size(); ++i)
        pool.insert({b.label_names[b.labels[i]], b.series[i]});
    return pool;
}

}  // namespace

TEST_CASE("read_ucr parses comma, tab and space delimiters") {
    const auto comma = temp_file("tsdict_comma.txt", "1,0.5,0.6\n2,0.1,0.2\n");
    const auto d1 = read_ucr(comma);
    CHECK(d1.size() == 2);
    CHECK(d1.length() == 2);
    CHECK(d1.labels == std::vector<int>{0, 1});
    CHECK(d1.label_names == std::vector<std::string>{"1", "2"});
    CHECK(d1.series[0] == TimeSeries{0.5, 0.6});

    const auto tab = temp_file("tsdict_tab.txt", "1\t0.5\t0.6\n2\t0.1\t0.2\n");
    const auto d2 = read_ucr(tab);
    CHECK(d2.series == d1.series);
    CHECK(d2.labels == d1.labels);

    const auto space = temp_file("tsdict_space.txt", "1 0.5 0.6\n2 0.1 0.2\n");
    const auto d3 = read_ucr(space);
    CHECK(d3.series == d1.series);

    std::remove(comma.c_str());
    std::remove(tab.c_str());
    std::remove(space.c_str());
}

TEST_CASE("read_ucr rejects malformed input with line numbers") {
    const auto ragged = temp_file("tsdict_ragged.txt", "1,0.5,0.6\n2,0.1\n");
    CHECK_THROWS_WITH_AS(read_ucr(ragged), doctest::Contains(":2:"), std::runtime_error);

    const auto nonnum = temp_file("tsdict_nonnum.txt", "1,0.5,abc\n");
    CHECK_THROWS_AS(read_ucr(nonnum), std::runtime_error);

    const auto nan = temp_file("tsdict_nan.txt", "1,0.5,nan\n");
    CHECK_THROWS_AS(read_ucr(nan), std::runtime_error);

    const auto empty = temp_file("tsdict_empty.txt", "");
    CHECK_THROWS_AS(read_ucr(empty), std::runtime_error);

    CHECK_THROWS_AS(read_ucr("/nonexistent/really_not_here.txt"), std::runtime_error);

    std::remove(ragged.c_str());
    std::remove(nonnum.c_str());
    std::remove(nan.c_str());
    std::remove(empty.c_str());
}

TEST_CASE("ucr write/read round-trips to 17 significant digits") {
    Rng rng(141);
    LabeledDataset d;
    d.label_names = {"-1", "3"};
    for (int i = 0; i < 5; ++i) {
        TimeSeries s(7);
        for (auto& v : s) v = rng.normal() * 1e3;
        d.series.push_back(std::move(s));
        d.labels.push_back(i % 2);
    }
    const auto path = (std::filesystem::temp_directory_path() / "tsdict_roundtrip.txt").string();
    write_ucr(d, path);
    const auto back = read_ucr(path);
    REQUIRE(back.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(back.series[i] == d.series[i]);
        CHECK(back.label_names[back.labels[i]] == d.label_names[d.labels[i]]);
    }
    std::remove(path.c_str());
}

TEST_CASE("stratified resample conventions") {
    Rng rng(143);
    LabeledDataset train, test;
    train.label_names = test.label_names = {"1", "2"};
    for (int i = 0; i < 12; ++i) {
        TimeSeries s(5);
        for (auto& v : s) v = rng.uniform(-1, 1);
        if (i < 8) {
            train.series.push_back(s);
            train.labels.push_back(i % 2);
        } else {
            test.series.push_back(s);
            test.labels.push_back(i % 2);
        }
    }

    // seed 0: the original split, untouched
    const auto [t0, s0] = stratified_resample(train, test, 0);
    CHECK(t0.series == train.series);
    CHECK(t0.labels == train.labels);
    CHECK(s0.series == test.series);

    // any seed preserves per-class counts and the combined pool
    for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
        const auto [t, s] = stratified_resample(train, test, seed);
        std::map<int, int> train_counts, orig_counts;
        for (int lab : t.labels) train_counts[lab]++;
        for (int lab : train.labels) orig_counts[lab]++;
        CHECK(train_counts == orig_counts);
        CHECK(t.size() == train.size());
        CHECK(s.size() == test.size());
        CHECK(pool_of(t, s) == pool_of(train, test));

        const auto [t2, s2] = stratified_resample(train, test, seed);
        CHECK(t2.series == t.series);  // determinism
        CHECK(s2.series == s.series);
    }
}

TEST_CASE("dictionary data generator") {
    GeneratorParams params;
    params.n_per_class = 4;
    params.m = 200;
    params.k1 = 5;
    params.k2 = 1;
    params.noise_std = 0.0;
    params.seed = 7;

    const auto data = generate_dictionary_data(params);
    REQUIRE(data.size() == 8);
    CHECK(data.length() == 200);

    // noiseless series: count maximal nonzero runs, one per embedded shapelet
    for (std::size_t i = 0; i < data.size(); ++i) {
        int runs = 0;
        bool in_run = false;
        for (double v : data.series[i]) {
            const bool nz = v != 0.0;
            if (nz && !in_run) ++runs;
            in_run = nz;
        }
        CHECK(runs == (data.labels[i] == 0 ? 5 : 1));
    }

    // k2 = 0 with zero noise gives identically zero class-1 series
    params.k2 = 0;
    const auto zeros = generate_dictionary_data(params);
    for (std::size_t i = 0; i < zeros.size(); ++i)
        if (zeros.labels[i] == 1)
            for (double v : zeros.series[i]) CHECK(v == 0.0);

    // reproducibility
    params.k2 = 1;
    params.noise_std = 1.0;
    const auto a = generate_dictionary_data(params);
    const auto b = generate_dictionary_data(params);
    CHECK(a.series == b.series);

    // invalid parameter combinations
    params.k1 = params.k2 = 2;
    CHECK_THROWS_AS(generate_dictionary_data(params), std::invalid_argument);
    params.k1 = 9;
    params.k2 = 1;
    params.m = 200;  // 9 shapelets of 29 do not fit in 200 points
    CHECK_THROWS_AS(generate_dictionary_data(params), std::invalid_argument);
}
