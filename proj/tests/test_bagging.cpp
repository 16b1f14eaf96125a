#include <map>
#include <stdexcept>

#include "doctest.h"
#include "tsdict/bagging.hpp"
#include "tsdict/rng.hpp"

using namespace tsdict;

namespace {

LabeledDataset two_series_fixture() {
    LabeledDataset d;
    d.series = {{0.31, 1.27, -0.48, -1.19, 0.57, 1.62, 2.21, 0.93, -0.11, -0.64},
                {2.13, 1.86, 0.92, -0.23, -1.41, -2.07, -1.38, 0.19, 1.47, 2.02}};
    d.labels = {0, 1};
    d.label_names = {"0", "1"};
    return d;
}

SparseHistogram make_bag(std::initializer_list<std::pair<std::uint64_t, std::uint32_t>> items) {
    SparseHistogram h;
    for (auto [k, c] : items) h.entries.push_back({k, c});
    return h;
}

// per-window reference path: approximate + discretise, no sliding reuse
std::vector<std::uint64_t> naive_words(const TimeSeries& s, const BagConfig& cfg,
                                       const BreakpointTable* table) {
    std::vector<std::uint64_t> keys;
    const auto gaussian = gaussian_breakpoints(cfg.alpha);
    for (int j = 0; j + cfg.w <= static_cast<int>(s.size()); ++j) {
        const auto window = std::span<const double>(s).subspan(j, cfg.w);
        if (cfg.approx == Approx::PAA && cfg.disc == Disc::Gaussian) {
            keys.push_back(sax_word(window, cfg.l, cfg.alpha).key);
        } else {
            const auto coeffs = approximate(window, cfg.approx, cfg.l, cfg.p);
            if (cfg.disc == Disc::MCB) {
                keys.push_back(mcb_discretise(coeffs, *table).key);
            } else {
                keys.push_back(encode_word(discretise(coeffs, gaussian), cfg.alpha));
            }
        }
    }
    return keys;
}

}  // namespace

TEST_CASE("hand-traced SAX bagging (PAA + Gaussian, w=4, l=2, alpha=4)") {
    const TimeSeries s = {1, 2, 3, 4, 3, 2, 1, 2, 3, 4};
    BagConfig cfg;
    cfg.w = 4;
    cfg.l = 2;
    cfg.alpha = 4;
    cfg.approx = Approx::PAA;
    cfg.disc = Disc::Gaussian;

    // windows trace to words [0,3],[0,3],[3,0],[3,0],[3,0],[0,3],[0,3]
    const auto keys = word_sequence(s, cfg);
    CHECK(keys == std::vector<std::uint64_t>{12, 12, 3, 3, 3, 12, 12});

    cfg.numerosity = true;
    CHECK(bag_series(s, cfg) == make_bag({{3, 1}, {12, 2}}));
    cfg.numerosity = false;
    CHECK(bag_series(s, cfg) == make_bag({{3, 3}, {12, 4}}));
}

TEST_CASE("hand-traced SFA bagging (DFT + MCB, w=4, l=2, alpha=2, p)") {
    const auto train = two_series_fixture();
    BagConfig cfg;
    cfg.w = 4;
    cfg.l = 2;
    cfg.alpha = 2;
    cfg.p = true;
    cfg.approx = Approx::DFT;
    cfg.disc = Disc::MCB;
    cfg.numerosity = true;

    const auto bagged = bag_dataset(train, cfg);
    REQUIRE(bagged.model.has_value());
    REQUIRE(bagged.model->rows.size() == 2);
    // equi-depth breakpoints of the pooled disjoint-window coefficients
    CHECK(bagged.model->rows[0][0] == doctest::Approx(-0.03).epsilon(1e-12));
    CHECK(bagged.model->rows[1][0] == doctest::Approx(-2.09).epsilon(1e-12));

    const auto keys0 = word_sequence(train.series[0], cfg, &*bagged.model);
    CHECK(keys0 == std::vector<std::uint64_t>{1, 3, 2, 2, 2, 1, 3});
    const auto keys1 = word_sequence(train.series[1], cfg, &*bagged.model);
    CHECK(keys1 == std::vector<std::uint64_t>{1, 1, 3, 3, 2, 2, 2});

    CHECK(bagged.bags[0] == make_bag({{1, 2}, {2, 1}, {3, 2}}));
    CHECK(bagged.bags[1] == make_bag({{1, 1}, {2, 1}, {3, 1}}));
}

TEST_CASE("window count and repeat suppression") {
    BagConfig cfg;
    cfg.w = 3;
    cfg.l = 3;
    cfg.alpha = 4;

    // m=5, w=3: exactly 3 windows
    const TimeSeries s = {1, 2, 3, 2, 1};
    CHECK(word_sequence(s, cfg).size() == 3);

    // every window of a strictly increasing ramp z-normalises identically,
    // so a single occurrence survives numerosity reduction
    const TimeSeries ramp = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    const auto keys = word_sequence(ramp, cfg);
    for (auto k : keys) CHECK(k == keys[0]);

    cfg.numerosity = true;
    const auto bag = bag_series(ramp, cfg);
    REQUIRE(bag.entries.size() == 1);
    CHECK(bag.entries[0].second == 1);

    cfg.numerosity = false;
    const auto bag_all = bag_series(ramp, cfg);
    REQUIRE(bag_all.entries.size() == 1);
    CHECK(bag_all.entries[0].second == 7);
}

TEST_CASE("numerosity never increases counts; equality iff no repeats") {
    Rng rng(29);
    for (int rep = 0; rep < 30; ++rep) {
        TimeSeries s(40);
        for (auto& v : s) v = rng.uniform(-2, 2);
        BagConfig cfg;
        cfg.w = 8;
        cfg.l = 4;
        cfg.alpha = 3;
        cfg.approx = Approx::PAA;

        cfg.numerosity = true;
        const auto reduced = bag_series(s, cfg);
        cfg.numerosity = false;
        const auto full = bag_series(s, cfg);

        std::uint64_t total_reduced = 0, total_full = 0;
        for (const auto& [k, c] : reduced.entries) total_reduced += c;
        for (const auto& [k, c] : full.entries) total_full += c;
        CHECK(total_reduced <= total_full);

        const auto keys = word_sequence(s, cfg);
        bool has_repeat = false;
        for (std::size_t j = 1; j < keys.size(); ++j) has_repeat |= keys[j] == keys[j - 1];
        CHECK((total_reduced == total_full) == !has_repeat);
    }
}

TEST_CASE("sliding kernels agree with the per-window reference path") {
    Rng rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        LabeledDataset data;
        for (int i = 0; i < 3; ++i) {
            TimeSeries s(50);
            for (auto& v : s) v = rng.uniform(-3, 3);
            data.series.push_back(std::move(s));
            data.labels.push_back(0);
        }
        data.label_names = {"0"};

        for (Approx approx : {Approx::PAA, Approx::DFT})
            for (Disc disc : {Disc::Gaussian, Disc::MCB}) {
                BagConfig cfg;
                cfg.w = 10 + static_cast<int>(rng.uniform_index(20));
                cfg.l = approx == Approx::PAA ? 5 : 6;
                cfg.alpha = 4;
                cfg.p = rng.uniform_index(2) == 0;
                cfg.approx = approx;
                cfg.disc = disc;
                const auto bagged = bag_dataset(data, cfg);
                const BreakpointTable* table = bagged.model ? &*bagged.model : nullptr;
                for (const auto& s : data.series)
                    CHECK(word_sequence(s, cfg, table) == naive_words(s, cfg, table));
            }
    }
}

TEST_CASE("bagging a training series with its own model reproduces its bag") {
    const auto train = two_series_fixture();
    BagConfig cfg;
    cfg.w = 4;
    cfg.l = 2;
    cfg.alpha = 2;
    cfg.p = false;
    cfg.approx = Approx::DFT;
    cfg.disc = Disc::MCB;
    const auto bagged = bag_dataset(train, cfg);
    for (std::size_t i = 0; i < train.size(); ++i)
        CHECK(bag_series(train.series[i], cfg, &*bagged.model) == bagged.bags[i]);
}

TEST_CASE("bag_dataset edge cases") {
    BagConfig cfg;
    cfg.w = 4;
    cfg.l = 2;
    cfg.alpha = 4;

    LabeledDataset empty;
    const auto out = bag_dataset(empty, cfg);
    CHECK(out.bags.empty());
    CHECK(!out.model.has_value());

    LabeledDataset one;
    one.series = {{1, 2, 3, 4, 5, 6}};
    one.labels = {0};
    one.label_names = {"0"};
    const auto single = bag_dataset(one, cfg);
    CHECK(single.bags.size() == 1);
    CHECK(single.bags[0] == bag_series(one.series[0], cfg));

    // Gaussian discretisation fits no model
    CHECK(!single.model.has_value());

    // MCB without a model is a configuration error
    cfg.disc = Disc::MCB;
    CHECK_THROWS_AS(bag_series(one.series[0], cfg, nullptr), std::invalid_argument);
}

TEST_CASE("bag text format round-trips") {
    const auto train = two_series_fixture();
    BagConfig cfg;
    cfg.w = 3;
    cfg.l = 3;
    cfg.alpha = 4;
    const auto bagged = bag_dataset(train, cfg);
    const auto text = bags_to_text(bagged.bags, bagged.labels);
    const auto [bags, labels] = bags_from_text(text);
    CHECK(bags == bagged.bags);
    CHECK(labels == bagged.labels);
}
