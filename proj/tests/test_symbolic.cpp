#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "tsdict/rng.hpp"
#include "tsdict/symbolic.hpp"

using namespace tsdict;

namespace {

// independent inverse-normal-CDF oracle: bisection on 0.5*erfc(-x/sqrt(2))
double normal_quantile_oracle(double p) {
    double lo = -10, hi = 10;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
        if (cdf < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

LabeledDataset series_only(std::vector<TimeSeries> series) {
    LabeledDataset d;
    d.series = std::move(series);
    d.labels.assign(d.series.size(), 0);
    d.label_names = {"0"};
    return d;
}

}  // namespace

TEST_CASE("paa block means and identity") {
    const std::vector<double> w1 = {1, 1, 1, 1, 3, 3, 3, 3};
    CHECK(paa(w1, 2) == std::vector<double>{1, 3});

    const std::vector<double> w2 = {5, 7, 5, 7};
    CHECK(paa(w2, 4) == std::vector<double>{5, 7, 5, 7});

    const std::vector<double> w3 = {0, 2, 4, 6};
    CHECK(paa(w3, 2) == std::vector<double>{1, 5});
}

TEST_CASE("paa fractional chunk boundaries") {
    // w=5, l=2: chunks [0,2.5) and [2.5,5); the middle sample splits evenly
    const std::vector<double> w = {2, 4, 6, 8, 10};
    const auto out = paa(w, 2);
    CHECK(out[0] == doctest::Approx((2 + 4 + 0.5 * 6) / 2.5).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx((0.5 * 6 + 8 + 10) / 2.5).epsilon(1e-12));
}

TEST_CASE("paa rejects bad word lengths") {
    const std::vector<double> w = {1, 2, 3};
    CHECK_THROWS_AS(paa(w, 4), std::invalid_argument);
    CHECK_THROWS_AS(paa(w, 0), std::invalid_argument);
}

TEST_CASE("paa properties: identity at l=w, constant stays constant") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> w(8);
        for (auto& v : w) v = rng.uniform(-5, 5);
        const auto out = paa(w, 8);
        for (int i = 0; i < 8; ++i) CHECK(out[i] == doctest::Approx(w[i]).epsilon(1e-12));
    }
    const std::vector<double> c(12, 2.5);
    for (int l : {1, 2, 3, 4, 6, 12})
        for (double v : paa(c, l)) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("gaussian breakpoints against the quantile oracle") {
    CHECK(gaussian_breakpoints(2) == std::vector<double>{0.0});

    const auto b4 = gaussian_breakpoints(4);
    CHECK(b4[0] == doctest::Approx(-0.6745).epsilon(1e-3));
    CHECK(b4[1] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(b4[2] == doctest::Approx(0.6745).epsilon(1e-3));

    const auto b3 = gaussian_breakpoints(3);
    CHECK(b3[0] == doctest::Approx(-0.4307).epsilon(1e-3));
    CHECK(b3[1] == doctest::Approx(0.4307).epsilon(1e-3));

    for (int alpha : {2, 3, 4, 5, 8, 13}) {
        const auto bps = gaussian_breakpoints(alpha);
        for (int i = 1; i < alpha; ++i)
            CHECK(bps[i - 1] ==
                  doctest::Approx(normal_quantile_oracle(static_cast<double>(i) / alpha))
                      .epsilon(1e-10));
        // antisymmetry
        for (int i = 0; i < alpha - 1; ++i)
            CHECK(bps[i] == doctest::Approx(-bps[alpha - 2 - i]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gaussian_breakpoints(1), std::invalid_argument);
}

TEST_CASE("sax word degenerate and boundary conventions") {
    // constant window: degenerate z-norm maps to 0, bin 1 under alpha=4
    const std::vector<double> constant = {3, 3, 3, 3};
    CHECK(sax_word(constant, 2, 4).symbols == std::vector<int>{1, 1});

    // PAA of +-1 after z-norm falls beyond the outer breakpoints
    const std::vector<double> step = {-1, -1, 1, 1};
    CHECK(sax_word(step, 2, 4).symbols == std::vector<int>{0, 3});

    // bin lookup at -0.5/+0.5 against the alpha=4 breakpoints
    const std::vector<double> values = {-0.5, 0.5};
    CHECK(discretise(values, gaussian_breakpoints(4)) == std::vector<int>{1, 2});
}

TEST_CASE("dft_truncate fixtures") {
    const std::vector<double> constant(8, 3.7);
    for (double v : dft_truncate(constant, 4, true)) CHECK(v == doctest::Approx(0.0).epsilon(1e-9));

    std::vector<double> cosine(8);
    for (int j = 0; j < 8; ++j) cosine[j] = std::cos(2.0 * 3.14159265358979323846 * j / 8);
    const auto q = dft_truncate(cosine, 2, true);
    CHECK(q[0] == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(q[1] == doctest::Approx(0.0).epsilon(1e-9));

    // without p the mean coefficient leads and its imaginary part is 0
    const std::vector<double> w = {1, 2, 3, 4};
    const auto q0 = dft_truncate(w, 2, false);
    CHECK(q0[0] == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(q0[1] == 0.0);

    CHECK_THROWS_AS(dft_truncate(w, 3, true), std::invalid_argument);
    CHECK_THROWS_AS(dft_truncate(w, 8, true), std::invalid_argument);  // l/2 + 1 > w
}

TEST_CASE("dft_truncate offset invariance and linearity") {
    Rng rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        const int w = 8 + static_cast<int>(rng.uniform_index(24));
        std::vector<double> x(w), y(w), shifted(w), combo(w);
        for (int j = 0; j < w; ++j) {
            x[j] = rng.uniform(-3, 3);
            y[j] = rng.uniform(-3, 3);
            shifted[j] = x[j] + 11.25;
            combo[j] = 2.0 * x[j] - 0.5 * y[j];
        }
        const auto qx = dft_truncate(x, 8, true);
        const auto qs = dft_truncate(shifted, 8, true);
        const auto qy = dft_truncate(y, 8, true);
        const auto qc = dft_truncate(combo, 8, true);
        for (int i = 0; i < 8; ++i) {
            CHECK(std::fabs(qs[i] - qx[i]) <= 1e-9);
            CHECK(std::fabs(qc[i] - (2.0 * qx[i] - 0.5 * qy[i])) <= 1e-9);
        }
    }
}

TEST_CASE("mcb_fit equi-depth ranks") {
    // disjoint w=2 windows with p=false make Re q0 the window sum: pooled
    // coefficient values are exactly {1..8}
    const auto train = series_only({{0.5, 0.5, 1, 1}, {1.5, 1.5, 2, 2}, {2.5, 2.5, 3, 3},
                                    {3.5, 3.5, 4, 4}});
    const auto table = mcb_fit(train, 2, 2, 4, false);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0] == std::vector<double>{2, 4, 6});
    // Im q0 is identically zero: degenerate all-equal pool
    CHECK(table.rows[1] == std::vector<double>{0, 0, 0});

    // degenerate row sends every value to the last bin not strictly below it
    const auto word = mcb_discretise(std::vector<double>{5.0, 0.0}, table);
    CHECK(word.symbols == std::vector<int>{2, 0});

    // alpha=2 with pooled {0, 10}: rank ceil(n/2) picks the lower value
    const auto train2 = series_only({{0.0, 0.0, 5.0, 5.0}});
    const auto table2 = mcb_fit(train2, 2, 2, 2, false);
    CHECK(table2.rows[0] == std::vector<double>{0.0});

    CHECK_THROWS_AS(mcb_fit(LabeledDataset{}, 2, 2, 4, false), std::invalid_argument);
}

TEST_CASE("mcb_fit equi-depth occupancy over random pools") {
    Rng rng(23);
    for (int rep = 0; rep < 100; ++rep) {
        const int w = 4 + static_cast<int>(rng.uniform_index(5));
        const int alpha = 2 + static_cast<int>(rng.uniform_index(5));
        std::vector<TimeSeries> series(6);
        for (auto& s : series) {
            s.resize(static_cast<std::size_t>(w) * (2 + rng.uniform_index(3)));
            for (auto& v : s) v = rng.uniform(-10, 10);
        }
        auto train = series_only(series);
        const auto table = mcb_fit(train, w, 4, alpha, true);

        // recompute the pool with the public approximation and bin it
        std::size_t rows_checked = 0;
        for (std::size_t row = 0; row < table.rows.size(); ++row) {
            std::vector<double> pool;
            for (const auto& s : train.series)
                for (int off = 0; off + w <= static_cast<int>(s.size()); off += w)
                    pool.push_back(
                        approximate(std::span<const double>(s).subspan(off, w), Approx::DFT, 4,
                                    true)[row]);
            // duplicate pooled values are the degenerate ties the contract excludes
            auto sorted = pool;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
            std::vector<int> occupancy(alpha, 0);
            for (double v : pool) {
                int bin = 0;
                for (double b : table.rows[row])
                    if (b < v) ++bin;
                occupancy[bin]++;
            }
            ++rows_checked;
            const auto [lo, hi] = std::minmax_element(occupancy.begin(), occupancy.end());
            CHECK(*hi - *lo <= 1);
        }
        CHECK(rows_checked > 0);  // random continuous data should never tie
    }
}

TEST_CASE("mcb_discretise conventions") {
    BreakpointTable table;
    table.rows = {{2, 4, 6}};
    CHECK(mcb_discretise(std::vector<double>{5.0}, table).symbols == std::vector<int>{2});
    CHECK(mcb_discretise(std::vector<double>{2.0}, table).symbols == std::vector<int>{0});
    CHECK(mcb_discretise(std::vector<double>{9.0}, table).symbols == std::vector<int>{3});
    CHECK_THROWS_AS(mcb_discretise(std::vector<double>{1.0, 2.0}, table), std::invalid_argument);
}

TEST_CASE("mcb_discretise is monotone per coordinate") {
    BreakpointTable table;
    table.rows = {{-1.5, 0.25, 3}, {0, 0, 1}};
    Rng rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        const double a = rng.uniform(-4, 4);
        const double b = a + rng.uniform(0, 3);
        const double other = rng.uniform(-2, 2);
        const auto w1 = mcb_discretise(std::vector<double>{a, other}, table);
        const auto w2 = mcb_discretise(std::vector<double>{b, other}, table);
        CHECK(w2.symbols[0] >= w1.symbols[0]);
        CHECK(w2.symbols[1] == w1.symbols[1]);
    }
}

TEST_CASE("word keys round-trip") {
    Rng rng(17);
    for (int rep = 0; rep < 500; ++rep) {
        const int alpha = 2 + static_cast<int>(rng.uniform_index(15));  // 2..16
        int max_l = 1;
        unsigned __int128 space = alpha;
        while (max_l < 16 && space * alpha <= (static_cast<unsigned __int128>(1) << 64)) {
            space *= alpha;
            ++max_l;
        }
        const int l = 1 + static_cast<int>(rng.uniform_index(max_l));
        std::vector<int> symbols(l);
        for (auto& s : symbols) s = static_cast<int>(rng.uniform_index(alpha));
        CHECK(decode_word(encode_word(symbols, alpha), l, alpha) == symbols);
    }
    CHECK_THROWS_AS(check_word_space(17, 16), std::invalid_argument);
}

TEST_CASE("breakpoint table text round-trip") {
    const auto train = series_only({{0.31, 1.27, -0.48, -1.19, 0.57, 1.62, 2.21, 0.93}});
    const auto table = mcb_fit(train, 4, 2, 2, true);
    const auto back = BreakpointTable::from_text(table.to_text());
    REQUIRE(back.rows.size() == table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        for (std::size_t j = 0; j < table.rows[i].size(); ++j)
            CHECK(back.rows[i][j] == table.rows[i][j]);  // 17 digits: exact
}
