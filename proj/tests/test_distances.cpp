#include <stdexcept>
#include "doctest.h"
#include "tsdict/distances.hpp"
#include "tsdict/rng.hpp"

using namespace tsdict;

namespace {

SparseHistogram make_bag(std::initializer_list<std::pair<std::uint64_t, std::uint32_t>> items) {
    SparseHistogram h;
    for (auto [k, c] : items) h.entries.push_back({k, c});
    h.normalize();
    return h;
}

SparseHistogram random_bag(Rng& rng) {
    SparseHistogram h;
    const int n = 1 + static_cast<int>(rng.uniform_index(12));
    for (int i = 0; i < n; ++i)
        h.add(rng.uniform_index(30), 1 + static_cast<std::uint32_t>(rng.uniform_index(9)));
    return h;
}

}  // namespace

TEST_CASE("euclidean_sq examples") {
    CHECK(euclidean_sq(make_bag({{7, 2}}), make_bag({{7, 2}})) == 0);
    CHECK(euclidean_sq(make_bag({{7, 2}}), make_bag({{9, 3}})) == 13);
    CHECK(euclidean_sq(make_bag({{7, 2}, {9, 1}}), make_bag({{7, 1}, {9, 5}})) == 17);
}

TEST_CASE("boss_distance asymmetry and zero-skip") {
    const auto a = make_bag({{7, 2}});
    const auto b = make_bag({{7, 1}, {9, 5}});
    CHECK(boss_distance(a, b) == 1);   // key 9 ignored: absent from the test bag
    CHECK(boss_distance(b, a) == 26);  // 1 + 25
    CHECK(boss_distance(SparseHistogram{}, b) == 0);
}

TEST_CASE("histogram_intersection examples") {
    const auto a = make_bag({{0, 1}, {1, 3}, {2, 2}});
    const auto b = make_bag({{0, 2}, {1, 1}, {2, 2}});
    CHECK(histogram_intersection(a, b) == 4);
    CHECK(histogram_intersection(a, a) == a.mass());
    CHECK(histogram_intersection(make_bag({{1, 4}}), make_bag({{2, 4}})) == 0);

    WeightedVector neg;
    neg.entries = {{0, -1.0}};
    WeightedVector pos;
    pos.entries = {{0, 1.0}};
    CHECK_THROWS_AS(histogram_intersection(neg, pos), std::invalid_argument);
}

TEST_CASE("cosine_similarity examples") {
    WeightedVector a, b;
    a.entries = {{1, 0.4}, {5, 1.2}};
    CHECK(cosine_similarity(a, a) == doctest::Approx(1.0).epsilon(1e-12));

    b.entries = {{2, 3.0}};
    CHECK(cosine_similarity(a, b) == doctest::Approx(0.0).epsilon(1e-12));

    WeightedVector x, y;
    x.entries = {{1, 1.0}};
    y.entries = {{1, 1.0}, {2, 1.0}};
    CHECK(cosine_similarity(x, y) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    WeightedVector zero;
    CHECK_THROWS_AS(cosine_similarity(zero, a), std::invalid_argument);
}

TEST_CASE("distance axioms over random sparse bags") {
    Rng rng(41);
    for (int rep = 0; rep < 1000; ++rep) {
        const auto a = random_bag(rng);
        const auto b = random_bag(rng);
        CHECK(euclidean_sq(a, b) == euclidean_sq(b, a));
        CHECK(histogram_intersection(a, b) == histogram_intersection(b, a));
        CHECK(boss_distance(a, b) <= euclidean_sq(a, b));
        CHECK(histogram_intersection(a, b) <= std::min(a.mass(), b.mass()));
        CHECK(histogram_intersection(a, a) == a.mass());
    }
}

TEST_CASE("measures are invariant to consistent key relabeling") {
    Rng rng(43);
    for (int rep = 0; rep < 50; ++rep) {
        const auto a = random_bag(rng);
        const auto b = random_bag(rng);
        // strictly monotone key map preserves ordering, hence all merges
        auto remap = [](const SparseHistogram& h) {
            SparseHistogram out;
            for (const auto& [k, c] : h.entries) out.entries.push_back({k * 7 + 3, c});
            return out;
        };
        const auto a2 = remap(a), b2 = remap(b);
        CHECK(euclidean_sq(a, b) == euclidean_sq(a2, b2));
        CHECK(boss_distance(a, b) == boss_distance(a2, b2));
        CHECK(histogram_intersection(a, b) == histogram_intersection(a2, b2));
    }
}

TEST_CASE("measure comparator semantics") {
    CHECK(closer(Measure::Euclid, 1.0, 2.0));
    CHECK(closer(Measure::BossDist, 1.0, 2.0));
    CHECK(closer(Measure::HI, 2.0, 1.0));
    CHECK(closer(Measure::Cosine, 0.9, 0.1));
    CHECK(measure_from_name(measure_name(Measure::BossDist)) == Measure::BossDist);
}
