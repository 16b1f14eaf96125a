#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace tsdict {

/// Sparse key -> value container kept sorted by key with no zero entries.
/// Keys are packed word ids; values are counts (bags) or real weights.
template <class T>
struct SparseVec {
    std::vector<std::pair<std::uint64_t, T>> entries;

    void add(std::uint64_t key, T delta) {
        auto it = std::lower_bound(entries.begin(), entries.end(), key,
                                   [](const auto& e, std::uint64_t k) { return e.first < k; });
        if (it != entries.end() && it->first == key) {
            it->second += delta;
        } else {
            entries.insert(it, {key, delta});
        }
    }

    T get(std::uint64_t key) const {
        auto it = std::lower_bound(entries.begin(), entries.end(), key,
                                   [](const auto& e, std::uint64_t k) { return e.first < k; });
        return (it != entries.end() && it->first == key) ? it->second : T(0);
    }

    /// Sum of all stored values.
    double mass() const {
        double m = 0;
        for (const auto& [k, v] : entries) m += static_cast<double>(v);
        return m;
    }

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }

    bool operator==(const SparseVec& other) const { return entries == other.entries; }

    /// Sort by key and merge duplicates; drops zero values. Use after bulk
    /// appends into `entries`.
    void normalize() {
        std::sort(entries.begin(), entries.end());
        std::size_t out = 0;
        for (std::size_t i = 0; i < entries.size();) {
            std::uint64_t k = entries[i].first;
            T sum = T(0);
            while (i < entries.size() && entries[i].first == k) {
                sum += entries[i].second;
                ++i;
            }
            if (sum != T(0)) entries[out++] = {k, sum};
        }
        entries.resize(out);
    }
};

using SparseHistogram = SparseVec<std::uint32_t>;
using WeightedVector = SparseVec<double>;

/// Weighted copy of an integer histogram.
inline WeightedVector to_weighted(const SparseHistogram& h, double scale = 1.0) {
    WeightedVector v;
    v.entries.reserve(h.entries.size());
    for (const auto& [k, c] : h.entries) v.entries.push_back({k, scale * c});
    return v;
}

}  // namespace tsdict
