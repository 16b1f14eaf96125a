#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tsdict/sparse.hpp"

namespace tsdict {

/// Histogram comparison measures. Euclid and BossDist are distances
/// (smaller is closer); HI and Cosine are similarities (larger is closer).
enum class Measure { Euclid, BossDist, HI, Cosine };

inline bool is_similarity(Measure m) { return m == Measure::HI || m == Measure::Cosine; }

/// True if score a is strictly closer than score b under the measure.
inline bool closer(Measure m, double a, double b) { return is_similarity(m) ? a > b : a < b; }

inline double worst_score(Measure m) {
    return is_similarity(m) ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
}

std::string measure_name(Measure m);
Measure measure_from_name(const std::string& name);

/// Sum of squared differences over the union of keys; missing keys read as 0.
template <class T>
double euclidean_sq(const SparseVec<T>& a, const SparseVec<T>& b) {
    double sum = 0;
    std::size_t i = 0, j = 0;
    const auto& ea = a.entries;
    const auto& eb = b.entries;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].first == eb[j].first) {
            const double d = static_cast<double>(ea[i].second) - static_cast<double>(eb[j].second);
            sum += d * d;
            ++i, ++j;
        } else if (ea[i].first < eb[j].first) {
            const double d = static_cast<double>(ea[i].second);
            sum += d * d;
            ++i;
        } else {
            const double d = static_cast<double>(eb[j].second);
            sum += d * d;
            ++j;
        }
    }
    for (; i < ea.size(); ++i) sum += static_cast<double>(ea[i].second) * ea[i].second;
    for (; j < eb.size(); ++j) sum += static_cast<double>(eb[j].second) * eb[j].second;
    return sum;
}

/// Non-symmetric BOSS distance: squared differences only over keys present
/// (value > 0) in the test histogram.
template <class T>
double boss_distance(const SparseVec<T>& test, const SparseVec<T>& train) {
    double sum = 0;
    std::size_t j = 0;
    const auto& et = test.entries;
    const auto& er = train.entries;
    for (std::size_t i = 0; i < et.size(); ++i) {
        if (!(et[i].second > T(0))) continue;
        while (j < er.size() && er[j].first < et[i].first) ++j;
        const double other =
            (j < er.size() && er[j].first == et[i].first) ? static_cast<double>(er[j].second) : 0.0;
        const double d = static_cast<double>(et[i].second) - other;
        sum += d * d;
    }
    return sum;
}

/// Histogram intersection similarity: sum of min over the union of keys.
template <class T>
double histogram_intersection(const SparseVec<T>& a, const SparseVec<T>& b) {
    for (const auto& [k, v] : a.entries)
        if (v < T(0)) throw std::invalid_argument("histogram_intersection: negative entry");
    for (const auto& [k, v] : b.entries)
        if (v < T(0)) throw std::invalid_argument("histogram_intersection: negative entry");
    double sum = 0;
    std::size_t i = 0, j = 0;
    const auto& ea = a.entries;
    const auto& eb = b.entries;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].first == eb[j].first) {
            sum += std::min(static_cast<double>(ea[i].second), static_cast<double>(eb[j].second));
            ++i, ++j;
        } else if (ea[i].first < eb[j].first) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum;
}

template <class T>
double cosine_similarity(const SparseVec<T>& a, const SparseVec<T>& b) {
    double dot = 0, na = 0, nb = 0;
    for (const auto& [k, v] : a.entries) na += static_cast<double>(v) * v;
    for (const auto& [k, v] : b.entries) nb += static_cast<double>(v) * v;
    if (na == 0 || nb == 0) throw std::invalid_argument("cosine_similarity: zero-norm vector");
    std::size_t i = 0, j = 0;
    const auto& ea = a.entries;
    const auto& eb = b.entries;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].first == eb[j].first) {
            dot += static_cast<double>(ea[i].second) * static_cast<double>(eb[j].second);
            ++i, ++j;
        } else if (ea[i].first < eb[j].first) {
            ++i;
        } else {
            ++j;
        }
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

/// Dispatch on the measure; the first argument is the test side for BossDist.
template <class T>
double evaluate_measure(Measure m, const SparseVec<T>& test, const SparseVec<T>& ref) {
    switch (m) {
        case Measure::Euclid: return euclidean_sq(test, ref);
        case Measure::BossDist: return boss_distance(test, ref);
        case Measure::HI: return histogram_intersection(test, ref);
        case Measure::Cosine: return cosine_similarity(test, ref);
    }
    throw std::logic_error("unknown measure");
}

}  // namespace tsdict
