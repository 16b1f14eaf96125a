#include "tsdict/rng.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace tsdict {

std::vector<std::size_t> Rng::sample_sorted(std::size_t k, std::size_t n) {
    if (k > n) throw std::invalid_argument("sample_sorted: k > n");
    // Floyd's algorithm: uniform k-subset in O(k) draws
    std::unordered_set<std::size_t> chosen;
    chosen.reserve(k * 2);
    for (std::size_t i = n - k; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(uniform_index(i + 1));
        chosen.insert(chosen.count(j) ? i : j);
    }
    std::vector<std::size_t> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace tsdict
