#include "tsdict/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace tsdict {

namespace {
constexpr double kDegenerateStd = 1e-8;
}

void check_word_space(int l, int alpha) {
    if (l < 1) throw std::invalid_argument("word length must be >= 1");
    if (alpha < 2) throw std::invalid_argument("alphabet size must be >= 2");
    // require alpha^l <= 2^64, i.e. max key alpha^l - 1 representable
    unsigned __int128 space = 1;
    for (int i = 0; i < l; ++i) {
        space *= static_cast<unsigned>(alpha);
        if (space > (static_cast<unsigned __int128>(1) << 64))
            throw std::invalid_argument("alpha^l exceeds the 64-bit word key space");
    }
}

std::uint64_t encode_word(std::span<const int> symbols, int alpha) {
    check_word_space(static_cast<int>(symbols.size()), alpha);
    std::uint64_t key = 0;
    std::uint64_t base = 1;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        key += static_cast<std::uint64_t>(symbols[i]) * base;
        if (i + 1 < symbols.size()) base *= static_cast<std::uint64_t>(alpha);
    }
    return key;
}

std::vector<int> decode_word(std::uint64_t key, int l, int alpha) {
    check_word_space(l, alpha);
    std::vector<int> symbols(l);
    for (int i = 0; i < l; ++i) {
        symbols[i] = static_cast<int>(key % static_cast<std::uint64_t>(alpha));
        key /= static_cast<std::uint64_t>(alpha);
    }
    return symbols;
}

std::vector<double> znorm(std::span<const double> window) {
    const std::size_t w = window.size();
    double mean = 0;
    for (double v : window) mean += v;
    mean /= static_cast<double>(w);
    double var = 0;
    for (double v : window) var += (v - mean) * (v - mean);
    var /= static_cast<double>(w);
    const double sd = std::sqrt(var);
    std::vector<double> out(w);
    if (sd < kDegenerateStd) {
        return out;  // deviations treated as exactly 0
    }
    for (std::size_t i = 0; i < w; ++i) out[i] = (window[i] - mean) / sd;
    return out;
}

std::vector<double> paa(std::span<const double> window, int l) {
    const int w = static_cast<int>(window.size());
    if (l < 1 || l > w) throw std::invalid_argument("paa: word length must satisfy 1 <= l <= w");
    std::vector<double> out(l);
    const double chunk = static_cast<double>(w) / static_cast<double>(l);
    for (int i = 0; i < l; ++i) {
        const double a = chunk * i;
        const double b = chunk * (i + 1);
        double sum = 0;
        const int j0 = static_cast<int>(std::floor(a));
        const int j1 = std::min(w, static_cast<int>(std::ceil(b)));
        for (int j = j0; j < j1; ++j) {
            const double lo = std::max(a, static_cast<double>(j));
            const double hi = std::min(b, static_cast<double>(j + 1));
            if (hi > lo) sum += (hi - lo) * window[j];
        }
        out[i] = sum / chunk;
    }
    return out;
}

std::vector<double> gaussian_breakpoints(int alpha) {
    if (alpha < 2) throw std::invalid_argument("alphabet size must be >= 2");
    const boost::math::normal_distribution<double> normal;
    std::vector<double> bps(alpha - 1);
    for (int i = 1; i < alpha; ++i)
        bps[i - 1] = boost::math::quantile(normal, static_cast<double>(i) / alpha);
    return bps;
}

std::vector<int> discretise(std::span<const double> values, std::span<const double> breakpoints) {
    std::vector<int> symbols(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        int s = 0;
        for (double b : breakpoints)
            if (b < values[i]) ++s;
        symbols[i] = s;
    }
    return symbols;
}

Word sax_word(std::span<const double> window, int l, int alpha) {
    const std::vector<double> z = znorm(window);
    const std::vector<double> compressed = paa(z, l);
    const std::vector<double> bps = gaussian_breakpoints(alpha);
    Word word;
    word.symbols = discretise(compressed, bps);
    word.key = encode_word(word.symbols, alpha);
    return word;
}

std::vector<double> dft_truncate(std::span<const double> window, int l, bool p) {
    const int w = static_cast<int>(window.size());
    if (l < 2 || l % 2 != 0) throw std::invalid_argument("dft_truncate: l must be even and >= 2");
    const int half = l / 2;
    if (half + (p ? 1 : 0) > w)
        throw std::invalid_argument("dft_truncate: window too short for requested coefficients");
    std::vector<double> out(l);
    const int k0 = p ? 1 : 0;
    for (int idx = 0; idx < half; ++idx) {
        const int k = k0 + idx;
        double re = 0, im = 0;
        for (int j = 0; j < w; ++j) {
            const double angle = -2.0 * std::numbers::pi * j * k / w;
            re += window[j] * std::cos(angle);
            im += window[j] * std::sin(angle);
        }
        out[2 * idx] = re;
        out[2 * idx + 1] = im;
    }
    return out;
}

std::vector<double> approximate(std::span<const double> window, Approx approx, int l, bool p) {
    if (approx == Approx::PAA) {
        return paa(znorm(window), l);
    }
    return dft_truncate(window, l, p);
}

BreakpointTable mcb_fit(const LabeledDataset& train, int w, int l, int alpha, bool p,
                        Approx approx) {
    if (train.size() == 0) throw std::invalid_argument("mcb_fit: empty training set");
    if (alpha < 2) throw std::invalid_argument("mcb_fit: alphabet size must be >= 2");
    for (const auto& s : train.series)
        if (static_cast<int>(s.size()) < w)
            throw std::invalid_argument("mcb_fit: training series shorter than window");

    std::vector<std::vector<double>> pooled(l);
    for (const auto& s : train.series) {
        const int m = static_cast<int>(s.size());
        for (int off = 0; off + w <= m; off += w) {
            const auto coeffs =
                approximate(std::span<const double>(s).subspan(off, w), approx, l, p);
            for (int i = 0; i < l; ++i) pooled[i].push_back(coeffs[i]);
        }
    }

    BreakpointTable table;
    table.rows.resize(l);
    const std::size_t n = pooled.front().size();
    for (int i = 0; i < l; ++i) {
        std::sort(pooled[i].begin(), pooled[i].end());
        table.rows[i].resize(alpha - 1);
        for (int j = 0; j + 1 < alpha; ++j) {
            // 1-indexed rank ceil((j+1)*n/alpha) in the sorted pool
            const std::size_t rank =
                (static_cast<std::size_t>(j + 1) * n + alpha - 1) / static_cast<std::size_t>(alpha);
            table.rows[i][j] = pooled[i][rank - 1];
        }
    }
    return table;
}

Word mcb_discretise(std::span<const double> coeffs, const BreakpointTable& table) {
    if (coeffs.size() != table.rows.size())
        throw std::invalid_argument("mcb_discretise: coefficient/table dimension mismatch");
    Word word;
    word.symbols.resize(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        int s = 0;
        for (double b : table.rows[i])
            if (b < coeffs[i]) ++s;
        word.symbols[i] = s;
    }
    word.key = encode_word(word.symbols, table.alphabet());
    return word;
}

std::string BreakpointTable::to_text() const {
    std::ostringstream os;
    os.precision(17);
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) os << ' ';
            os << row[j];
        }
        os << '\n';
    }
    return os.str();
}

BreakpointTable BreakpointTable::from_text(const std::string& text) {
    BreakpointTable table;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace tsdict
