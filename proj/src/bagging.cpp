#include "tsdict/bagging.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tsdict {

namespace {

void validate(const TimeSeries& series, const BagConfig& cfg, const BreakpointTable* table) {
    const int m = static_cast<int>(series.size());
    if (cfg.w < 2) throw std::invalid_argument("bag: window length must be >= 2");
    if (m < cfg.w) throw std::invalid_argument("bag: window exceeds series length");
    if (cfg.approx == Approx::PAA) {
        if (cfg.l < 1 || cfg.l > cfg.w)
            throw std::invalid_argument("bag: PAA word length must satisfy 1 <= l <= w");
    } else {
        if (cfg.l < 2 || cfg.l % 2 != 0)
            throw std::invalid_argument("bag: DFT word length must be even");
        if (cfg.l / 2 + (cfg.p ? 1 : 0) > cfg.w)
            throw std::invalid_argument("bag: window too short for requested DFT coefficients");
    }
    if (cfg.disc == Disc::MCB) {
        if (table == nullptr) throw std::invalid_argument("bag: MCB discretisation needs a fitted model");
        if (static_cast<int>(table->word_length()) != cfg.l)
            throw std::invalid_argument("bag: model word length does not match config");
    }
    check_word_space(cfg.l, cfg.alpha);
}

// Discretise one coefficient vector against either breakpoint source and pack.
template <class RowAt>
std::uint64_t pack_symbols(const std::vector<double>& coeffs, int alpha, RowAt row_at) {
    std::uint64_t key = 0;
    std::uint64_t base = 1;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const auto& row = row_at(i);
        int s = 0;
        for (double b : row)
            if (b < coeffs[i]) ++s;
        key += static_cast<std::uint64_t>(s) * base;
        if (i + 1 < coeffs.size()) base *= static_cast<std::uint64_t>(alpha);
    }
    return key;
}

// Sliding PAA with per-window z-normalisation, O(l) per window via prefix
// sums. Windows at multiples of w are computed through approximate() instead:
// those are the windows MCB pooled during fitting, and the equal-goes-lower
// bin rule needs them bit-identical to the fitted breakpoints.
class SlidingPaa {
public:
    SlidingPaa(const TimeSeries& x, int w, int l) : x_(x), w_(w), l_(l) {
        const std::size_t m = x.size();
        sum_.resize(m + 1, 0.0);
        sumsq_.resize(m + 1, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            sum_[i + 1] = sum_[i] + x[i];
            sumsq_[i + 1] = sumsq_[i] + x[i] * x[i];
        }
    }

    void coefficients(int j, std::vector<double>& out) const {
        const double w = static_cast<double>(w_);
        const double mean = (sum_[j + w_] - sum_[j]) / w;
        double var = (sumsq_[j + w_] - sumsq_[j]) / w - mean * mean;
        if (var < 0) var = 0;
        const double sd = std::sqrt(var);
        const double chunk = w / static_cast<double>(l_);
        if (sd < 1e-8) {
            std::fill(out.begin(), out.end(), 0.0);
            return;
        }
        for (int i = 0; i < l_; ++i) {
            const double a = j + chunk * i;
            const double b = j + chunk * (i + 1);
            const double raw = (partial(b) - partial(a)) / chunk;
            out[i] = (raw - mean) / sd;
        }
    }

private:
    // integral of the step function x over [0, t)
    double partial(double t) const {
        const auto idx = static_cast<std::size_t>(t);
        if (idx >= x_.size()) return sum_.back();
        return sum_[idx] + (t - static_cast<double>(idx)) * x_[idx];
    }

    const TimeSeries& x_;
    int w_, l_;
    std::vector<double> sum_, sumsq_;
};

// Sliding truncated DFT, O(l) per shift. Re-derived from scratch via
// dft_truncate whenever j is a multiple of w, so windows that MCB pooled
// during fitting reproduce bit-identical coefficients.
class SlidingDft {
public:
    SlidingDft(const TimeSeries& x, int w, int l, bool p) : x_(x), w_(w), l_(l), p_(p) {
        const int half = l / 2;
        const int k0 = p ? 1 : 0;
        rot_cos_.resize(half);
        rot_sin_.resize(half);
        for (int i = 0; i < half; ++i) {
            const double theta = 2.0 * std::numbers::pi * (k0 + i) / w;
            rot_cos_[i] = std::cos(theta);
            rot_sin_[i] = std::sin(theta);
        }
    }

    // must be called with j = 0, 1, 2, ... in order
    void coefficients(int j, std::vector<double>& out) {
        if (j % w_ == 0) {
            out = dft_truncate(std::span<const double>(x_).subspan(j, w_), l_, p_);
            state_ = out;
            return;
        }
        const double delta = x_[j - 1 + w_] - x_[j - 1];
        for (int i = 0; i < l_ / 2; ++i) {
            const double re = state_[2 * i] + delta;
            const double im = state_[2 * i + 1];
            state_[2 * i] = re * rot_cos_[i] - im * rot_sin_[i];
            state_[2 * i + 1] = re * rot_sin_[i] + im * rot_cos_[i];
        }
        out = state_;
    }

private:
    const TimeSeries& x_;
    int w_, l_;
    bool p_;
    std::vector<double> rot_cos_, rot_sin_;
    std::vector<double> state_;
};

}  // namespace

std::vector<std::uint64_t> word_sequence(const TimeSeries& series, const BagConfig& cfg,
                                         const BreakpointTable* table) {
    validate(series, cfg, table);
    const int m = static_cast<int>(series.size());
    const int count = m - cfg.w + 1;
    std::vector<std::uint64_t> keys(count);
    std::vector<double> coeffs(cfg.l);

    std::vector<double> gaussian;
    if (cfg.disc == Disc::Gaussian) gaussian = gaussian_breakpoints(cfg.alpha);
    const auto row_at = [&](std::size_t i) -> const std::vector<double>& {
        return cfg.disc == Disc::Gaussian ? gaussian : table->rows[i];
    };

    if (cfg.approx == Approx::PAA) {
        const SlidingPaa slider(series, cfg.w, cfg.l);
        for (int j = 0; j < count; ++j) {
            if (j % cfg.w == 0)
                coeffs = approximate(std::span<const double>(series).subspan(j, cfg.w),
                                     Approx::PAA, cfg.l, cfg.p);
            else
                slider.coefficients(j, coeffs);
            keys[j] = pack_symbols(coeffs, cfg.alpha, row_at);
        }
    } else {
        SlidingDft slider(series, cfg.w, cfg.l, cfg.p);
        for (int j = 0; j < count; ++j) {
            slider.coefficients(j, coeffs);
            keys[j] = pack_symbols(coeffs, cfg.alpha, row_at);
        }
    }
    return keys;
}

std::vector<char> numerosity_survivors(const std::vector<std::uint64_t>& keys, bool numerosity) {
    std::vector<char> keep(keys.size(), 1);
    if (!numerosity) return keep;
    for (std::size_t j = 1; j < keys.size(); ++j)
        if (keys[j] == keys[j - 1]) keep[j] = 0;
    return keep;
}

SparseHistogram bag_series(const TimeSeries& series, const BagConfig& cfg,
                           const BreakpointTable* table) {
    const auto keys = word_sequence(series, cfg, table);
    const auto keep = numerosity_survivors(keys, cfg.numerosity);
    SparseHistogram bag;
    bag.entries.reserve(keys.size());
    for (std::size_t j = 0; j < keys.size(); ++j)
        if (keep[j]) bag.entries.push_back({keys[j], 1});
    bag.normalize();
    return bag;
}

BaggedDataset bag_dataset(const LabeledDataset& data, const BagConfig& cfg) {
    BaggedDataset out;
    out.labels = data.labels;
    if (data.size() == 0) return out;
    if (cfg.disc == Disc::MCB)
        out.model = mcb_fit(data, cfg.w, cfg.l, cfg.alpha, cfg.p, cfg.approx);
    const BreakpointTable* table = out.model ? &*out.model : nullptr;
    out.bags.reserve(data.size());
    for (const auto& s : data.series) out.bags.push_back(bag_series(s, cfg, table));
    return out;
}

std::string bags_to_text(const std::vector<SparseHistogram>& bags, const std::vector<int>& labels) {
    std::ostringstream os;
    for (std::size_t i = 0; i < bags.size(); ++i) {
        os << labels[i] << ' ' << bags[i].entries.size();
        for (const auto& [key, count] : bags[i].entries) os << ' ' << key << ':' << count;
        os << '\n';
    }
    return os.str();
}

std::pair<std::vector<SparseHistogram>, std::vector<int>> bags_from_text(const std::string& text) {
    std::vector<SparseHistogram> bags;
    std::vector<int> labels;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int label = 0;
        std::size_t k = 0;
        if (!(ls >> label >> k)) throw std::runtime_error("bags_from_text: malformed header");
        SparseHistogram bag;
        bag.entries.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            std::uint64_t key;
            std::uint32_t count;
            char sep;
            if (!(ls >> key >> sep >> count) || sep != ':')
                throw std::runtime_error("bags_from_text: malformed entry");
            bag.entries.push_back({key, count});
        }
        bags.push_back(std::move(bag));
        labels.push_back(label);
    }
    return {std::move(bags), std::move(labels)};
}

}  // namespace tsdict
