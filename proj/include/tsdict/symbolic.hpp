#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsdict/types.hpp"

namespace tsdict {

/// Window approximation: chunk means (PAA) or truncated Fourier coefficients.
enum class Approx { PAA, DFT };

/// Discretisation: fixed normal-quantile breakpoints or data-driven MCB.
enum class Disc { Gaussian, MCB };

/// A discretised window: l symbols in [0, alpha) and their packed key,
/// key = sum_i symbols[i] * alpha^i.
struct Word {
    std::vector<int> symbols;
    std::uint64_t key = 0;
};

/// Per-position breakpoints fitted by MCB: one non-decreasing row of
/// alpha-1 thresholds per word position.
struct BreakpointTable {
    std::vector<std::vector<double>> rows;

    std::size_t word_length() const { return rows.size(); }
    int alphabet() const { return rows.empty() ? 0 : static_cast<int>(rows.front().size()) + 1; }

    /// Plain-text matrix, one row per line, 17 significant digits.
    std::string to_text() const;
    static BreakpointTable from_text(const std::string& text);
};

/// Throws std::invalid_argument unless alpha^l fits the 64-bit key space.
void check_word_space(int l, int alpha);

std::uint64_t encode_word(std::span<const int> symbols, int alpha);
std::vector<int> decode_word(std::uint64_t key, int l, int alpha);

/// z-normalised copy; windows with std below 1e-8 map to all zeros.
std::vector<double> znorm(std::span<const double> window);

/// Means of l contiguous chunks; fractional chunk boundaries weight samples
/// by their overlap when l does not divide the window length.
std::vector<double> paa(std::span<const double> window, int l);

/// Standard normal quantiles at i/alpha, i = 1..alpha-1.
std::vector<double> gaussian_breakpoints(int alpha);

/// symbol[i] = number of breakpoints strictly below values[i]; a value equal
/// to a breakpoint falls in the lower bin.
std::vector<int> discretise(std::span<const double> values, std::span<const double> breakpoints);

/// SAX: z-normalise, PAA, then fixed normal-quantile binning.
Word sax_word(std::span<const double> window, int l, int alpha);

/// Truncated unnormalised DFT, interleaved (Re, Im). With p the mean
/// coefficient q_0 is dropped and q_1..q_{l/2} returned; without p,
/// q_0..q_{l/2-1} (Im q_0 is 0 and still emitted). l must be even.
std::vector<double> dft_truncate(std::span<const double> window, int l, bool p);

/// Window approximation under the configured method. For PAA the window is
/// z-normalised first (the SAX convention); for DFT it is used raw.
std::vector<double> approximate(std::span<const double> window, Approx approx, int l, bool p);

/// Equi-depth breakpoints per coefficient, pooled over all disjoint
/// (stride-w, trailing partial discarded) windows of the training series.
/// Breakpoint j of a row is the pooled value at rank ceil((j+1)*n/alpha).
BreakpointTable mcb_fit(const LabeledDataset& train, int w, int l, int alpha, bool p,
                        Approx approx = Approx::DFT);

Word mcb_discretise(std::span<const double> coeffs, const BreakpointTable& table);

}  // namespace tsdict
