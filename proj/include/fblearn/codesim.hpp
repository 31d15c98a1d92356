#ifndef FBLEARN_CODESIM_HPP
#define FBLEARN_CODESIM_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fblearn/achievability.hpp"
#include "fblearn/channel.hpp"

namespace fblearn {

/// Random mini-codebook plus its L-th order extension parameters.
/// The extended book is the full L-fold product of the mini book, so the
/// effective message count M0^L is stored in log domain only.
struct Codebook {
    std::size_t n0 = 1;
    std::size_t m0 = 1;  // mini-codebook rows
    std::size_t l = 1;   // extension order
    double log2_effective_m = 0.0;  // L log2(M0)
    std::size_t effective_n = 1;    // n0 L
    std::vector<std::uint32_t> symbols;  // m0 x n0, row-major
    std::uint64_t seed = 0;

    std::uint32_t symbol(std::size_t row, std::size_t i) const { return symbols[row * n0 + i]; }
};

struct SimResult {
    double error_estimate = 0.0;
    std::size_t trials = 0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
};

/// Decode tie handling: the fixed lowest-index rule keeps simulation
/// reproducible; the uniform variant exists for duplicate-codeword studies.
enum class TieBreak { lowest_index, uniform_random };

struct DecodeOptions {
    TieBreak tie_break = TieBreak::lowest_index;
    std::uint64_t seed = 0;     // used by uniform_random only
    std::uint64_t counter = 0;  // caller-scoped counter (e.g. trial index)
};

/// Reliability verification summary against eps (per draw) and eps + delta
/// (on the mean), both with 3-sigma empirical slack.
struct ReliabilityReport {
    std::size_t draws = 0;
    double fraction_within_eps = 0.0;
    double mean_pe = 0.0;
    double sigma_fraction = 0.0;
    double sigma_mean = 0.0;
    bool pass_fraction = false;
    bool pass_mean = false;
    std::vector<double> per_draw_pe;
};

struct VerifyOptions {
    bool fresh_codebook_per_draw = false;
    std::size_t m0_cap = 1u << 20;
};

/// L = floor(n/n0), b = n/L, M0 = ceil(2^{bR}) with R = m_target/n; symbols
/// i.i.d. per px. Throws CodebookTooLarge above m0_cap rows.
Codebook generate_codebook(const Dist& px, double m_target, std::size_t n, std::size_t n0,
                           std::uint64_t seed, std::size_t m0_cap = 1u << 20);

/// Per-sub-block argmax of prod w_hat(y_i|x_i) in log domain over the mini
/// book, concatenated into an extended-book message index. Returns nullopt
/// (erasure, counted as an error by callers) when every row is impossible.
std::optional<std::uint64_t> empirical_ml_decode(const Dmc& w_hat, const Codebook& codebook,
                                                 std::span<const std::uint32_t> y,
                                                 const DecodeOptions& opts = {});

/// Monte Carlo error estimate: uniform message, transmit through w_true,
/// decode with w_hat. Deterministic per (seed, trial index).
SimResult simulate_error_prob(const Dmc& w_true, const Dmc& w_hat, const Codebook& codebook,
                              std::size_t trials, std::uint64_t seed);

/// Exact decoder error probability by probability-weighted enumeration of
/// all messages and output sequences; |Y|^{n0 L} must stay enumerable.
double exhaustive_error_prob(const Dmc& w_true, const Dmc& w_hat, const Codebook& codebook,
                             std::size_t enumeration_cap = 1u << 24);

/// Draws independent training sets, learns the decoder from each, and
/// checks the statistical reliability constraint empirically.
ReliabilityReport verify_reliability(const Dmc& w_true, const BoundParams& params,
                                     std::size_t training_draws, std::size_t trials_per_draw,
                                     std::uint64_t seed, VerifyOptions opts = {});

}  // namespace fblearn

#endif
