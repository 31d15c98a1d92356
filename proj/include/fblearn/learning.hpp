#ifndef FBLEARN_LEARNING_HPP
#define FBLEARN_LEARNING_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "fblearn/channel.hpp"

namespace fblearn {

/// Training set of i.i.d. channel input-output pairs, input uniform on X.
struct TrainingSet {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::size_t input_alphabet = 0;
    std::size_t output_alphabet = 0;

    std::size_t size() const { return pairs.size(); }
};

/// Parameters of the concentration penalty (Theorem-3-style kappa).
struct PenaltyParams {
    std::size_t m = 1;                // training size
    std::size_t alphabet_product = 1; // |X||Y|
    double delta = 0.1;               // confidence, in (0,1)
    std::size_t n0 = 1;               // sub-blocklength
};

/// Empirical channel plus the inputs whose rows were never observed
/// (those rows fall back to uniform; the PAC guarantee is vacuous there).
struct EmpiricalEstimate {
    Dmc channel;
    std::vector<std::size_t> unvisited_inputs;
};

/// Draws m i.i.d. pairs: x uniform, y ~ w(.|x). Deterministic per (seed, index).
TrainingSet sample_training_set(const Dmc& w, std::size_t m, std::uint64_t seed);

/// Counting-ratio estimate W^(y|x) = count(x,y)/count(x); unvisited rows
/// become uniform and are flagged.
EmpiricalEstimate estimate_empirical_channel(const TrainingSet& d);

/// ((cardinality-1) ln(m+1) - ln delta)/m, in nats.
double kl_concentration_bound(std::size_t m, std::size_t cardinality, double delta);

/// kappa = sqrt(1 - exp(-n0 * kl_concentration_bound(m, |X||Y|, delta))).
double tv_penalty(const PenaltyParams& p);

/// Largest integer n with n <= sqrt(m / ((cardinality-1) ln(m+1) - ln delta)).
std::size_t max_blocklength(std::size_t m, std::size_t cardinality, double delta);

}  // namespace fblearn

#endif
