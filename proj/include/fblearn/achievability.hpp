#ifndef FBLEARN_ACHIEVABILITY_HPP
#define FBLEARN_ACHIEVABILITY_HPP

#include <cstdint>
#include <optional>

#include "fblearn/channel.hpp"
#include "fblearn/density.hpp"

namespace fblearn {

/// Parameters of a learning-based code evaluation.
struct BoundParams {
    std::size_t n = 1;        // blocklength
    double rate = 0.0;        // R in bits/use (log2 M = n R)
    double epsilon = 1e-3;    // target error, in (0,1)
    double delta = 0.1;       // confidence, in (0,1)
    std::size_t m = 1;        // training size
    std::optional<std::size_t> n0;  // sub-blocklength override

    /// Known-channel mode: the concentration penalty is forced to zero.
    bool exact_channel = false;

    // Engine knobs.
    std::size_t atom_cap = SparsePmf::kDefaultAtomCap;
    std::size_t mc_samples = 200'000;  // Monte Carlo fallback sample count
    std::uint64_t mc_seed = 0x5eed;
};

struct AchievabilityResult {
    double error_upper_bound = 1.0;  // clamped to [0,1]
    std::size_t best_n0 = 1;
    double first_term = 1.0;
    double penalty_term = 0.0;
    double raw_sum = 1.0;  // first_term + penalty_term before clamping
    enum class Method { exact, monte_carlo } method = Method::exact;
    std::optional<double> mc_std_error;
};

/// log2 of the union-bound multiplier L(ceil(2^{nR/L})^L - 1) for L = floor(n/n0).
/// Exact while M0^L fits 53 bits; above that the -1 is dropped (still an
/// upper bound). Returns -inf when M0 = 1 (no competing codeword).
double log2_rcu_multiplier(std::size_t n, double rate, std::size_t n0);

/// First term of the learned RCU bound at a fixed n0:
/// E[min{1, L(ceil(2^{nR/L})^L - 1) 2^{-i(X^{n0},Y^{n0})}}] under px x w_hat.
/// Falls back to Monte Carlo when the exact convolution exceeds the atom cap.
double rcu_learning_term(const Dmc& w_hat, const Dist& px, const BoundParams& p, std::size_t n0);

/// Full bound: scans candidate n0 values, adds the concentration penalty,
/// and returns the minimizing n0 (lowest n0 on ties).
AchievabilityResult rcu_learning_bound(const Dmc& w_hat, const Dist& px, const BoundParams& p);

/// Largest R with rcu_learning_bound <= epsilon, to 1e-6 by bisection;
/// 0 when even R -> 0 fails.
double max_rate_achievable(const Dmc& w_hat, const Dist& px, std::size_t n, std::size_t m,
                           double epsilon, double delta, bool exact_channel = false);

}  // namespace fblearn

#endif
