#ifndef FBLEARN_CONVERSE_HPP
#define FBLEARN_CONVERSE_HPP

#include <cstddef>
#include <vector>

#include "fblearn/channel.hpp"
#include "fblearn/density.hpp"

namespace fblearn {

/// Metaconverse-with-learning evaluation. vacuous is set exactly when
/// 1 - epsilon - kappa <= 0, in which case log2_m_upper is +inf.
struct ConverseResult {
    double log2_m_upper = 0.0;  // bits; upper bound on log2 M = nR
    double alpha_used = 0.0;
    double kappa = 0.0;
    std::vector<std::size_t> best_composition;  // per-input counts, sums to n
    bool vacuous = false;
    /// True when the composition scan was the |X| > 2 hill-climbing heuristic
    /// (result is a valid candidate but possibly not the exact supremum).
    bool heuristic = false;
};

struct CompositionSearchResult {
    std::vector<std::size_t> composition;
    BetaResult beta;
    bool heuristic = false;
};

struct ConverseOptions {
    bool exact_channel = false;  // force kappa to 0
    std::size_t atom_cap = SparsePmf::kDefaultAtomCap;
};

/// Minimizes the Neyman-Pearson beta over input compositions: exhaustive for
/// two distinct row laws, single evaluation when all rows coincide,
/// hill-climbing heuristic otherwise. Point-mass inputs suffice for a
/// product auxiliary law; the beta of composition k is np_beta of the
/// convolution of per-row llr pmfs.
CompositionSearchResult composition_search(const Dmc& w_hat, const Dist& qy, std::size_t n,
                                           double alpha,
                                           std::size_t atom_cap = SparsePmf::kDefaultAtomCap);

/// Theorem-3-style bound: 2^{nR} <= 1/beta_{max{0, 1-eps-kappa}} with
/// kappa evaluated at n0 = n.
ConverseResult converse_bound(const Dmc& w_hat, std::size_t n, double epsilon, std::size_t m,
                              double delta, const Dist& qy, ConverseOptions opts = {});

}  // namespace fblearn

#endif
