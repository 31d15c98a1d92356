#ifndef FBLEARN_DENSITY_HPP
#define FBLEARN_DENSITY_HPP

#include <cstddef>
#include <limits>
#include <vector>

#include "fblearn/channel.hpp"

namespace fblearn {

/// One mass point of a dual-measure pmf over real values (bits).
/// P-mass is linear (the P side always sums to 1). The Q side is kept in
/// log2 domain per atom: after n-fold convolution individual Q-masses fall
/// below the smallest double long before they stop mattering to a
/// Neyman-Pearson beta.
struct PmfAtom {
    double value = 0.0;  // bits
    double p = 0.0;      // mass under P
    double q_log2 = -std::numeric_limits<double>::infinity();  // log2 of Q mass
};

/// Sparse pmf of a per-letter (or summed) log-likelihood quantity under two
/// measures. Values strictly increasing; atoms closer than the grouping
/// tolerance are merged on construction.
class SparsePmf {
  public:
    static constexpr std::size_t kDefaultAtomCap = 5'000'000;

    SparsePmf() = default;
    /// Builds from unsorted atoms: sorts, merges within tolerance, checks
    /// that P sums to 1 (when `complete_p`) and Q to at most 1.
    explicit SparsePmf(std::vector<PmfAtom> atoms, bool complete_p = true);

    std::size_t size() const { return atoms_.size(); }
    const PmfAtom& atom(std::size_t i) const { return atoms_[i]; }
    const std::vector<PmfAtom>& atoms() const { return atoms_; }

    double p_total() const;
    double q_log2_total() const;

    /// Mean and variance of the value under P.
    double mean() const;
    double variance() const;
    /// E_P |value - mean|^3.
    double third_abs_central() const;

  private:
    std::vector<PmfAtom> atoms_;
    friend SparsePmf self_convolve(const SparsePmf&, std::size_t, std::size_t);
    friend SparsePmf convolve(const SparsePmf&, const SparsePmf&, std::size_t);
    static SparsePmf from_sorted_unchecked(std::vector<PmfAtom> atoms);
};

/// Result of the Neyman-Pearson minimization: accept all atoms with
/// value > threshold, and the threshold atom with probability
/// `randomization`. beta = exp2(log2_beta) may underflow to 0 for large n;
/// log2_beta is always meaningful.
struct BetaResult {
    double beta = 0.0;
    double log2_beta = 0.0;
    double threshold = 0.0;      // bits
    double randomization = 0.0;  // in [0,1]
};

/// Per-letter atomization of the information density against an auxiliary
/// output law: value log2(W(y|x)/qy(y)), P-mass px(x)W(y|x), Q-mass
/// px(x)qy(y), restricted to the P-support. Throws SupportViolation when
/// qy vanishes on a reachable output.
SparsePmf letter_pmf(const Dmc& w, const Dist& px, const Dist& qy);

/// Same atomization for a fixed input row x (point-mass input), used by the
/// converse composition machinery.
SparsePmf row_llr_pmf(const Dmc& w, std::size_t x, const Dist& qy);

/// Convolution of independent sums under both measures simultaneously.
SparsePmf convolve(const SparsePmf& a, const SparsePmf& b,
                   std::size_t atom_cap = SparsePmf::kDefaultAtomCap);

/// Exact n-fold self-convolution by binary doubling.
SparsePmf self_convolve(const SparsePmf& pmf, std::size_t n,
                        std::size_t atom_cap = SparsePmf::kDefaultAtomCap);

/// E_P[min{1, 2^(log_a - value)}]. log_a = -inf gives 0.
double expect_min_one(const SparsePmf& pmf, double log_a);

/// Minimum Q-acceptance over randomized tests with P-acceptance >= alpha,
/// for the log-likelihood ratio pmf (value = log2 dP/dQ).
BetaResult np_beta(const SparsePmf& pmf, double alpha);

}  // namespace fblearn

#endif
