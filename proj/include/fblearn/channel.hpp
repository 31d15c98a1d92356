#ifndef FBLEARN_CHANNEL_HPP
#define FBLEARN_CHANNEL_HPP

#include <cstddef>
#include <vector>

#include "fblearn/errors.hpp"

namespace fblearn {

/// Probability distribution over a finite alphabet.
/// Entries in [0,1], sum 1 within 1e-12 (renormalized on construction).
class Dist {
  public:
    Dist() = default;
    explicit Dist(std::vector<double> mass);

    static Dist uniform(std::size_t k);
    static Dist point_mass(std::size_t k, std::size_t at);

    std::size_t size() const { return mass_.size(); }
    double operator()(std::size_t i) const { return mass_[i]; }
    const std::vector<double>& mass() const { return mass_; }

  private:
    std::vector<double> mass_;
};

/// Discrete memoryless channel: row-stochastic transition matrix W(y|x).
/// Rows are validated to 1e-9 on input and renormalized, so stored rows sum
/// to 1 within 1e-12.
class Dmc {
  public:
    Dmc() = default;

    std::size_t num_inputs() const { return nx_; }
    std::size_t num_outputs() const { return ny_; }
    double operator()(std::size_t x, std::size_t y) const { return w_[x * ny_ + y]; }

    /// Row x as a Dist (a view copy; rows are small).
    Dist row(std::size_t x) const;

    friend Dmc validate_dmc(const std::vector<std::vector<double>>& raw);

  private:
    std::size_t nx_ = 0, ny_ = 0;
    std::vector<double> w_;  // row-major
};

/// Validates a raw matrix as a Dmc. Throws RowNotStochastic if a row sum
/// deviates from 1 by more than 1e-9, NegativeEntry on entries < 0 or > 1+1e-9.
Dmc validate_dmc(const std::vector<std::vector<double>>& raw);

/// Per-pair information densities log2(W(y|x)/PY(y)) in bits.
/// Entries with W(y|x) = 0 are structurally absent (never sampled under the
/// forward measure) instead of -inf floats. The same applies to the corner
/// case px(x) = 0 with PY(y) = 0, which carries no forward mass either.
struct InfoDensityTable {
    std::size_t nx = 0, ny = 0;
    std::vector<double> values;   // row-major, bits; valid only where present
    std::vector<char> present;    // row-major
    Dist input_dist;
    Dist output_marginal;

    bool is_present(std::size_t x, std::size_t y) const { return present[x * ny + y] != 0; }
    double operator()(std::size_t x, std::size_t y) const { return values[x * ny + y]; }
};

/// PY(y) = sum_x px(x) W(y|x).
Dist output_marginal(const Dist& px, const Dmc& w);

/// Information density table of Eq.-style log2(W(y|x)/PY(y)).
InfoDensityTable info_density_table(const Dist& px, const Dmc& w);

/// Mutual information I(px, w) in bits.
double mutual_information(const Dist& px, const Dmc& w);

/// KL divergence in nats; +inf when p is not absolutely continuous w.r.t. q.
double kl_divergence(const Dist& p, const Dist& q);

/// Total variation distance (1/2) sum |p - q|, in [0, 1].
double total_variation(const Dist& p, const Dist& q);

}  // namespace fblearn

#endif
