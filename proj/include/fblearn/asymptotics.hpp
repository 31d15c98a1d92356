#ifndef FBLEARN_ASYMPTOTICS_HPP
#define FBLEARN_ASYMPTOTICS_HPP

#include <cstddef>
#include <optional>

#include "fblearn/capacity.hpp"
#include "fblearn/channel.hpp"

namespace fblearn {

/// First, second, and third absolute central moments of a per-letter
/// random variable, all in bits.
struct BerryEsseenMoments {
    double mean = 0.0;
    double variance = 0.0;
    double third_abs_central = 0.0;
};

/// Leading-order normal-approximation rate. The O(log n / n) residual is
/// never added; callers judge validity from condition_ok and the
/// Berry-Esseen radius.
struct NormalApproxResult {
    double rate = 0.0;             // bits/use
    double capacity_term = 0.0;
    double dispersion_term = 0.0;  // rate = capacity_term - dispersion_term
    std::optional<bool> condition_ok;  // set when (m, delta) supplied
    double min_n_hint = 0.0;           // the eps^{-2} scale
};

/// Training-size context for the blocklength admissibility conditions.
struct TrainingBudget {
    std::size_t m = 1;
    std::size_t alphabet_product = 1;
    double delta = 0.1;
};

/// Standard Gaussian tail probability Q(t).
double gaussian_q(double t);
/// Inverse of gaussian_q on (0,1); |Q(Q^{-1}(p)) - p| <= 1e-12.
double gaussian_q_inv(double p);

/// Moments of log2 U for U ~ Unif(0,1): exact constants.
BerryEsseenMoments log_u_moments();

/// Moments of the information density i(X,Y) under px and its own output
/// marginal: exact sums over the present (x,y) atoms. The variance is the
/// unconditional Var[i(X,Y)], which coincides with the conditional one at
/// capacity-achieving inputs.
BerryEsseenMoments info_density_moments(const Dmc& w_hat, const Dist& px);

/// B(n)/sqrt(n) with B(n) = 6 (T + t~/n) / (V + v~/n)^{3/2}, folding in the
/// log U moment corrections.
double berry_esseen_radius(const BerryEsseenMoments& channel_moments, std::size_t n);

/// R = C - sqrt(V^eps / n) Q^{-1}(eps).
NormalApproxResult normal_approx_rate(const CapacityDispersion& cd, std::size_t n, double epsilon,
                                      std::optional<TrainingBudget> budget = std::nullopt);

/// R = n0 C / n - sqrt(n0 V^eps / n^2) Q^{-1}(eps), for 1 <= n0 < n.
NormalApproxResult normal_approx_rate_partial(const CapacityDispersion& cd, std::size_t n,
                                              std::size_t n0, double epsilon,
                                              std::optional<TrainingBudget> budget = std::nullopt);

}  // namespace fblearn

#endif
