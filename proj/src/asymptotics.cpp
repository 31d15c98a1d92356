#include "fblearn/asymptotics.hpp"

#include <cmath>
#include <string>

#include "fblearn/learning.hpp"

namespace fblearn {

double gaussian_q(double t) { return 0.5 * std::erfc(t / std::sqrt(2.0)); }

double gaussian_q_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("gaussian_q_inv needs p in (0,1)");
    // Exploit symmetry so the bracket is always the upper tail.
    if (p > 0.5) return -gaussian_q_inv(1.0 - p);
    if (p == 0.5) return 0.0;
    // Bisection bracket, then Newton polish on an erfc-quality Q.
    double lo = 0.0, hi = 1.0;
    while (gaussian_q(hi) > p) hi *= 2.0;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        (gaussian_q(mid) > p ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        double f = gaussian_q(t) - p;
        double pdf = std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
        if (pdf <= 0.0) break;
        t += f / pdf;
    }
    return t;
}

BerryEsseenMoments log_u_moments() {
    // E[log2 U] = -1/ln2, Var = 1/ln2^2,
    // E|log2 U - c|^3 = (12/e - 2)/ln2^3 (from |ln U + 1|^3 with -ln U ~ Exp(1)).
    const double ln2 = std::log(2.0);
    BerryEsseenMoments m;
    m.mean = -1.0 / ln2;
    m.variance = 1.0 / (ln2 * ln2);
    m.third_abs_central = (12.0 / std::exp(1.0) - 2.0) / (ln2 * ln2 * ln2);
    return m;
}

BerryEsseenMoments info_density_moments(const Dmc& w_hat, const Dist& px) {
    InfoDensityTable t = info_density_table(px, w_hat);
    double mean = 0.0;
    for (std::size_t x = 0; x < t.nx; ++x)
        for (std::size_t y = 0; y < t.ny; ++y)
            if (t.is_present(x, y)) mean += px(x) * w_hat(x, y) * t(x, y);
    BerryEsseenMoments m;
    m.mean = mean;
    for (std::size_t x = 0; x < t.nx; ++x) {
        for (std::size_t y = 0; y < t.ny; ++y) {
            if (!t.is_present(x, y)) continue;
            double d = t(x, y) - mean;
            double w = px(x) * w_hat(x, y);
            m.variance += w * d * d;
            m.third_abs_central += w * std::abs(d) * d * d;
        }
    }
    return m;
}

double berry_esseen_radius(const BerryEsseenMoments& channel_moments, std::size_t n) {
    if (n < 1) throw InvalidArgument("n must be >= 1");
    BerryEsseenMoments lu = log_u_moments();
    double nn = static_cast<double>(n);
    double denom = channel_moments.variance + lu.variance / nn;
    if (denom <= 0.0) throw ZeroVariance("variance + v~/n must be positive");
    double bn = 6.0 * (channel_moments.third_abs_central + lu.third_abs_central / nn) /
                std::pow(denom, 1.5);
    return bn / std::sqrt(nn);
}

namespace {

std::optional<bool> blocklength_condition(std::size_t n_or_n0,
                                          const std::optional<TrainingBudget>& budget) {
    if (!budget) return std::nullopt;
    return n_or_n0 <= max_blocklength(budget->m, budget->alphabet_product, budget->delta);
}

}  // namespace

NormalApproxResult normal_approx_rate(const CapacityDispersion& cd, std::size_t n, double epsilon,
                                      std::optional<TrainingBudget> budget) {
    if (n < 1) throw InvalidArgument("n must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0) || epsilon == 0.5)
        throw InvalidArgument("epsilon must be in (0,1) and != 1/2");
    NormalApproxResult r;
    r.capacity_term = cd.capacity;
    r.dispersion_term =
        std::sqrt(cd.dispersion_for(epsilon) / static_cast<double>(n)) * gaussian_q_inv(epsilon);
    r.rate = r.capacity_term - r.dispersion_term;
    r.condition_ok = blocklength_condition(n, budget);
    r.min_n_hint = 1.0 / (epsilon * epsilon);
    return r;
}

NormalApproxResult normal_approx_rate_partial(const CapacityDispersion& cd, std::size_t n,
                                              std::size_t n0, double epsilon,
                                              std::optional<TrainingBudget> budget) {
    if (n0 < 1 || n0 >= n) throw InvalidN0("need 1 <= n0 < n, got n0 = " + std::to_string(n0));
    if (!(epsilon > 0.0 && epsilon < 1.0) || epsilon == 0.5)
        throw InvalidArgument("epsilon must be in (0,1) and != 1/2");
    NormalApproxResult r;
    double nn = static_cast<double>(n), nn0 = static_cast<double>(n0);
    r.capacity_term = nn0 * cd.capacity / nn;
    r.dispersion_term =
        std::sqrt(nn0 * cd.dispersion_for(epsilon) / (nn * nn)) * gaussian_q_inv(epsilon);
    r.rate = r.capacity_term - r.dispersion_term;
    r.condition_ok = blocklength_condition(n0, budget);
    r.min_n_hint = 1.0 / (epsilon * epsilon);
    return r;
}

}  // namespace fblearn
