#include "fblearn/achievability.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <span>
#include <vector>

#include "fblearn/learning.hpp"
#include "fblearn/parallel.hpp"
#include "fblearn/rng.hpp"

namespace fblearn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ceil(2^e) for moderate e, snapping near-integer powers first so that
// rate grids like nR/L = 3 do not round up to 9 codewords.
std::uint64_t ceil_exp2(double e) {
    double v = std::exp2(e);
    double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(v, 1.0)) return static_cast<std::uint64_t>(r);
    return static_cast<std::uint64_t>(std::ceil(v));
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void validate_params(const BoundParams& p) {
    if (p.n < 1) throw InvalidArgument("n must be >= 1");
    if (p.rate < 0.0) throw InvalidArgument("rate must be >= 0");
    if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) throw InvalidArgument("epsilon must be in (0,1)");
    if (!p.exact_channel) {
        if (!(p.delta > 0.0 && p.delta < 1.0)) throw InvalidDelta("delta must be in (0,1)");
        if (p.m < 1) throw InvalidArgument("m must be >= 1");
    }
}

// Per-n0 state reusable across rate bisection: either the exact convolved
// pmf or Monte Carlo samples of the information-density sum.
struct ScanPoint {
    std::size_t n0 = 1;
    double penalty = 0.0;
    bool monte_carlo = false;
    SparsePmf pmf;                  // exact path
    std::vector<double> mc_sums;    // MC path: sampled i(X^{n0},Y^{n0})
};

struct TermValue {
    double value = 1.0;
    std::optional<double> std_error;
};

TermValue eval_term(const ScanPoint& sp, double log_a) {
    TermValue tv;
    if (!sp.monte_carlo) {
        tv.value = expect_min_one(sp.pmf, log_a);
        return tv;
    }
    if (log_a == kNegInf) {
        tv.value = 0.0;
        tv.std_error = 0.0;
        return tv;
    }
    double sum = 0.0, sumsq = 0.0;
    for (double s : sp.mc_sums) {
        double e = log_a - s;
        double v = e >= 0.0 ? 1.0 : std::exp2(e);
        sum += v;
        sumsq += v * v;
    }
    double n = static_cast<double>(sp.mc_sums.size());
    double mean = sum / n;
    double var = std::max(sumsq / n - mean * mean, 0.0);
    tv.value = std::min(mean, 1.0);
    tv.std_error = std::sqrt(var / n);
    return tv;
}

std::vector<double> sample_density_sums(const Dmc& w_hat, const Dist& px, std::size_t n0,
                                        std::size_t count, std::uint64_t seed) {
    InfoDensityTable table = info_density_table(px, w_hat);
    std::vector<double> rowbuf(w_hat.num_inputs() * w_hat.num_outputs());
    for (std::size_t x = 0; x < w_hat.num_inputs(); ++x)
        for (std::size_t y = 0; y < w_hat.num_outputs(); ++y)
            rowbuf[x * w_hat.num_outputs() + y] = w_hat(x, y);
    std::vector<double> sums(count);
    parallel_for(count, [&](std::size_t s) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n0; ++i) {
            std::uint64_t c = (static_cast<std::uint64_t>(s) * n0 + i) * 2;
            auto x = rng::categorical(std::span<const double>(px.mass()), seed, rng::kMcFallback, c);
            std::span<const double> row(rowbuf.data() + x * w_hat.num_outputs(),
                                        w_hat.num_outputs());
            auto y = rng::categorical(row, seed, rng::kMcFallback, c + 1);
            acc += table(x, y);
        }
        sums[s] = acc;
    });
    return sums;
}

ScanPoint make_scan_point(const Dmc& w_hat, const Dist& px, const SparsePmf& letter,
                          const BoundParams& p, std::size_t n0) {
    ScanPoint sp;
    sp.n0 = n0;
    sp.penalty =
        p.exact_channel
            ? 0.0
            : tv_penalty({p.m, w_hat.num_inputs() * w_hat.num_outputs(), p.delta, n0});
    try {
        sp.pmf = self_convolve(letter, n0, p.atom_cap);
    } catch (const AtomBudgetExceeded&) {
        sp.monte_carlo = true;
        sp.mc_sums = sample_density_sums(w_hat, px, n0, p.mc_samples,
                                         rng::mix64(p.mc_seed ^ n0));
    }
    return sp;
}

// Candidate n0 values: full scan for small n, otherwise a geometric grid of
// at most 64 points (always containing 1 and n) plus the largest n0 whose
// penalty still fits under epsilon.
std::vector<std::size_t> candidate_n0s(const Dmc& w_hat, const BoundParams& p) {
    if (p.n0) {
        if (*p.n0 < 1 || *p.n0 > p.n) throw InvalidN0("n0 override outside [1, n]");
        return {*p.n0};
    }
    std::vector<std::size_t> out;
    if (p.n <= 512) {
        out.resize(p.n);
        for (std::size_t i = 0; i < p.n; ++i) out[i] = i + 1;
        return out;
    }
    const int grid = 64;
    double ln_n = std::log(static_cast<double>(p.n));
    for (int i = 0; i < grid; ++i) {
        auto v = static_cast<std::size_t>(std::lround(std::exp(ln_n * i / (grid - 1))));
        out.push_back(std::clamp<std::size_t>(v, 1, p.n));
    }
    if (!p.exact_channel) {
        // Largest n0 with tv_penalty <= epsilon (penalty is increasing in n0).
        std::size_t lo = 1, hi = p.n, best = 0;
        auto pen = [&](std::size_t n0) {
            return tv_penalty({p.m, w_hat.num_inputs() * w_hat.num_outputs(), p.delta, n0});
        };
        if (pen(1) <= p.epsilon) {
            while (lo <= hi) {
                std::size_t mid = lo + (hi - lo) / 2;
                if (pen(mid) <= p.epsilon) {
                    best = mid;
                    lo = mid + 1;
                } else {
                    hi = mid - 1;
                }
            }
            out.push_back(best);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<ScanPoint> build_scan(const Dmc& w_hat, const Dist& px, const BoundParams& p) {
    validate_params(p);
    SparsePmf letter = letter_pmf(w_hat, px, output_marginal(px, w_hat));
    auto n0s = candidate_n0s(w_hat, p);
    std::vector<ScanPoint> scan(n0s.size());
    std::vector<std::exception_ptr> errors(n0s.size());
    parallel_for(n0s.size(), [&](std::size_t i) {
        try {
            scan[i] = make_scan_point(w_hat, px, letter, p, n0s[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return scan;
}

AchievabilityResult best_over_scan(const std::vector<ScanPoint>& scan, std::size_t n,
                                   double rate) {
    AchievabilityResult best;
    bool first = true;
    for (const auto& sp : scan) {
        TermValue tv = eval_term(sp, log2_rcu_multiplier(n, rate, sp.n0));
        double raw = tv.value + sp.penalty;
        double clamped = clamp01(raw);
        if (first || clamped < best.error_upper_bound) {
            first = false;
            best.error_upper_bound = clamped;
            best.best_n0 = sp.n0;
            best.first_term = tv.value;
            best.penalty_term = sp.penalty;
            best.raw_sum = raw;
            best.method = sp.monte_carlo ? AchievabilityResult::Method::monte_carlo
                                         : AchievabilityResult::Method::exact;
            best.mc_std_error = tv.std_error;
        }
    }
    return best;
}

}  // namespace

double log2_rcu_multiplier(std::size_t n, double rate, std::size_t n0) {
    if (n0 < 1 || n0 > n) throw InvalidN0("need 1 <= n0 <= n");
    if (rate < 0.0) throw InvalidArgument("rate must be >= 0");
    const auto l = static_cast<double>(n / n0);
    double e = static_cast<double>(n) * rate / l;  // = log2 M0 before ceiling
    if (e <= 62.0) {
        std::uint64_t m0 = ceil_exp2(e);
        if (m0 <= 1) return kNegInf;
        double log2_m0 = std::log2(static_cast<double>(m0));
        if (l * log2_m0 <= 53.0) {
            // M0^L - 1 exactly.
            double m0l = std::pow(static_cast<double>(m0), l);
            return std::log2(l) + std::log2(m0l - 1.0);
        }
        return std::log2(l) + l * log2_m0;  // -1 dropped: still an upper bound
    }
    return std::log2(l) + l * e;  // ceiling negligible at this scale
}

double rcu_learning_term(const Dmc& w_hat, const Dist& px, const BoundParams& p, std::size_t n0) {
    if (n0 < 1 || n0 > p.n) throw InvalidN0("need 1 <= n0 <= n");
    SparsePmf letter = letter_pmf(w_hat, px, output_marginal(px, w_hat));
    ScanPoint sp = make_scan_point(w_hat, px, letter, p, n0);
    return eval_term(sp, log2_rcu_multiplier(p.n, p.rate, n0)).value;
}

AchievabilityResult rcu_learning_bound(const Dmc& w_hat, const Dist& px, const BoundParams& p) {
    auto scan = build_scan(w_hat, px, p);
    return best_over_scan(scan, p.n, p.rate);
}

double max_rate_achievable(const Dmc& w_hat, const Dist& px, std::size_t n, std::size_t m,
                           double epsilon, double delta, bool exact_channel) {
    BoundParams p;
    p.n = n;
    p.m = m;
    p.epsilon = epsilon;
    p.delta = delta;
    p.exact_channel = exact_channel;
    auto scan = build_scan(w_hat, px, p);
    auto feasible = [&](double rate) {
        return best_over_scan(scan, n, rate).error_upper_bound <= epsilon;
    };
    if (!feasible(0.0)) return 0.0;
    double lo = 0.0;
    double hi = std::log2(static_cast<double>(w_hat.num_inputs()));
    if (feasible(hi)) return hi;
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace fblearn
