#include "fblearn/codesim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "fblearn/learning.hpp"
#include "fblearn/parallel.hpp"
#include "fblearn/rng.hpp"

namespace fblearn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t ceil_exp2_u64(double e) {
    double v = std::exp2(e);
    double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(v, 1.0)) return static_cast<std::uint64_t>(r);
    return static_cast<std::uint64_t>(std::ceil(v));
}

std::uint64_t extended_message_count(const Codebook& cb) {
    if (cb.log2_effective_m > 62.0)
        throw InvalidArgument("extended codebook too large to index (log2 M = " +
                              std::to_string(cb.log2_effective_m) + ")");
    std::uint64_t m = 1;
    for (std::size_t i = 0; i < cb.l; ++i) m *= cb.m0;
    return m;
}

void encode(const Codebook& cb, std::uint64_t msg, std::vector<std::uint32_t>& x) {
    x.resize(cb.effective_n);
    // Big-endian base-M0 digits select the sub-codeword per block.
    for (std::size_t blk = cb.l; blk-- > 0;) {
        std::size_t row = msg % cb.m0;
        msg /= cb.m0;
        for (std::size_t i = 0; i < cb.n0; ++i) x[blk * cb.n0 + i] = cb.symbol(row, i);
    }
}

}  // namespace

Codebook generate_codebook(const Dist& px, double m_target, std::size_t n, std::size_t n0,
                           std::uint64_t seed, std::size_t m0_cap) {
    if (n0 < 1 || n0 > n) throw InvalidN0("need 1 <= n0 <= n");
    if (m_target < 0.0) throw InvalidArgument("m_target must be >= 0");
    Codebook cb;
    cb.n0 = n0;
    cb.l = n / n0;
    cb.effective_n = cb.n0 * cb.l;
    double e = m_target / static_cast<double>(cb.l);  // = b R
    if (e > 62.0) throw CodebookTooLarge("per-block rate needs 2^" + std::to_string(e) + " rows");
    std::uint64_t m0 = std::max<std::uint64_t>(ceil_exp2_u64(e), 1);
    if (m0 > m0_cap) throw CodebookTooLarge(std::to_string(m0) + " rows > cap");
    cb.m0 = static_cast<std::size_t>(m0);
    cb.log2_effective_m = static_cast<double>(cb.l) * std::log2(static_cast<double>(cb.m0));
    assert(cb.log2_effective_m >= m_target - 1e-9);
    cb.seed = seed;
    cb.symbols.resize(cb.m0 * cb.n0);
    for (std::size_t r = 0; r < cb.m0; ++r)
        for (std::size_t i = 0; i < cb.n0; ++i)
            cb.symbols[r * cb.n0 + i] = static_cast<std::uint32_t>(rng::categorical(
                std::span<const double>(px.mass()), seed, rng::kCodebookSymbol, r * cb.n0 + i));
    return cb;
}

std::optional<std::uint64_t> empirical_ml_decode(const Dmc& w_hat, const Codebook& cb,
                                                 std::span<const std::uint32_t> y,
                                                 const DecodeOptions& opts) {
    if (y.size() != cb.effective_n)
        throw LengthMismatch("received length " + std::to_string(y.size()) + ", expected " +
                             std::to_string(cb.effective_n));
    std::uint64_t msg = 0;
    for (std::size_t blk = 0; blk < cb.l; ++blk) {
        double best = kNegInf;
        std::size_t best_row = cb.m0;
        std::size_t ties = 0;
        for (std::size_t row = 0; row < cb.m0; ++row) {
            double score = 0.0;
            for (std::size_t i = 0; i < cb.n0; ++i) {
                double wxy = w_hat(cb.symbol(row, i), y[blk * cb.n0 + i]);
                if (wxy <= 0.0) {
                    score = kNegInf;
                    break;
                }
                score += std::log(wxy);
            }
            if (score > best) {
                best = score;
                best_row = row;
                ties = 1;
            } else if (score == best && score != kNegInf) {
                ++ties;
                if (opts.tie_break == TieBreak::uniform_random) {
                    // Reservoir draw keeps each tied row equally likely.
                    std::uint64_t c = opts.counter * cb.l * cb.m0 + blk * cb.m0 + row;
                    if (rng::uniform_index(opts.seed, rng::kTieBreak, c, ties) == 0) best_row = row;
                }
            }
        }
        if (best == kNegInf) return std::nullopt;  // every row impossible: erasure
        msg = msg * cb.m0 + best_row;
    }
    return msg;
}

SimResult simulate_error_prob(const Dmc& w_true, const Dmc& w_hat, const Codebook& cb,
                              std::size_t trials, std::uint64_t seed) {
    if (trials < 1) throw InvalidArgument("trials must be >= 1");
    if (w_true.num_inputs() != w_hat.num_inputs() || w_true.num_outputs() != w_hat.num_outputs())
        throw DimensionMismatch("true and estimated channels");
    const std::uint64_t m_ext = extended_message_count(cb);
    std::vector<char> errs(trials, 0);
    parallel_for(trials, [&](std::size_t t) {
        std::uint64_t msg = rng::uniform_index(seed, rng::kSimMessage, t, m_ext);
        std::vector<std::uint32_t> x, y(cb.effective_n);
        encode(cb, msg, x);
        for (std::size_t i = 0; i < cb.effective_n; ++i) {
            Dist row = w_true.row(x[i]);
            y[i] = static_cast<std::uint32_t>(
                rng::categorical(std::span<const double>(row.mass()), seed, rng::kSimNoise,
                                 static_cast<std::uint64_t>(t) * cb.effective_n + i));
        }
        DecodeOptions dopts;
        dopts.seed = seed;
        dopts.counter = t;
        auto decoded = empirical_ml_decode(w_hat, cb, y, dopts);
        errs[t] = (!decoded || *decoded != msg) ? 1 : 0;
    });
    std::size_t bad = 0;
    for (char e : errs) bad += static_cast<std::size_t>(e);
    SimResult r;
    r.trials = trials;
    r.seed = seed;
    r.error_estimate = static_cast<double>(bad) / static_cast<double>(trials);
    r.std_error =
        std::sqrt(r.error_estimate * (1.0 - r.error_estimate) / static_cast<double>(trials));
    return r;
}

double exhaustive_error_prob(const Dmc& w_true, const Dmc& w_hat, const Codebook& cb,
                             std::size_t enumeration_cap) {
    const std::uint64_t m_ext = extended_message_count(cb);
    const std::size_t ny = w_true.num_outputs();
    double total_outputs = std::pow(static_cast<double>(ny), static_cast<double>(cb.effective_n));
    if (total_outputs > static_cast<double>(enumeration_cap))
        throw InvalidArgument("output space too large to enumerate");
    const auto outputs = static_cast<std::size_t>(total_outputs);

    std::vector<double> per_msg_err(m_ext, 0.0);
    parallel_for(static_cast<std::size_t>(m_ext), [&](std::size_t msg) {
        std::vector<std::uint32_t> x, y(cb.effective_n, 0);
        encode(cb, msg, x);
        double err = 0.0;
        for (std::size_t code = 0; code < outputs; ++code) {
            std::size_t c = code;
            double prob = 1.0;
            for (std::size_t i = 0; i < cb.effective_n; ++i) {
                y[i] = static_cast<std::uint32_t>(c % ny);
                c /= ny;
                prob *= w_true(x[i], y[i]);
            }
            if (prob == 0.0) continue;
            auto decoded = empirical_ml_decode(w_hat, cb, y);
            if (!decoded || *decoded != msg) err += prob;
        }
        per_msg_err[msg] = err;
    });
    double acc = 0.0;
    for (double e : per_msg_err) acc += e;
    return acc / static_cast<double>(m_ext);
}

ReliabilityReport verify_reliability(const Dmc& w_true, const BoundParams& params,
                                     std::size_t training_draws, std::size_t trials_per_draw,
                                     std::uint64_t seed, VerifyOptions opts) {
    if (training_draws < 1) throw InvalidArgument("training_draws must be >= 1");
    const Dist px = Dist::uniform(w_true.num_inputs());
    const double m_target = params.rate * static_cast<double>(params.n);
    const std::size_t n0 = params.n0.value_or(params.n);
    Codebook shared;
    if (!opts.fresh_codebook_per_draw)
        shared = generate_codebook(px, m_target, params.n, n0, seed, opts.m0_cap);

    ReliabilityReport rep;
    rep.draws = training_draws;
    rep.per_draw_pe.assign(training_draws, 0.0);
    parallel_for(training_draws, [&](std::size_t d) {
        std::uint64_t draw_seed = rng::bits(seed, rng::kDrawDerive, d);
        TrainingSet ts = sample_training_set(w_true, params.m, draw_seed);
        EmpiricalEstimate est = estimate_empirical_channel(ts);
        const Codebook& cb =
            opts.fresh_codebook_per_draw
                ? generate_codebook(px, m_target, params.n, n0, draw_seed, opts.m0_cap)
                : shared;
        SimResult sim = simulate_error_prob(w_true, est.channel, cb, trials_per_draw,
                                            rng::bits(draw_seed, rng::kDrawDerive, 1));
        rep.per_draw_pe[d] = sim.error_estimate;
    });

    std::size_t within = 0;
    double sum = 0.0;
    for (double pe : rep.per_draw_pe) {
        if (pe <= params.epsilon) ++within;
        sum += pe;
    }
    const auto draws = static_cast<double>(training_draws);
    rep.fraction_within_eps = static_cast<double>(within) / draws;
    rep.mean_pe = sum / draws;
    double var = 0.0;
    for (double pe : rep.per_draw_pe) var += (pe - rep.mean_pe) * (pe - rep.mean_pe);
    var /= draws;
    rep.sigma_mean = std::sqrt(var / draws);
    rep.sigma_fraction =
        std::sqrt(rep.fraction_within_eps * (1.0 - rep.fraction_within_eps) / draws);
    rep.pass_fraction = rep.fraction_within_eps >= 1.0 - params.delta - 3.0 * rep.sigma_fraction;
    rep.pass_mean = rep.mean_pe <= params.epsilon + params.delta + 3.0 * rep.sigma_mean;
    return rep;
}

}  // namespace fblearn
