#include <doctest.h>

#include <cmath>
#include <functional>

#include "fblearn/achievability.hpp"
#include "fblearn/capacity.hpp"
#include "fblearn/converse.hpp"
#include "oracles.hpp"

using namespace fblearn;

namespace {
Dmc bsc(double p) { return validate_dmc({{1.0 - p, p}, {p, 1.0 - p}}); }

// Brute-force best beta over every input string x^n (not just compositions).
double brute_min_beta(const Dmc& w, const Dist& qy, std::size_t n, double alpha) {
    double best = 2.0;
    std::vector<std::size_t> xs(n, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == n) {
            auto outs = oracles::enumerate_given_input(w, xs, qy);
            best = std::min(best, oracles::brute_np_beta(outs, alpha));
            return;
        }
        for (std::size_t x = 0; x < w.num_inputs(); ++x) {
            xs[pos] = x;
            rec(pos + 1);
        }
    };
    rec(0);
    return best;
}
}  // namespace

TEST_SUITE("converse") {

TEST_CASE("vacuous when kappa eats the error budget") {
    Dmc b = bsc(0.11);
    Dist qy = Dist::uniform(2);
    // m tiny, n large: kappa is essentially 1.
    ConverseResult r = converse_bound(b, 100, 0.1, 5, 0.1, qy);
    CHECK(r.vacuous);
    CHECK(std::isinf(r.log2_m_upper));
    CHECK(r.alpha_used == 0.0);
    CHECK(r.kappa > 0.89);
}

TEST_CASE("bound blows up continuously as alpha -> 0") {
    Dmc b = bsc(0.11);
    Dist qy = Dist::uniform(2);
    ConverseOptions exact;
    exact.exact_channel = true;
    double prev = 0.0;
    for (double eps : {0.9, 0.99, 0.999, 0.9999}) {
        ConverseResult r = converse_bound(b, 8, eps, 1, 0.1, qy, exact);
        CHECK_FALSE(r.vacuous);
        CHECK(r.log2_m_upper >= prev);
        prev = r.log2_m_upper;
    }
    CHECK(prev > 10.0);  // approaching the trivial bound
}

TEST_CASE("epsilon monotonicity") {
    Dmc b = bsc(0.11);
    Dist qy = Dist::uniform(2);
    ConverseOptions exact;
    exact.exact_channel = true;
    ConverseResult tight = converse_bound(b, 50, 0.01, 1, 0.1, qy, exact);
    ConverseResult loose = converse_bound(b, 50, 0.1, 1, 0.1, qy, exact);
    CHECK(tight.log2_m_upper <= loose.log2_m_upper + 1e-12);
}

TEST_CASE("symmetric channel collapses the composition scan") {
    Dmc b = bsc(0.11);
    CompositionSearchResult r = composition_search(b, Dist::uniform(2), 40, 0.9);
    CHECK_FALSE(r.heuristic);
    REQUIRE(r.composition.size() == 2);
    CHECK(r.composition[0] + r.composition[1] == 40);
    CHECK(r.composition == std::vector<std::size_t>{0, 40});  // lexicographic tie-break
}

TEST_CASE("alpha = 1 accepts the whole P-support") {
    Dmc id = validate_dmc({{1, 0}, {0, 1}});
    std::size_t n = 6;
    CompositionSearchResult r = composition_search(id, Dist::uniform(2), n, 1.0);
    // Each letter contributes q = 1/2 on the single P-possible output.
    CHECK(r.beta.log2_beta == doctest::Approx(-static_cast<double>(n)).epsilon(1e-12));
}

TEST_CASE("matches brute force over input strings") {
    // Z-channel, n = 4, qy = caod.
    Dmc z = validate_dmc({{1.0, 0.0}, {0.3, 0.7}});
    Dist caod = blahut_arimoto(z).caod;
    for (double alpha : {0.3, 0.7, 0.95}) {
        CompositionSearchResult r = composition_search(z, caod, 4, alpha);
        CHECK_FALSE(r.heuristic);
        double brute = brute_min_beta(z, caod, 4, alpha);
        CHECK(std::exp2(r.beta.log2_beta) == doctest::Approx(brute).epsilon(1e-12));
    }
    // Another asymmetric 2x3 channel at several blocklengths.
    Dmc w = validate_dmc({{0.6, 0.3, 0.1}, {0.1, 0.2, 0.7}});
    Dist qy({0.3, 0.3, 0.4});
    for (std::size_t n : {1u, 3u, 7u, 10u}) {
        CompositionSearchResult r = composition_search(w, qy, n, 0.8);
        double brute = brute_min_beta(w, qy, n, 0.8);
        CHECK(std::exp2(r.beta.log2_beta) == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("three-class heuristic returns a valid flagged candidate") {
    Dmc w = validate_dmc({{0.8, 0.1, 0.1}, {0.1, 0.8, 0.1}, {0.25, 0.25, 0.5}});
    Dist qy = blahut_arimoto(w).caod;
    std::size_t n = 6;
    double alpha = 0.8;
    CompositionSearchResult r = composition_search(w, qy, n, alpha);
    CHECK(r.heuristic);
    std::size_t total = 0;
    for (std::size_t k : r.composition) total += k;
    CHECK(total == n);

    // The heuristic can only overshoot the exact minimum.
    double best = 2.0;
    for (std::size_t k0 = 0; k0 <= n; ++k0)
        for (std::size_t k1 = 0; k0 + k1 <= n; ++k1) {
            std::vector<std::size_t> xs;
            xs.insert(xs.end(), k0, 0);
            xs.insert(xs.end(), k1, 1);
            xs.insert(xs.end(), n - k0 - k1, 2);
            auto outs = oracles::enumerate_given_input(w, xs, qy);
            best = std::min(best, oracles::brute_np_beta(outs, alpha));
        }
    CHECK(std::exp2(r.beta.log2_beta) >= best - 1e-12);
}

TEST_CASE("exact-channel converse brackets the known BSC value") {
    // Cross-module consistency: n = 2000, eps = 1e-3, qy = caod = uniform.
    Dmc b = bsc(0.11);
    Dist qy = blahut_arimoto(b).caod;
    ConverseOptions exact;
    exact.exact_channel = true;
    ConverseResult r = converse_bound(b, 2000, 1e-3, 1, 0.1, qy, exact);
    double rate = r.log2_m_upper / 2000.0;
    CHECK(std::abs(rate - 0.43487) < 0.01);
}

TEST_CASE("achievability never exceeds the converse") {
    ConverseOptions exact;
    exact.exact_channel = true;
    struct Config {
        Dmc w;
        std::size_t n;
        double eps;
    };
    std::vector<Config> configs = {
        {bsc(0.11), 20, 0.01},
        {bsc(0.11), 50, 0.1},
        {validate_dmc({{1.0, 0.0}, {0.3, 0.7}}), 20, 0.05},
        {validate_dmc({{0.6, 0.3, 0.1}, {0.1, 0.2, 0.7}}), 30, 0.05},
    };
    for (const auto& cfg : configs) {
        Dist px = Dist::uniform(cfg.w.num_inputs());
        Dist qy = blahut_arimoto(cfg.w).caod;
        double ach = max_rate_achievable(cfg.w, px, cfg.n, 1, cfg.eps, 0.1, true);
        ConverseResult conv = converse_bound(cfg.w, cfg.n, cfg.eps, 1, 0.1, qy, exact);
        CHECK(ach <= conv.log2_m_upper / static_cast<double>(cfg.n) + 1e-9);
    }
}

}  // TEST_SUITE
