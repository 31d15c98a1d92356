#include <doctest.h>

#include <cmath>
#include <limits>

#include "fblearn/density.hpp"
#include "oracles.hpp"

using namespace fblearn;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
Dmc bsc(double p) { return validate_dmc({{1.0 - p, p}, {p, 1.0 - p}}); }

double q_mass(const SparsePmf& pmf, std::size_t i) { return std::exp2(pmf.atom(i).q_log2); }
}  // namespace

TEST_SUITE("density") {

TEST_CASE("letter_pmf atoms for a BSC") {
    Dmc b = bsc(0.1);
    Dist px = Dist::uniform(2);
    SparsePmf pmf = letter_pmf(b, px, output_marginal(px, b));
    REQUIRE(pmf.size() == 2);
    CHECK(pmf.atom(0).value == doctest::Approx(std::log2(0.2)).epsilon(1e-12));
    CHECK(pmf.atom(0).p == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(q_mass(pmf, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pmf.atom(1).value == doctest::Approx(std::log2(1.8)).epsilon(1e-12));
    CHECK(pmf.atom(1).p == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(q_mass(pmf, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("letter_pmf identity channel and support violations") {
    Dmc id = validate_dmc({{1, 0}, {0, 1}});
    SparsePmf pmf = letter_pmf(id, Dist::uniform(2), Dist::uniform(2));
    REQUIRE(pmf.size() == 1);
    CHECK(pmf.atom(0).value == doctest::Approx(1.0));
    CHECK(pmf.atom(0).p == doctest::Approx(1.0));
    CHECK(q_mass(pmf, 0) == doctest::Approx(0.5));

    CHECK_THROWS_AS(letter_pmf(id, Dist::uniform(2), Dist({1.0, 0.0})), SupportViolation);
}

TEST_CASE("self_convolve two-point example") {
    Dmc b = bsc(0.1);
    Dist px = Dist::uniform(2);
    SparsePmf letter = letter_pmf(b, px, output_marginal(px, b));
    SparsePmf two = self_convolve(letter, 2);
    REQUIRE(two.size() == 3);
    CHECK(two.atom(0).value == doctest::Approx(2.0 * std::log2(0.2)).epsilon(1e-12));
    CHECK(two.atom(0).p == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(two.atom(1).value == doctest::Approx(std::log2(0.2) + std::log2(1.8)).epsilon(1e-12));
    CHECK(two.atom(1).p == doctest::Approx(0.18).epsilon(1e-12));
    CHECK(two.atom(2).p == doctest::Approx(0.81).epsilon(1e-12));

    SparsePmf one = self_convolve(letter, 1);
    REQUIRE(one.size() == letter.size());
    CHECK(one.atom(0).value == doctest::Approx(letter.atom(0).value));
    CHECK_THROWS_AS(self_convolve(letter, 0), InvalidArgument);
}

TEST_CASE("self_convolve moment additivity") {
    Dmc b = bsc(0.11);
    Dist px = Dist::uniform(2);
    SparsePmf letter = letter_pmf(b, px, output_marginal(px, b));
    SparsePmf conv = self_convolve(letter, 20);
    CHECK(conv.mean() == doctest::Approx(20.0 * letter.mean()).epsilon(1e-9));
    CHECK(conv.variance() == doctest::Approx(20.0 * letter.variance()).epsilon(1e-9));
    CHECK(std::abs(conv.p_total() - 1.0) < 1e-9);
}

TEST_CASE("self_convolve respects the atom budget") {
    Dmc w = validate_dmc({{0.5, 0.3, 0.2}, {0.1, 0.2, 0.7}});
    Dist px({0.3, 0.7});
    SparsePmf letter = letter_pmf(w, px, output_marginal(px, w));
    CHECK_THROWS_AS(self_convolve(letter, 64, 50), AtomBudgetExceeded);
}

TEST_CASE("grouping merges near-identical values") {
    std::vector<PmfAtom> atoms;
    atoms.push_back({1.0, 0.25, -2.0});
    atoms.push_back({1.0 + 1e-14, 0.25, -2.0});
    atoms.push_back({2.0, 0.5, -1.0});
    SparsePmf pmf{std::move(atoms)};
    REQUIRE(pmf.size() == 2);
    CHECK(pmf.atom(0).p == doctest::Approx(0.5));
    CHECK(q_mass(pmf, 0) == doctest::Approx(0.5));  // 2^-2 + 2^-2
}

TEST_CASE("expect_min_one") {
    std::vector<PmfAtom> atoms;
    atoms.push_back({1.0, 1.0, -1.0});
    SparsePmf single{std::move(atoms)};
    CHECK(expect_min_one(single, 0.0) == doctest::Approx(0.5));
    CHECK(expect_min_one(single, 5.0) == doctest::Approx(1.0));
    CHECK(expect_min_one(single, -kInf) == doctest::Approx(0.0));
    CHECK_THROWS_AS(expect_min_one(single, kInf), InvalidArgument);

    Dmc b = bsc(0.2);
    Dist px = Dist::uniform(2);
    SparsePmf conv = self_convolve(letter_pmf(b, px, output_marginal(px, b)), 3);
    auto outs = oracles::enumerate_joint(b, px, output_marginal(px, b), 3);
    for (double la : {-3.0, -1.0, 0.0, 0.7, 2.5})
        CHECK(expect_min_one(conv, la) ==
              doctest::Approx(oracles::brute_expect_min_one(outs, la)).epsilon(1e-13));
}

TEST_CASE("np_beta basics") {
    // P = Q: the Neyman-Pearson boundary is the diagonal.
    std::vector<PmfAtom> atoms;
    atoms.push_back({0.0, 0.6, std::log2(0.6)});
    atoms.push_back({0.0, 0.4, std::log2(0.4)});  // merges with the first
    SparsePmf diag{std::move(atoms)};
    for (double a : {0.0, 0.1, 0.25, 0.5, 0.9, 1.0}) {
        BetaResult r = np_beta(diag, a);
        CHECK(r.beta == doctest::Approx(a).epsilon(1e-12));
    }

    CHECK_THROWS_AS(np_beta(diag, -0.1), InvalidAlpha);
    CHECK_THROWS_AS(np_beta(diag, 1.1), InvalidAlpha);

    BetaResult zero = np_beta(diag, 0.0);
    CHECK(zero.beta == 0.0);
    CHECK(std::isinf(zero.threshold));
}

TEST_CASE("np_beta accepts the most-likely outcome exactly") {
    // P(y=0) = 0.9 vs uniform Q, alpha = 0.9: accept exactly y = 0.
    std::vector<PmfAtom> atoms;
    atoms.push_back({std::log2(1.8), 0.9, std::log2(0.5)});
    atoms.push_back({std::log2(0.2), 0.1, std::log2(0.5)});
    SparsePmf pmf{std::move(atoms)};
    BetaResult r = np_beta(pmf, 0.9);
    CHECK(r.beta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.randomization == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.threshold == doctest::Approx(std::log2(1.8)).epsilon(1e-12));

    // Coarse independent check: minimize q.t over all randomized 2-outcome tests.
    double best = 1.0;
    const int grid = 4000;
    for (int i = 0; i <= grid; ++i) {
        for (int j = 0; j <= grid; ++j) {
            double t0 = static_cast<double>(i) / grid, t1 = static_cast<double>(j) / grid;
            if (0.9 * t0 + 0.1 * t1 >= 0.9 - 1e-12) best = std::min(best, 0.5 * (t0 + t1));
        }
    }
    CHECK(r.beta == doctest::Approx(best).epsilon(1e-3));
}

TEST_CASE("np_beta is nondecreasing and convex in alpha") {
    Dmc w = validate_dmc({{0.6, 0.3, 0.1}, {0.2, 0.3, 0.5}});
    Dist px({0.5, 0.5});
    SparsePmf conv = self_convolve(letter_pmf(w, px, Dist::uniform(3)), 4);
    std::vector<double> alphas, betas;
    for (int i = 0; i <= 40; ++i) alphas.push_back(static_cast<double>(i) / 40.0);
    for (double a : alphas) betas.push_back(np_beta(conv, a).beta);
    for (std::size_t i = 1; i < betas.size(); ++i) CHECK(betas[i] >= betas[i - 1] - 1e-12);
    for (std::size_t i = 1; i + 1 < betas.size(); ++i)
        CHECK(betas[i] <= 0.5 * (betas[i - 1] + betas[i + 1]) + 1e-12);
}

TEST_CASE("np_beta and expect_min_one match brute force on small alphabets") {
    std::vector<Dmc> channels = {
        bsc(0.3),
        validate_dmc({{0.6, 0.3, 0.1}, {0.2, 0.3, 0.5}}),
        validate_dmc({{0.5, 0.25, 0.25}, {0.1, 0.6, 0.3}, {0.3, 0.3, 0.4}}),
    };
    for (const Dmc& w : channels) {
        Dist px = Dist::uniform(w.num_inputs());
        Dist qy = output_marginal(px, w);
        SparsePmf letter = letter_pmf(w, px, qy);
        for (std::size_t n = 1; n <= 3; ++n) {
            SparsePmf conv = self_convolve(letter, n);
            auto outs = oracles::enumerate_joint(w, px, qy, n);
            for (double a : {0.05, 0.3, 0.5, 0.77, 0.95, 1.0}) {
                double brute = oracles::brute_np_beta(outs, a);
                CHECK(np_beta(conv, a).beta == doctest::Approx(brute).epsilon(1e-12));
            }
            for (double la : {-2.0, 0.0, 1.5})
                CHECK(expect_min_one(conv, la) ==
                      doctest::Approx(oracles::brute_expect_min_one(outs, la)).epsilon(1e-12));
        }
    }
}

TEST_CASE("q masses survive extreme blocklengths in log domain") {
    // Identity-channel row vs uniform q: after n letters beta = alpha 2^{-n},
    // far below the smallest double for n = 1200.
    std::vector<PmfAtom> atoms;
    atoms.push_back({1.0, 1.0, -1.0});
    SparsePmf letter{std::move(atoms)};
    SparsePmf conv = self_convolve(letter, 1200);
    REQUIRE(conv.size() == 1);
    CHECK(conv.atom(0).q_log2 == doctest::Approx(-1200.0).epsilon(1e-9));
    BetaResult r = np_beta(conv, 0.75);
    CHECK(r.log2_beta == doctest::Approx(-1200.0 + std::log2(0.75)).epsilon(1e-9));
    CHECK(r.beta == 0.0);  // underflow is expected; log2_beta carries the value
}

}  // TEST_SUITE
