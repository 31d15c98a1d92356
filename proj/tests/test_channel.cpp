#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fblearn/channel.hpp"
#include "fblearn/rng.hpp"
#include "oracles.hpp"

using namespace fblearn;

namespace {

Dmc bsc(double p) { return validate_dmc({{1.0 - p, p}, {p, 1.0 - p}}); }

Dist random_dist(std::size_t k, std::uint64_t seed, std::uint64_t idx) {
    std::vector<double> m(k);
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        m[i] = rng::uniform(seed, 77, idx * 16 + i) + 1e-12;
        s += m[i];
    }
    for (double& v : m) v /= s;
    return Dist(std::move(m));
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("validate_dmc accepts stochastic matrices") {
    Dmc id = validate_dmc({{1, 0}, {0, 1}});
    CHECK(id.num_inputs() == 2);
    CHECK(id(0, 0) == 1.0);
    Dmc b = bsc(0.1);
    CHECK(b(0, 1) == doctest::Approx(0.1).epsilon(1e-12));
    for (std::size_t x = 0; x < 2; ++x) {
        double s = b(x, 0) + b(x, 1);
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
}

TEST_CASE("validate_dmc rejects bad rows") {
    CHECK_THROWS_AS(validate_dmc({{0.5, 0.6}, {0.1, 0.9}}), RowNotStochastic);
    CHECK_THROWS_AS(validate_dmc({{-0.1, 1.1}, {0.5, 0.5}}), NegativeEntry);
    CHECK_THROWS_AS(validate_dmc({{0.5, 0.5}, {1.0}}), InvalidArgument);
    CHECK_THROWS_AS(validate_dmc({}), InvalidArgument);
}

TEST_CASE("output_marginal") {
    Dmc b = bsc(0.1);
    Dist py = output_marginal(Dist::uniform(2), b);
    CHECK(py(0) == doctest::Approx(0.5).epsilon(1e-14));

    Dist point = output_marginal(Dist::point_mass(2, 0), b);
    CHECK(point(0) == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(point(1) == doctest::Approx(0.1).epsilon(1e-14));

    Dist skew = output_marginal(Dist({0.25, 0.75}), b);
    CHECK(skew(0) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(skew(1) == doctest::Approx(0.7).epsilon(1e-13));

    CHECK_THROWS_AS(output_marginal(Dist::uniform(3), b), DimensionMismatch);
}

TEST_CASE("info_density_table values and absence") {
    Dmc b = bsc(0.1);
    InfoDensityTable t = info_density_table(Dist::uniform(2), b);
    CHECK(t(0, 0) == doctest::Approx(std::log2(1.8)).epsilon(1e-12));
    CHECK(t(0, 1) == doctest::Approx(std::log2(0.2)).epsilon(1e-12));
    CHECK(t.is_present(1, 0));

    Dmc id = validate_dmc({{1, 0}, {0, 1}});
    InfoDensityTable ti = info_density_table(Dist::uniform(2), id);
    CHECK(ti(0, 0) == doctest::Approx(1.0));
    CHECK_FALSE(ti.is_present(0, 1));
    CHECK_FALSE(ti.is_present(1, 0));

    InfoDensityTable tp = info_density_table(Dist::point_mass(2, 0), b);
    CHECK(tp(0, 0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(tp(0, 1) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("info_density_table is permutation equivariant in outputs") {
    Dmc w = validate_dmc({{0.5, 0.3, 0.2}, {0.1, 0.1, 0.8}});
    Dist px({0.4, 0.6});
    InfoDensityTable t = info_density_table(px, w);
    // Relabel outputs with the cycle (0 1 2).
    std::vector<std::size_t> perm{1, 2, 0};
    std::vector<std::vector<double>> rows(2, std::vector<double>(3));
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 3; ++y) rows[x][perm[y]] = w(x, y);
    InfoDensityTable tp = info_density_table(px, validate_dmc(rows));
    for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 3; ++y) {
            REQUIRE(t.is_present(x, y) == tp.is_present(x, perm[y]));
            if (t.is_present(x, y))
                CHECK(t(x, y) == doctest::Approx(tp(x, perm[y])).epsilon(1e-12));
        }
    }
}

TEST_CASE("mutual_information golden values") {
    Dmc id = validate_dmc({{1, 0}, {0, 1}});
    CHECK(mutual_information(Dist::uniform(2), id) == doctest::Approx(1.0).epsilon(1e-12));

    Dmc flat = validate_dmc({{0.3, 0.7}, {0.3, 0.7}});
    CHECK(mutual_information(Dist::uniform(2), flat) == doctest::Approx(0.0).epsilon(1e-12));

    double expect = 1.0 - oracles::binary_entropy_bits(0.11);
    CHECK(mutual_information(Dist::uniform(2), bsc(0.11)) ==
          doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect == doctest::Approx(0.500084).epsilon(1e-6));
}

TEST_CASE("mutual information equals weighted mean of the density table") {
    for (std::uint64_t i = 0; i < 20; ++i) {
        std::size_t nx = 2 + i % 3, ny = 2 + (i / 3) % 3;
        std::vector<std::vector<double>> rows(nx);
        for (std::size_t x = 0; x < nx; ++x) rows[x] = random_dist(ny, 11, i * 8 + x).mass();
        Dmc w = validate_dmc(rows);
        Dist px = random_dist(nx, 13, i);
        InfoDensityTable t = info_density_table(px, w);
        double mean = 0.0, mass = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            for (std::size_t y = 0; y < ny; ++y) {
                if (!t.is_present(x, y)) continue;
                mean += px(x) * w(x, y) * t(x, y);
                mass += px(x) * w(x, y);
            }
        }
        CHECK(std::abs(mass - 1.0) < 1e-12);
        CHECK(mutual_information(px, w) == doctest::Approx(std::max(mean, 0.0)).epsilon(1e-12));
    }
}

TEST_CASE("kl_divergence") {
    Dist p({0.3, 0.7});
    CHECK(kl_divergence(p, p) == doctest::Approx(0.0));
    CHECK(kl_divergence(Dist({1.0, 0.0}), Dist::uniform(2)) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(std::isinf(kl_divergence(Dist::uniform(2), Dist({1.0, 0.0}))));
    CHECK_THROWS_AS(kl_divergence(Dist::uniform(2), Dist::uniform(3)), DimensionMismatch);
}

TEST_CASE("total_variation") {
    CHECK(total_variation(Dist::uniform(4), Dist::uniform(4)) == doctest::Approx(0.0));
    CHECK(total_variation(Dist({1.0, 0.0}), Dist({0.0, 1.0})) == doctest::Approx(1.0));
    CHECK(total_variation(Dist({0.9, 0.1}), Dist::uniform(2)) ==
          doctest::Approx(0.4).epsilon(1e-14));
    CHECK_THROWS_AS(total_variation(Dist::uniform(2), Dist::uniform(3)), DimensionMismatch);
}

TEST_CASE("Bretagnolle-Huber inequality holds on random pairs") {
    for (std::uint64_t i = 0; i < 10000; ++i) {
        std::size_t k = 2 + i % 5;
        Dist p = random_dist(k, 101, i);
        Dist q = random_dist(k, 103, i);
        double tv = total_variation(p, q);
        double kl = kl_divergence(p, q);
        double bound = std::isinf(kl) ? 1.0 : std::sqrt(1.0 - std::exp(-kl));
        CHECK(tv <= bound + 1e-12);
    }
}

}  // TEST_SUITE
