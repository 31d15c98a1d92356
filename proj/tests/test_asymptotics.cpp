#include <doctest.h>

#include <cmath>

#include "fblearn/asymptotics.hpp"
#include "oracles.hpp"

using namespace fblearn;

namespace {
Dmc bsc(double p) { return validate_dmc({{1.0 - p, p}, {p, 1.0 - p}}); }
const double kLn2 = std::log(2.0);
}  // namespace

TEST_SUITE("asymptotics") {

TEST_CASE("gaussian_q reference points") {
    CHECK(gaussian_q(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gaussian_q(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(gaussian_q(-1.2815515655446004) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("gaussian_q_inv golden values and round trip") {
    CHECK(gaussian_q_inv(0.5) == doctest::Approx(0.0));
    CHECK(gaussian_q_inv(1e-3) == doctest::Approx(3.090232306167813).epsilon(1e-12));
    CHECK(gaussian_q_inv(0.025) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(gaussian_q_inv(1e-6) == doctest::Approx(4.7534243088229).epsilon(1e-11));
    for (double p : {1e-10, 1e-6, 1e-3, 0.02, 0.3, 0.5, 0.7, 0.98, 0.999, 1.0 - 1e-9}) {
        CHECK(std::abs(gaussian_q(gaussian_q_inv(p)) - p) <= 1e-12);
        CHECK(gaussian_q_inv(1.0 - p) == doctest::Approx(-gaussian_q_inv(p)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gaussian_q_inv(0.0), DomainError);
    CHECK_THROWS_AS(gaussian_q_inv(1.0), DomainError);
}

TEST_CASE("log_u_moments exact constants") {
    BerryEsseenMoments lu = log_u_moments();
    CHECK(lu.mean == doctest::Approx(-1.0 / kLn2).epsilon(1e-15));
    CHECK(lu.variance == doctest::Approx(1.0 / (kLn2 * kLn2)).epsilon(1e-15));
    CHECK(lu.third_abs_central ==
          doctest::Approx((12.0 / std::exp(1.0) - 2.0) / (kLn2 * kLn2 * kLn2)).epsilon(1e-15));
    CHECK(lu.third_abs_central == doctest::Approx(7.2504).epsilon(1e-5));
}

TEST_CASE("log_u_moments match numeric quadrature") {
    // Substituting u = e^{-t} turns the moments of log2 U into smooth
    // exponential-weighted integrals on [0, 60].
    auto mean_f = [](double t) { return (-t / kLn2) * std::exp(-t); };
    double mean = oracles::simpson(mean_f, 0.0, 60.0, 120000);
    BerryEsseenMoments lu = log_u_moments();
    CHECK(mean == doctest::Approx(lu.mean).epsilon(1e-10));

    auto second_f = [](double t) { return (t * t / (kLn2 * kLn2)) * std::exp(-t); };
    double second = oracles::simpson(second_f, 0.0, 60.0, 120000);
    CHECK(second - mean * mean == doctest::Approx(lu.variance).epsilon(1e-9));

    auto third_f = [&](double t) {
        double d = std::abs(-t / kLn2 - lu.mean);
        return d * d * d * std::exp(-t);
    };
    double third = oracles::simpson(third_f, 0.0, 60.0, 240000);
    CHECK(third == doctest::Approx(lu.third_abs_central).epsilon(1e-9));
}

TEST_CASE("info_density_moments") {
    Dmc id = validate_dmc({{1, 0}, {0, 1}});
    BerryEsseenMoments mi = info_density_moments(id, Dist::uniform(2));
    CHECK(mi.mean == doctest::Approx(1.0));
    CHECK(mi.variance == doctest::Approx(0.0));
    CHECK(mi.third_abs_central == doctest::Approx(0.0));

    // Direct four-atom sums as the oracle.
    Dmc b = bsc(0.11);
    double i0 = std::log2(2.0 * 0.89), i1 = std::log2(2.0 * 0.11);
    double mean = 0.89 * i0 + 0.11 * i1;
    double var = 0.89 * (i0 - mean) * (i0 - mean) + 0.11 * (i1 - mean) * (i1 - mean);
    double third = 0.89 * std::pow(std::abs(i0 - mean), 3.0) +
                   0.11 * std::pow(std::abs(i1 - mean), 3.0);
    BerryEsseenMoments mb = info_density_moments(b, Dist::uniform(2));
    CHECK(mb.mean == doctest::Approx(mean).epsilon(1e-13));
    CHECK(mb.mean == doctest::Approx(0.500084).epsilon(1e-6));
    CHECK(mb.variance == doctest::Approx(var).epsilon(1e-13));
    CHECK(mb.variance == doctest::Approx(0.8907017013975556).epsilon(1e-12));
    CHECK(mb.third_abs_central == doctest::Approx(third).epsilon(1e-13));
    CHECK(mb.third_abs_central == doctest::Approx(2.16058395059196).epsilon(1e-11));
}

TEST_CASE("berry_esseen_radius") {
    BerryEsseenMoments m = info_density_moments(bsc(0.11), Dist::uniform(2));
    BerryEsseenMoments lu = log_u_moments();
    // Hand evaluation of the formula at n = 2000.
    double n = 2000.0;
    double expect = 6.0 * (m.third_abs_central + lu.third_abs_central / n) /
                    std::pow(m.variance + lu.variance / n, 1.5) / std::sqrt(n);
    CHECK(berry_esseen_radius(m, 2000) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(berry_esseen_radius(m, 2000) == doctest::Approx(0.344807230436269).epsilon(1e-10));

    // sqrt(n) * radius approaches 6T/V^{3/2}.
    double limit = 6.0 * m.third_abs_central / std::pow(m.variance, 1.5);
    double big = 1e12;
    CHECK(std::sqrt(big) * berry_esseen_radius(m, static_cast<std::size_t>(big)) ==
          doctest::Approx(limit).epsilon(1e-9));
    // Doubling n shrinks the radius by about sqrt(2).
    double r1 = berry_esseen_radius(m, 4000), r2 = berry_esseen_radius(m, 8000);
    CHECK(r1 / r2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));

    BerryEsseenMoments zero;
    CHECK_NOTHROW(berry_esseen_radius(zero, 10));  // v~/n keeps the denominator positive
}

TEST_CASE("normal_approx_rate") {
    CapacityDispersion cd = dispersion_extremal(bsc(0.11), 1e-3);
    NormalApproxResult r = normal_approx_rate(cd, 2000, 1e-3);
    CHECK(r.rate == doctest::Approx(0.434869826740276).epsilon(1e-8));
    CHECK(r.rate == doctest::Approx(0.43487).epsilon(1e-4));
    CHECK(r.rate == doctest::Approx(r.capacity_term - r.dispersion_term).epsilon(1e-15));
    CHECK_FALSE(r.condition_ok.has_value());
    CHECK(r.min_n_hint == doctest::Approx(1e6));

    // Continuity through eps = 1/2: the dispersion term flips sign around 0.
    NormalApproxResult lo = normal_approx_rate(cd, 2000, 0.5 - 1e-9);
    NormalApproxResult hi = normal_approx_rate(cd, 2000, 0.5 + 1e-9);
    CHECK(std::abs(lo.dispersion_term) < 1e-7);
    CHECK(std::abs(hi.dispersion_term) < 1e-7);
    CHECK(lo.dispersion_term >= 0.0);
    CHECK(hi.dispersion_term <= 0.0);
    CHECK_THROWS_AS(normal_approx_rate(cd, 2000, 0.5), InvalidArgument);

    // Strictly increasing in n for eps < 1/2, approaching capacity.
    double prev = 0.0;
    for (std::size_t n : {100, 1000, 10000, 100000}) {
        double rate = normal_approx_rate(cd, n, 1e-3).rate;
        CHECK(rate > prev);
        prev = rate;
    }
    CHECK(normal_approx_rate(cd, 1u << 30, 1e-3).rate ==
          doctest::Approx(cd.capacity).epsilon(1e-4));

    // Condition check against the Eq.-style blocklength cap.
    TrainingBudget budget{1000000, 4, 0.01};
    CHECK(*normal_approx_rate(cd, 147, 1e-3, budget).condition_ok);
    CHECK_FALSE(*normal_approx_rate(cd, 148, 1e-3, budget).condition_ok);
}

TEST_CASE("normal_approx_rate_partial") {
    CapacityDispersion cd = dispersion_extremal(bsc(0.11), 1e-3);
    NormalApproxResult r = normal_approx_rate_partial(cd, 2000, 500, 1e-3);
    CHECK(r.rate == doctest::Approx(0.0924139029112698).epsilon(1e-8));
    CHECK(r.capacity_term == doctest::Approx(500.0 * cd.capacity / 2000.0).epsilon(1e-12));

    // Capacity term linear in n0, dispersion term sqrt in n0.
    NormalApproxResult r4 = normal_approx_rate_partial(cd, 2000, 4 * 500 - 1, 1e-3);
    (void)r4;
    NormalApproxResult a = normal_approx_rate_partial(cd, 10000, 100, 0.1);
    NormalApproxResult b = normal_approx_rate_partial(cd, 10000, 400, 0.1);
    CHECK(b.capacity_term == doctest::Approx(4.0 * a.capacity_term).epsilon(1e-10));
    CHECK(b.dispersion_term == doctest::Approx(2.0 * a.dispersion_term).epsilon(1e-10));

    // n0 = n coincides with the full formula algebraically.
    NormalApproxResult full = normal_approx_rate(cd, 2000, 1e-3);
    double at_n = 2000.0 * cd.capacity / 2000.0 -
                  std::sqrt(2000.0 * cd.dispersion_for(1e-3) / (2000.0 * 2000.0)) *
                      gaussian_q_inv(1e-3);
    CHECK(at_n == doctest::Approx(full.rate).epsilon(1e-12));

    CHECK_THROWS_AS(normal_approx_rate_partial(cd, 2000, 0, 1e-3), InvalidN0);
    CHECK_THROWS_AS(normal_approx_rate_partial(cd, 2000, 2000, 1e-3), InvalidN0);

    TrainingBudget budget{1000000, 4, 0.01};
    CHECK(*normal_approx_rate_partial(cd, 2000, 147, 1e-3, budget).condition_ok);
    CHECK_FALSE(*normal_approx_rate_partial(cd, 2000, 148, 1e-3, budget).condition_ok);
}

}  // TEST_SUITE
