#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "spathermo/simplex.hpp"

using namespace spathermo;

namespace {

Distribution random_positive(std::mt19937_64& g, int n) {
    std::vector<double> w(n);
    for (auto& x : w) x = 0.05 + static_cast<double>(g() >> 11) * 0x1.0p-53;
    return Distribution::normalized(w);
}

} // namespace

TEST_CASE("energy spectrum validation") {
    CHECK_THROWS_AS(EnergySpectrum({1.0}), DomainError);
    CHECK_THROWS_AS(EnergySpectrum({2.0, 2.0, 2.0}), DomainError);
    EnergySpectrum eps({3.0, 1.0, 2.0});
    CHECK(eps.min_level() == 1.0);
    CHECK(eps.max_level() == 3.0);
    CHECK(eps.spread() == 2.0);
    CHECK(eps.uniform_mean() == doctest::Approx(2.0));
}

TEST_CASE("distribution invariants") {
    CHECK_THROWS_AS(Distribution({0.5, 0.6}), DomainError);
    CHECK_THROWS_AS(Distribution({-0.1, 1.1}), DomainError);
    CHECK_THROWS_AS(Distribution(std::vector<double>{}), DomainError);
    Distribution p({0.25, 0.75});
    CHECK(p[1] == 0.75);
    Distribution u = Distribution::uniform(4);
    CHECK(u[0] == doctest::Approx(0.25));
}

TEST_CASE("linear mean") {
    CHECK(linear_mean(Distribution({0.5, 0.5}), EnergySpectrum({0, 1})) == doctest::Approx(0.5));
    CHECK(linear_mean(Distribution::point_mass(2, 0), EnergySpectrum({3, 7})) == 3.0);
    CHECK(linear_mean(Distribution({0.2, 0.3, 0.5}), EnergySpectrum({0, 1, 2})) ==
          doctest::Approx(1.3).epsilon(1e-14));
    CHECK_THROWS_AS(linear_mean(Distribution({0.5, 0.5}), EnergySpectrum({0, 1, 2})), DomainError);
}

TEST_CASE("escort transform") {
    const Distribution p({0.8, 0.2});
    const Distribution e = escort(p, 2.0);
    CHECK(e[0] == doctest::Approx(16.0 / 17.0).epsilon(1e-14));
    CHECK(e[1] == doctest::Approx(1.0 / 17.0).epsilon(1e-14));

    // uniform is a fixed point; order 1 is the identity
    const Distribution u = Distribution::uniform(3);
    const Distribution eu = escort(u, 3.0);
    for (int i = 0; i < 3; ++i) CHECK(eu[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    const Distribution e1 = escort(p, 1.0);
    CHECK(e1[0] == doctest::Approx(0.8).epsilon(1e-14));

    CHECK_THROWS_AS(escort(p, 0.0), DomainError);
    CHECK_THROWS_AS(escort(p, -1.0), DomainError);
}

TEST_CASE("zero entries stay zero for every order") {
    const Distribution p({0.0, 0.3, 0.7});
    for (double a : {0.2, 0.5, 1.0, 2.0}) {
        const Distribution e = escort(p, a);
        CHECK(e[0] == 0.0);
    }
}

TEST_CASE("escort inverse round trip") {
    const Distribution p({16.0 / 17.0, 1.0 / 17.0});
    const Distribution q = escort_inverse(p, 2.0);
    CHECK(q[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(0.2).epsilon(1e-12));

    std::mt19937_64 g(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(g() % 5);
        const Distribution x = random_positive(g, n);
        const double a = 0.1 + 9.9 * static_cast<double>(g() >> 11) * 0x1.0p-53;
        const Distribution back = escort(escort_inverse(x, a), a);
        for (int i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-10));
    }
}

TEST_CASE("escort composition") {
    std::mt19937_64 g(11);
    for (int trial = 0; trial < 100; ++trial) {
        const Distribution x = random_positive(g, 4);
        const double a = 0.3 + 2.0 * static_cast<double>(g() >> 11) * 0x1.0p-53;
        const double b = 0.3 + 2.0 * static_cast<double>(g() >> 11) * 0x1.0p-53;
        const Distribution lhs = escort(escort(x, a), b);
        const Distribution rhs = escort(x, a * b);
        for (int i = 0; i < 4; ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-11));
    }
}

TEST_CASE("escort survives extreme orders via log-space evaluation") {
    const Distribution p({0.9999, 0.0001});
    const Distribution e = escort(p, 800.0);
    CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isfinite(e[1]));
    const Distribution f = escort(p, 1e-3);
    CHECK(f[0] + f[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("escort mean") {
    const EnergySpectrum eps({0, 1});
    const Distribution p({0.8, 0.2});
    CHECK(escort_mean(p, eps, 2.0) == doctest::Approx(1.0 / 17.0).epsilon(1e-14));
    CHECK(escort_mean(p, eps, 1.0) == doctest::Approx(linear_mean(p, eps)).epsilon(1e-14));
    const Distribution u = Distribution::uniform(2);
    CHECK(escort_mean(u, eps, 5.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("total variation") {
    CHECK(total_variation(Distribution({1, 0}), Distribution({0, 1})) == doctest::Approx(1.0));
    CHECK(total_variation(Distribution({0.5, 0.5}), Distribution({0.5, 0.5})) == 0.0);
}
