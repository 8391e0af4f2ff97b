#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "spathermo/entropy.hpp"

using namespace spathermo;

namespace {

std::mt19937_64 g_rng(17);

double unit() { return static_cast<double>(g_rng() >> 11) * 0x1.0p-53; }

Distribution random_dist(int n) {
    std::vector<double> w(n);
    for (auto& x : w) x = -std::log(std::max(unit(), 1e-16));
    return Distribution::normalized(w);
}

} // namespace

TEST_CASE("renyi entropy basics") {
    const Distribution u4 = Distribution::uniform(4);
    for (double a : {0.5, 1.0, 2.0, 7.0})
        CHECK(renyi(u4, a) == doctest::Approx(std::log(4.0)).epsilon(1e-12));

    const Distribution pm = Distribution::point_mass(3, 0);
    for (double a : {0.5, 1.0, 2.0}) CHECK(renyi(pm, a) == doctest::Approx(0.0));

    CHECK(renyi(Distribution({0.5, 0.25, 0.25}), 2.0) ==
          doctest::Approx(-std::log(0.375)).epsilon(1e-14));

    CHECK_THROWS_AS(renyi(u4, 0.0), DomainError);
    CHECK_THROWS_AS(renyi(u4, -1.0), DomainError);
}

TEST_CASE("shannon branch handles zeros") {
    const Distribution p({0.5, 0.5, 0.0});
    CHECK(renyi(p, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("large order is stable on skewed distributions") {
    const Distribution p({0.999, 0.0005, 0.0005});
    const double r = renyi(p, 1000.0);
    CHECK(std::isfinite(r));
    CHECK(r == doctest::Approx(-std::log(0.999) * 1000.0 / 999.0).epsilon(1e-9));
}

TEST_CASE("spa entropy") {
    const Distribution u4 = Distribution::uniform(4);
    const EntropySpec id(2.0, make_identity());
    CHECK(spa_entropy(u4, id) == doctest::Approx(renyi(u4, 2.0)).epsilon(1e-14));

    // hq on uniform: (n^{1-q} - 1)/(1-q)
    for (double q : {0.5, 2.0}) {
        const EntropySpec spec(1.3, make_hq(q));
        CHECK(spa_entropy(u4, spec) ==
              doctest::Approx((std::pow(4.0, 1.0 - q) - 1.0) / (1.0 - q)).epsilon(1e-12));
    }

    const Distribution pm = Distribution::point_mass(4, 2);
    CHECK(spa_entropy(pm, EntropySpec(0.7, make_supra(0.7, 2.0))) == doctest::Approx(0.0));

    // supra with r = 2 requires R < 1: uniform over 4 states violates it
    CHECK_THROWS_AS(spa_entropy(u4, EntropySpec(2.0, make_supra(2.0, 2.0))), DomainError);
}

TEST_CASE("sharma-mittal special cases") {
    const Distribution p({0.5, 0.5});
    CHECK(sharma_mittal(p, 2.0, 2.0) == doctest::Approx(0.5).epsilon(1e-14));

    for (int t = 0; t < 40; ++t) {
        const Distribution x = random_dist(2 + static_cast<int>(g_rng() % 4));
        const double a = 0.3 + 2.5 * unit();
        CHECK(sharma_mittal(x, a, 1.0) == doctest::Approx(renyi(x, a)).epsilon(1e-13));
        CHECK(sharma_mittal(x, 1.0, 1.0) == doctest::Approx(renyi(x, 1.0)).epsilon(1e-13));
    }
    CHECK(sharma_mittal(Distribution::point_mass(3, 1), 2.0, 0.5) == doctest::Approx(0.0));
}

TEST_CASE("supra-extensive special cases") {
    const Distribution p({0.5, 0.5});
    CHECK(supra_extensive(p, 2.0, 1.0) == doctest::Approx(0.5).epsilon(1e-13));
    for (int t = 0; t < 40; ++t) {
        const Distribution x = random_dist(3);
        const double a = 0.3 + 2.5 * unit();
        CHECK(supra_extensive(x, a, a) == doctest::Approx(renyi(x, a)).epsilon(1e-13));
    }
    CHECK(supra_extensive(Distribution::point_mass(3, 0), 1.5, 0.5) == doctest::Approx(0.0));
}

TEST_CASE("uniform maximizes every family") {
    for (int t = 0; t < 60; ++t) {
        const int n = 2 + static_cast<int>(g_rng() % 4);
        const Distribution x = random_dist(n);
        const Distribution u = Distribution::uniform(n);
        const double a = 0.3 + 2.5 * unit();
        CHECK(renyi(x, a) <= renyi(u, a) + 1e-12);
        CHECK(sharma_mittal(x, a, 0.6) <= sharma_mittal(u, a, 0.6) + 1e-12);
        CHECK(supra_extensive(x, a, 0.5) <= supra_extensive(u, a, 0.5) + 1e-12);
    }
}

TEST_CASE("nonnegativity") {
    for (int t = 0; t < 60; ++t) {
        const Distribution x = random_dist(2 + static_cast<int>(g_rng() % 5));
        const double a = 0.3 + 2.5 * unit();
        CHECK(renyi(x, a) >= -1e-12);
        CHECK(sharma_mittal(x, a, 1.7) >= -1e-12);
        CHECK(supra_extensive(x, a, 0.4) >= -1e-12);
    }
}

TEST_CASE("pseudo-additivity on independent products") {
    std::vector<MapPtr> maps = {make_identity(), make_hq(0.5), make_hq(1.6),
                                make_supra(1.4, 0.6)};
    for (const auto& map : maps) {
        for (int t = 0; t < 30; ++t) {
            const Distribution p = random_dist(2 + static_cast<int>(g_rng() % 2));
            const Distribution q = random_dist(2 + static_cast<int>(g_rng() % 2));
            const double a = 0.4 + 2.0 * unit();

            std::vector<double> joint;
            for (double pi : p.probs())
                for (double qj : q.probs()) joint.push_back(pi * qj);
            const Distribution pq = Distribution::normalized(joint);

            const EntropySpec spec(a, map);
            if (!map->domain().contains(renyi(pq, a), 1e-9)) continue;
            const double lhs = spa_entropy(pq, spec);
            const double rhs =
                pseudo_add(*map, spa_entropy(p, spec), spa_entropy(q, spec));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
}

TEST_CASE("escort order swap") {
    std::vector<MapPtr> maps = {make_identity(), make_hq(0.7)};
    for (const auto& map : maps) {
        for (int t = 0; t < 50; ++t) {
            const int n = 2 + static_cast<int>(g_rng() % 4);
            const Distribution p = random_dist(n);
            const double a = 0.3 + 2.5 * unit();
            const EntropySpec at_a(a, map);
            const EntropySpec at_inv(1.0 / a, map);
            CHECK(spa_entropy(escort(p, a), at_inv) ==
                  doctest::Approx(spa_entropy(p, at_a)).epsilon(1e-10));
        }
    }
}
