#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tsembed/lagrangian.hpp"

using namespace tsembed;

namespace {

std::vector<Sample> random_samples(std::uint64_t seed, std::size_t n, double lo, double hi) {
    std::mt19937_64 gen(seed);
    std::vector<Sample> s(n);
    for (auto& x : s) x = {oracle::uniform(gen, lo, hi), oracle::uniform(gen, lo, hi), oracle::uniform(gen, lo, hi)};
    return s;
}

}  // namespace

TEST_CASE("mechanical Lagrangian values") {
    const auto free = mechanical(potentials::free());
    CHECK(free.eval(0.0, 7.0, 3.0) == 4.5);

    const auto harm = mechanical(potentials::harmonic());
    CHECK(harm.d2(0.0, 2.0, 0.3) == -2.0);
    CHECK(harm.d3(0.0, 0.7, 1.5) == 1.5);
    CHECK(harm.d33(0.0, 0.7, 1.5) == 1.0);
    CHECK(harm.d23(0.0, 0.7, 1.5) == 0.0);
    CHECK(harm.eval(0.0, 1.0, 1.0) == 0.0);

    const auto pend = mechanical(potentials::pendulum());
    CHECK(pend.eval(0.0, 0.0, 2.0) == 2.0);
    CHECK(pend.d2(0.0, M_PI / 2, 0.0) == doctest::Approx(-1.0));
}

TEST_CASE("registry") {
    CHECK(registry_names().size() == 4);
    for (auto name : registry_names()) CHECK(find_potential(name).name == name);
    CHECK(find_potential("quartic").du(2.0) == 8.0);
    CHECK_THROWS_AS(find_potential("kepler"), DomainError);
}

TEST_CASE("built-in Lagrangians pass partial validation") {
    const auto samples = random_samples(99, 100, -10.0, 10.0);
    for (auto name : registry_names()) {
        const auto rep = check_partials(mechanical(find_potential(name)), samples, 1e-6);
        INFO(std::string(name));
        CHECK(rep.pass());
        CHECK(rep.checks.size() == 4);
    }
}

TEST_CASE("negated d2 fails with deviation about twice the partial") {
    auto bad = mechanical(potentials::harmonic());
    bad.d2 = [](double, double x, double) { return x; };  // sign flipped
    const std::vector<Sample> samples{{0.0, 1.5, 0.2}, {0.0, -0.5, 1.0}};
    const auto rep = check_partials(bad, samples, 1e-6);
    CHECK_FALSE(rep.pass());
    const auto* d2 = rep.find("d2");
    REQUIRE(d2 != nullptr);
    CHECK_FALSE(d2->pass);

    // Finite-difference oracle for dL/dx at the worst sample (x = 1.5).
    const double x = 1.5;
    const double h = 1e-5;
    const double fd = (bad.eval(0, x + h, 0.2) - bad.eval(0, x - h, 0.2)) / (2 * h);
    CHECK(d2->max_deviation == doctest::Approx(std::abs(bad.d2(0, x, 0.2) - fd)).epsilon(1e-6));
    CHECK(d2->max_deviation == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(rep.find("d3")->pass);
}

TEST_CASE("partials without second derivatives fall back to finite differences") {
    Lagrangian l;
    l.name = "custom";
    l.eval = [](double t, double x, double v) { return std::cosh(v) * (1 + x * x) + t * v; };
    l.d2 = [](double, double x, double v) { return 2 * x * std::cosh(v); };
    l.d3 = [](double t, double x, double v) { return std::sinh(v) * (1 + x * x) + t; };
    CHECK_FALSE(l.has_d33());
    CHECK_FALSE(l.has_d23());
    const auto rep = check_partials(l, random_samples(7, 20, -2, 2), 1e-6);
    CHECK(rep.pass());
    CHECK(rep.checks.size() == 2);
    CHECK(l.second_vv(0.3, 0.5, 0.7) == doctest::Approx(std::cosh(0.7) * 1.25).epsilon(1e-7));
    CHECK(l.second_xv(0.3, 0.5, 0.7) == doctest::Approx(2 * 0.5 * std::sinh(0.7)).epsilon(1e-7));
}

TEST_CASE("check_partials preconditions") {
    const auto l = mechanical(potentials::harmonic());
    const std::vector<Sample> one{{0, 0, 0}};
    CHECK_THROWS_AS(check_partials(l, {}, 1e-6), DomainError);
    CHECK_THROWS_AS(check_partials(l, one, 0.0), DomainError);
}

TEST_CASE("apply_along") {
    const auto u4 = TimeScale::uniform(0.0, 1.0, 4);
    const auto line = GridFunction::sample(u4, [](double t) { return t; });
    const auto e = apply_along(mechanical(potentials::free()), u4, line, Partial::eval);
    CHECK(e.domain() == Domain::kappa);
    for (double g : e.values()) CHECK(g == 0.5);

    const auto harm = mechanical(potentials::harmonic());
    const auto zero = GridFunction::sample(u4, [](double) { return 0.0; });
    for (double g : apply_along(harm, u4, zero, Partial::d2).values()) CHECK(g == 0.0);

    const auto u2 = TimeScale::uniform(0.0, 1.0, 2);
    const auto line2 = GridFunction::sample(u2, [](double t) { return t; });
    for (double g : apply_along(harm, u2, line2, Partial::d3).values()) CHECK(g == 1.0);

    CHECK_THROWS_AS(apply_along(harm, u4, line2, Partial::eval), DomainError);
}
