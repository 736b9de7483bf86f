#include <doctest.h>

#include <cmath>

#include "wursim/errors.hpp"
#include "wursim/power.hpp"

using namespace wursim;

TEST_CASE("cap energy: 100 uF at 4.12 V is 849 uJ") {
    CHECK(cap_energy(100e-6, 4.12) == doctest::Approx(849e-6).epsilon(0.001));
    CHECK(cap_energy(100e-6, 4.12) == doctest::Approx(848.72e-6).epsilon(1e-6));
    CHECK(cap_energy(47e-6, 2.0) == doctest::Approx(94e-6).epsilon(1e-12));
    CHECK(cap_energy(1.0, 0.0) == 0.0);
    CHECK_THROWS_AS(cap_energy(-1e-6, 1.0), DomainError);
    CHECK_THROWS_AS(cap_energy(1e-6, -1.0), DomainError);
    CHECK_THROWS_AS(cap_energy(0.0, 1.0), DomainError);
}

TEST_CASE("depleted with no input stays depleted") {
    HarvesterParams p;
    HarvesterState s;
    for (int i = 0; i < 10'000; ++i) s = harvester_step(s, p, 0.0, 0.0, 63e-6, 1e-3);
    CHECK(s.mode == HarvesterMode::Depleted);
    CHECK(s.v_cap == 0.0);
    CHECK(s.harvested_energy == 0.0);
}

TEST_CASE("cold start needs both 600 mV and 15 uW") {
    HarvesterParams p;
    const HarvesterState s;
    CHECK(harvester_step(s, p, 0.7, 20e-6, 0.0, 1e-3).mode == HarvesterMode::ColdStart);
    CHECK(harvester_step(s, p, 0.6, 15e-6, 0.0, 1e-3).mode == HarvesterMode::ColdStart);
    // 1 % below either threshold, the other one satisfied.
    CHECK(harvester_step(s, p, 0.6 * 0.99, 15e-6, 0.0, 1e-3).mode == HarvesterMode::Depleted);
    CHECK(harvester_step(s, p, 0.6, 15e-6 * 0.99, 0.0, 1e-3).mode == HarvesterMode::Depleted);
    CHECK(harvester_step(s, p, 5.0, 1e-6, 0.0, 1e-3).mode == HarvesterMode::Depleted);
    CHECK(harvester_step(s, p, 0.3, 1.0, 0.0, 1e-3).mode == HarvesterMode::Depleted);
}

TEST_CASE("threshold sharpness holds for any epsilon down to 1 %") {
    HarvesterParams p;
    for (double eps = 0.5; eps >= 0.01; eps *= 0.8) {
        HarvesterState s;
        for (int i = 0; i < 100; ++i) s = harvester_step(s, p, 0.6 * (1 - eps), 1.0, 0.0, 1e-3);
        REQUIRE(s.mode == HarvesterMode::Depleted);
        for (int i = 0; i < 100; ++i) s = harvester_step(s, p, 5.0, 15e-6 * (1 - eps), 0.0, 1e-3);
        REQUIRE(s.mode == HarvesterMode::Depleted);
        REQUIRE(s.v_cap == 0.0);
    }
}

TEST_CASE("cold start hands over to regulation at the enable voltage, monotone charging") {
    HarvesterParams p;
    HarvesterState s;
    const double pin = 100e-3;
    double prev = 0.0;
    bool reached = false;
    for (int i = 0; i < 20'000; ++i) {
        s = harvester_step(s, p, 2.0, pin, 0.0, 1e-4);
        REQUIRE(s.v_cap >= prev);
        prev = s.v_cap;
        if (s.mode == HarvesterMode::Regulating) {
            REQUIRE(s.v_cap >= p.enable_voltage);
            reached = true;
            break;
        }
        REQUIRE(s.mode == HarvesterMode::ColdStart);
    }
    CHECK(reached);
    // The stored energy is exactly what cold start let through.
    CHECK(cap_energy(p.c_store, s.v_cap) == doctest::Approx(s.harvested_energy).epsilon(1e-12));
}

TEST_CASE("boost runs from 100 mV once regulating") {
    HarvesterParams p;
    HarvesterState s;
    s.mode = HarvesterMode::Regulating;
    s.v_cap = 3.0;
    auto t = harvester_step(s, p, 0.1, 1e-3, 0.0, 1e-3);
    CHECK(t.harvested_energy == doctest::Approx(p.boost_efficiency * 1e-6));
    t = harvester_step(s, p, 0.099, 1e-3, 0.0, 1e-3);
    CHECK(t.harvested_energy == 0.0);
}

TEST_CASE("regulating discharge matches closed form and a 100x finer Euler integration") {
    HarvesterParams p;
    const double v0 = 4.12, load = 63e-6, dt = 1e-3;
    HarvesterState s;
    s.mode = HarvesterMode::Regulating;
    s.v_cap = v0;

    // dv/dt = -load / (eta C v), explicit Euler at dt/100.
    double v_fine = v0;
    const double h = dt / 100.0;
    double worst_closed = 0.0, worst_euler = 0.0;
    for (int k = 1; k <= 1000; ++k) {
        s = harvester_step(s, p, 0.0, 0.0, load, dt);
        for (int j = 0; j < 100; ++j) v_fine -= h * load / (p.output_efficiency * p.c_store * v_fine);
        const double closed = std::sqrt(v0 * v0 - 2.0 * load * k * dt / (p.output_efficiency * p.c_store));
        worst_closed = std::max(worst_closed, std::abs(s.v_cap - closed) / closed);
        worst_euler = std::max(worst_euler, std::abs(s.v_cap - v_fine) / v_fine);
    }
    CHECK(worst_closed < 1e-12);
    CHECK(worst_euler < 1e-5);
    CHECK(s.mode == HarvesterMode::Regulating);
    CHECK(0.5 * p.c_store * (v0 * v0 - s.v_cap * s.v_cap) == doctest::Approx(load * 1.0 / p.output_efficiency));
}

TEST_CASE("below uvlo the rail drops and the load is shed") {
    HarvesterParams p;
    HarvesterState s;
    s.mode = HarvesterMode::Regulating;
    s.v_cap = 1.95;
    int steps = 0;
    while (s.mode == HarvesterMode::Regulating && steps < 1'000'000) {
        s = harvester_step(s, p, 0.0, 0.0, 1e-3, 1e-4);
        ++steps;
    }
    REQUIRE(s.mode == HarvesterMode::Depleted);
    CHECK(s.v_cap < p.uvlo);
    const double v = s.v_cap;
    s = harvester_step(s, p, 0.0, 0.0, 1e-3, 1.0);
    CHECK(s.v_cap == v);
}

TEST_CASE("per-step energy conservation") {
    HarvesterParams p;
    HarvesterState s;
    s.mode = HarvesterMode::Regulating;
    s.v_cap = 2.5;
    for (int i = 0; i < 1000; ++i) {
        const double pin = (i % 7) * 1e-4, load = (i % 3) * 50e-6;
        const auto t = harvester_step(s, p, 1.0, pin, load, 1e-4);
        const double d_cap = cap_energy(p.c_store, t.v_cap) - cap_energy(p.c_store, s.v_cap);
        const double in = t.harvested_energy - s.harvested_energy;
        const double out = t.delivered_energy - s.delivered_energy;
        REQUIRE(in == doctest::Approx(p.boost_efficiency * pin * 1e-4));
        REQUIRE(d_cap == doctest::Approx(in - out).epsilon(1e-9));
        REQUIRE(t.harvested_energy >= s.harvested_energy);
        REQUIRE(t.delivered_energy >= s.delivered_energy);
        s = t;
    }
}

TEST_CASE("parameter validation") {
    HarvesterParams p;
    p.boost_min_voltage = 0.7;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.coldstart_efficiency = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.uvlo = 2.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    LoadProfile l;
    l.p_idle = 1e-6;
    CHECK_THROWS_AS(l.validate(), ConfigError);
}
