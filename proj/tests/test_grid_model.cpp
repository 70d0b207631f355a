#include <doctest.h>

#include <cmath>

#include "mgems/errors.hpp"
#include "mgems/grid_model.hpp"
#include "mgems/rng.hpp"

using namespace mgems;
using namespace mgems::grid;

namespace {

TelemetrySample sample_with(double v_dc, double i_dc, double load_kw = 4.9,
                            double frequency = 50.0) {
    TelemetrySample s;
    s.v_dc = v_dc;
    s.i_dc = i_dc;
    s.load_kw = load_kw;
    s.frequency_hz = frequency;
    s.v_rms = 100.0;
    s.i_rms = 2.0;
    s.p_active_w = 600.0;
    return s;
}

} // namespace

TEST_CASE("pv_power_kw: DC product with absolute values") {
    CHECK(pv_power_kw(sample_with(0.0, 12.0)) == 0.0);
    CHECK(pv_power_kw(sample_with(500.0, 10.0)) == doctest::Approx(5.0));
    CHECK(pv_power_kw(sample_with(-400.0, -5.0)) == doctest::Approx(2.0));
}

TEST_CASE("power_factor: ratio of real to apparent power") {
    TelemetrySample s = sample_with(500.0, 10.0);

    s.p_active_w = 600.0;
    CHECK(power_factor(s).pf == doctest::Approx(1.0));
    s.p_active_w = 300.0;
    CHECK(power_factor(s).pf == doctest::Approx(0.5));
    s.p_active_w = 0.0;
    CHECK(power_factor(s).pf == doctest::Approx(0.0));

    // Over-unity measurements clip rather than report nonsense.
    s.p_active_w = 900.0;
    CHECK(power_factor(s).pf == doctest::Approx(1.0));

    s.v_rms = 0.0;
    auto reading = power_factor(s);
    CHECK(reading.pf == 1.0);
    CHECK(reading.zero_apparent);
}

TEST_CASE("evaluate: objective formulas at a reference decision") {
    TelemetrySample s = sample_with(510.0, 10.0, 4.9);
    BatteryState battery{80.0, 40.0, 40.0};
    ControlDecision d{0.0089, 0.0, 4.9, 4.9};

    auto o = evaluate(d, s, battery, 5.0);
    CHECK(o.fuel_l == doctest::Approx(0.0089 * (5.0 / 3600.0) * 0.4).epsilon(1e-12));
    CHECK(o.fuel_l == doctest::Approx(4.944e-6).epsilon(1e-3));
    CHECK(o.freq_penalty_hz == 0.0);
    CHECK(o.pf_penalty == doctest::Approx(0.0));
    CHECK(o.mismatch_kw == doctest::Approx(std::abs(4.9 - (4.9 + 0.0089))));
    CHECK(o.degradation_pct == 0.0);
    CHECK(o.pv_neg_kw == doctest::Approx(-4.9));
}

TEST_CASE("evaluate: battery sign convention in the mismatch term") {
    TelemetrySample s = sample_with(500.0, 10.0, 4.0);
    BatteryState battery{80.0, 40.0, 40.0};

    // Charging 1 kW counts against supply.
    ControlDecision charging{0.0, 1.0, 4.0, 5.0};
    CHECK(evaluate(charging, s, battery, 5.0).mismatch_kw == doctest::Approx(0.0));

    // Discharging 1 kW adds to supply.
    ControlDecision discharging{0.0, -1.0, 4.0, 3.0};
    CHECK(evaluate(discharging, s, battery, 5.0).mismatch_kw == doctest::Approx(0.0));

    ControlDecision full_pv{0.0, 0.0, 4.0, 5.0};
    CHECK(evaluate(full_pv, s, battery, 5.0).mismatch_kw == doctest::Approx(1.0));
}

TEST_CASE("evaluate: mismatch is non-negative and zero exactly at balance") {
    BatteryState battery{80.0, 40.0, 40.0};
    Rng rng(29);
    for (int i = 0; i < 300; ++i) {
        TelemetrySample s = sample_with(500.0, 10.0, 0.5 + 4.5 * rng.uniform());
        ControlDecision d{10.0 * rng.uniform(), -5.0 + 10.0 * rng.uniform(),
                          0.5 + 4.5 * rng.uniform(), 5.0 * rng.uniform()};
        const auto o = evaluate(d, s, battery, 5.0);
        CHECK(o.mismatch_kw >= 0.0);
        const double supply = d.pv_used_kw + d.diesel_kw - d.battery_kw;
        if (o.mismatch_kw == 0.0) CHECK(supply == s.load_kw);

        // Exact balance: demand set to the decision's own supply.
        TelemetrySample matched = s;
        matched.load_kw = supply;
        if (supply >= 0.5 && supply <= 5.0) {
            CHECK(evaluate(d, matched, battery, 5.0).mismatch_kw == 0.0);
        }
    }
}

TEST_CASE("evaluate: degradation magnitude and PV negation") {
    TelemetrySample s = sample_with(500.0, 10.0);
    BatteryState battery{80.0, 10.0, 40.0};
    ControlDecision d{0.0, -5.0, 4.9, 5.0};
    auto o = evaluate(d, s, battery, 3600.0);
    CHECK(o.degradation_pct == doctest::Approx(50.0));
    CHECK(o.pv_neg_kw == doctest::Approx(-5.0));
}

TEST_CASE("evaluate: contract violations are rejected") {
    TelemetrySample s = sample_with(400.0, 10.0);  // 4 kW available
    BatteryState battery{80.0, 40.0, 40.0};
    CHECK_THROWS_AS(evaluate({12.0, 0.0, 4.0, 1.0}, s, battery, 5.0), ContractError);
    CHECK_THROWS_AS(evaluate({0.0, 7.0, 4.0, 1.0}, s, battery, 5.0), ContractError);
    CHECK_THROWS_AS(evaluate({0.0, 0.0, 0.1, 1.0}, s, battery, 5.0), ContractError);
    CHECK_THROWS_AS(evaluate({0.0, 0.0, 4.0, 4.5}, s, battery, 5.0), ContractError);
    CHECK_THROWS_AS(evaluate({0.0, 0.0, 4.0, 1.0}, s, battery, 0.0), ContractError);
}

TEST_CASE("evaluate: pure function of its arguments") {
    TelemetrySample s = sample_with(480.0, 9.5, 4.7);
    BatteryState battery{63.0, 40.0, 40.0};
    ControlDecision d{1.25, -0.75, 3.9, 4.1};
    auto a = evaluate(d, s, battery, 5.0);
    auto b = evaluate(d, s, battery, 5.0);
    CHECK(a.to_vector() == b.to_vector());
}

TEST_CASE("soc_step: delta formula and clamps") {
    BatteryState b{80.0, 10.0, 40.0};
    CHECK(soc_step(b, 0.0, 1.0).soc_pct == 80.0);
    CHECK(soc_step(b, -5.0, 1.0).soc_pct == doctest::Approx(30.0));

    b.soc_pct = 99.0;
    CHECK(soc_step(b, 5.0, 1.0).soc_pct == 100.0);
    b.soc_pct = 1.0;
    CHECK(soc_step(b, -5.0, 1.0).soc_pct == 0.0);

    CHECK_THROWS_AS(soc_step(b, 1.0, 0.0), ContractError);
    b.capacity_kwh = 0.0;
    CHECK_THROWS_AS(soc_step(b, 1.0, 1.0), ContractError);
}

TEST_CASE("soc_step: reversible when no clamp triggers") {
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        BatteryState b{20.0 + 60.0 * rng.uniform(), 40.0, 40.0};
        const double power = -5.0 + 10.0 * rng.uniform();
        const double dt = 0.001 + 0.2 * rng.uniform();
        auto forward = soc_step(b, power, dt);
        if (forward.soc_pct > 0.0 && forward.soc_pct < 100.0) {
            auto back = soc_step(forward, -power, dt);
            CHECK(back.soc_pct == doctest::Approx(b.soc_pct).epsilon(1e-12));
        }
    }
}

TEST_CASE("soc_step: per-tick delta stays small at the configured capacity") {
    // 5 kW for 5 s on 40 kWh moves SOC by ~0.0174%, always under 0.05%.
    BatteryState b{80.0, 40.0, 40.0};
    const double dt_hours = 5.0 / 3600.0;
    const double delta = std::abs(soc_step(b, 5.0, dt_hours).soc_pct - b.soc_pct);
    CHECK(delta == doctest::Approx(0.017361).epsilon(1e-4));
    CHECK(delta < 0.05);
}

TEST_CASE("pv_efficiency: conversion, tracking, and total") {
    std::vector<MppTraceSample> at_rated{{500.0, 10.0, 1.0}, {500.0, 10.0, 1.0}};
    auto perfect = pv_efficiency(5000.0, 5000.0, at_rated, 5000.0);
    CHECK(perfect.eta_p == doctest::Approx(1.0));
    CHECK(perfect.eta_mpp == doctest::Approx(1.0));
    CHECK(perfect.eta_total == doctest::Approx(1.0));

    CHECK(pv_efficiency(5000.0, 4500.0, at_rated, 5000.0).eta_p == doctest::Approx(0.9));

    std::vector<MppTraceSample> at_half{{500.0, 5.0, 2.0}, {250.0, 10.0, 3.0}};
    CHECK(pv_efficiency(5000.0, 5000.0, at_half, 5000.0).eta_mpp == doctest::Approx(0.5));

    CHECK_THROWS_AS(pv_efficiency(0.0, 100.0, at_rated, 5000.0), ContractError);
    CHECK_THROWS_AS(pv_efficiency(5000.0, 100.0, {}, 5000.0), ContractError);
    CHECK_THROWS_AS(pv_efficiency(5000.0, 100.0, at_rated, 0.0), ContractError);
}

TEST_CASE("repair: projection onto the boxes is idempotent") {
    CHECK(repair({12.0, 0.0, 1.0, 0.0}, 5.0).diesel_kw == 10.0);
    CHECK(repair({0.0, 0.0, 1.0, 5.0}, 4.3).pv_used_kw == doctest::Approx(4.3));
    CHECK(repair({0.0, -9.0, 0.0, -1.0}, 4.3).battery_kw == -5.0);
    CHECK(repair({0.0, 0.0, 0.0, 0.0}, 5.0).load_kw == 0.5);

    ControlDecision in_bounds{3.0, -2.0, 2.5, 4.0};
    auto once = repair(in_bounds, 5.0);
    CHECK(once.diesel_kw == in_bounds.diesel_kw);
    CHECK(once.battery_kw == in_bounds.battery_kw);
    CHECK(once.load_kw == in_bounds.load_kw);
    CHECK(once.pv_used_kw == in_bounds.pv_used_kw);

    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        ControlDecision d{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20),
                          rng.uniform(-20, 20)};
        const double pv = rng.uniform(0, 6);
        auto r1 = repair(d, pv);
        auto r2 = repair(r1, pv);
        CHECK(r1.diesel_kw == r2.diesel_kw);
        CHECK(r1.battery_kw == r2.battery_kw);
        CHECK(r1.load_kw == r2.load_kw);
        CHECK(r1.pv_used_kw == r2.pv_used_kw);
    }
}

TEST_CASE("validate_sample: advisory findings") {
    TelemetrySample ok = sample_with(500.0, 9.0);
    CHECK(validate_sample(ok).empty());

    TelemetrySample bad = sample_with(600.0, 10.0, 4.0, 44.0);  // 6 kW PV, 44 Hz
    auto findings = validate_sample(bad);
    CHECK(findings.size() == 2);
}
