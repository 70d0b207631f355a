#pragma once

#include <string>
#include <vector>

namespace mgems::grid {

// Decision-variable boxes of the dispatch problem, in kW.
inline constexpr double kDieselMinKw = 0.0;
inline constexpr double kDieselMaxKw = 10.0;
inline constexpr double kBatteryMinKw = -5.0;
inline constexpr double kBatteryMaxKw = 5.0;
inline constexpr double kLoadMinKw = 0.5;
inline constexpr double kLoadMaxKw = 5.0;

inline constexpr double kNominalFrequencyHz = 50.0;
inline constexpr double kFuelLitersPerKwh = 0.4;
inline constexpr double kPvSanityCapKw = 5.0;  // test-bench power limit; flagged, not clamped

/// One timestamped measurement record standing in for the live feed.
struct TelemetrySample {
    double timestamp_s = 0.0;
    double v_dc = 0.0;       // volts
    double i_dc = 0.0;       // amperes
    double v_rms = 0.0;      // volts, line-to-neutral
    double i_rms = 0.0;      // amperes
    double p_active_w = 0.0; // watts
    double frequency_hz = kNominalFrequencyHz;
    double load_kw = 0.0;    // demanded load
};

/// Four-variable dispatch decision. battery_kw is positive when charging.
struct ControlDecision {
    double diesel_kw = 0.0;
    double battery_kw = 0.0;
    double load_kw = kLoadMinKw;  // delivered load
    double pv_used_kw = 0.0;
};

struct BatteryState {
    double soc_pct = 80.0;
    double capacity_kwh = 40.0;
    double operating_floor_pct = 40.0;
};

/// The six per-tick objectives, all in minimization sense.
struct EmsObjectives {
    double fuel_l = 0.0;          // O1
    double mismatch_kw = 0.0;     // O2
    double freq_penalty_hz = 0.0; // O3
    double pf_penalty = 0.0;      // O4
    double degradation_pct = 0.0; // O5, |dSOC| for the decision
    double pv_neg_kw = 0.0;       // O6, negated PV usage

    std::vector<double> to_vector() const {
        return {fuel_l, mismatch_kw, freq_penalty_hz, pf_penalty, degradation_pct, pv_neg_kw};
    }
    static EmsObjectives from_vector(const std::vector<double>& v);
};

struct PowerFactorReading {
    double pf = 1.0;
    bool zero_apparent = false;  // no measurable apparent power; PF defaulted to 1
};

struct PvEfficiency {
    double eta_p = 0.0;
    double eta_mpp = 0.0;
    double eta_total = 0.0;
};

/// One DC-side trace sample for MPP efficiency integration.
struct MppTraceSample {
    double u_dc = 0.0;  // volts
    double i_dc = 0.0;  // amperes
    double dt_s = 0.0;  // seconds
};

/// PV power in kW from DC-side telemetry: |v_dc| * |i_dc| / 1000.
double pv_power_kw(const TelemetrySample& sample);

/// Measured power factor |P_A| / (V_rms * I_rms * 3), clipped to [0, 1].
/// Zero apparent power reads as PF = 1 with the zero_apparent flag set.
PowerFactorReading power_factor(const TelemetrySample& sample);

/// Evaluate the six objectives for a decision at one tick.
/// Supply counts the battery with its discharge sign, so charging appears as
/// extra demand. Throws ContractError when the decision violates its boxes
/// or uses more PV than the sample provides.
EmsObjectives evaluate(const ControlDecision& decision, const TelemetrySample& sample,
                       const BatteryState& battery, double dt_seconds);

/// Advance SOC by battery_kw over dt_hours, clamped into [0, 100].
BatteryState soc_step(const BatteryState& battery, double p_battery_kw, double dt_hours);

/// Conversion, MPP-tracking, and total efficiency of the PV test bench.
PvEfficiency pv_efficiency(double p_dc_w, double p_ac_w,
                           const std::vector<MppTraceSample>& mpp_trace,
                           double p_mpp_rated_w);

/// Project a decision onto its boxes; pv_used is clipped to [0, pv_available].
ControlDecision repair(const ControlDecision& decision, double pv_available_kw);

/// Sanity findings for a sample (frequency band, PV cap); advisory only.
std::vector<std::string> validate_sample(const TelemetrySample& sample);

} // namespace mgems::grid
