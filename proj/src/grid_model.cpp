#include "mgems/grid_model.hpp"

#include <algorithm>
#include <cmath>

#include "mgems/errors.hpp"

namespace mgems::grid {

namespace {
constexpr double kBoxTol = 1e-9;
}

EmsObjectives EmsObjectives::from_vector(const std::vector<double>& v) {
    if (v.size() != 6) throw ContractError("EmsObjectives: expected 6 components");
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

double pv_power_kw(const TelemetrySample& sample) {
    return std::abs(sample.v_dc) * std::abs(sample.i_dc) / 1000.0;
}

PowerFactorReading power_factor(const TelemetrySample& sample) {
    const double apparent = sample.v_rms * sample.i_rms * 3.0;
    if (apparent <= 0.0) return {1.0, true};
    const double pf = std::abs(sample.p_active_w) / apparent;
    return {std::clamp(pf, 0.0, 1.0), false};
}

EmsObjectives evaluate(const ControlDecision& decision, const TelemetrySample& sample,
                       const BatteryState& battery, double dt_seconds) {
    if (dt_seconds <= 0.0) throw ContractError("evaluate: dt must be positive");
    const double pv_available = pv_power_kw(sample);
    if (decision.diesel_kw < kDieselMinKw - kBoxTol || decision.diesel_kw > kDieselMaxKw + kBoxTol ||
        decision.battery_kw < kBatteryMinKw - kBoxTol || decision.battery_kw > kBatteryMaxKw + kBoxTol ||
        decision.load_kw < kLoadMinKw - kBoxTol || decision.load_kw > kLoadMaxKw + kBoxTol ||
        decision.pv_used_kw < -kBoxTol || decision.pv_used_kw > pv_available + kBoxTol) {
        throw ContractError("evaluate: decision violates its box constraints");
    }

    const double dt_hours = dt_seconds / 3600.0;

    EmsObjectives o;
    o.fuel_l = decision.diesel_kw * dt_hours * kFuelLitersPerKwh;
    // Battery contributes to supply with its discharge sign: charging
    // (battery_kw > 0) draws power, discharging injects it.
    const double supply = decision.pv_used_kw + decision.diesel_kw - decision.battery_kw;
    o.mismatch_kw = std::abs(sample.load_kw - supply);
    o.freq_penalty_hz = std::abs(sample.frequency_hz - kNominalFrequencyHz);
    o.pf_penalty = 1.0 - power_factor(sample).pf;
    o.degradation_pct = std::abs(decision.battery_kw) * dt_hours / battery.capacity_kwh * 100.0;
    o.pv_neg_kw = -decision.pv_used_kw;
    return o;
}

BatteryState soc_step(const BatteryState& battery, double p_battery_kw, double dt_hours) {
    if (dt_hours <= 0.0) throw ContractError("soc_step: dt must be positive");
    if (battery.capacity_kwh <= 0.0) throw ContractError("soc_step: capacity must be positive");
    const double delta = p_battery_kw * dt_hours / battery.capacity_kwh * 100.0;
    BatteryState next = battery;
    next.soc_pct = std::min(100.0, std::max(0.0, battery.soc_pct + delta));
    return next;
}

PvEfficiency pv_efficiency(double p_dc_w, double p_ac_w,
                           const std::vector<MppTraceSample>& mpp_trace,
                           double p_mpp_rated_w) {
    if (p_dc_w <= 0.0) throw ContractError("pv_efficiency: DC power must be positive");
    if (p_mpp_rated_w <= 0.0) throw ContractError("pv_efficiency: rated MPP power must be positive");
    if (mpp_trace.empty()) throw ContractError("pv_efficiency: empty MPP trace");

    double duration = 0.0;
    double integral = 0.0;
    for (const auto& s : mpp_trace) {
        duration += s.dt_s;
        integral += s.u_dc * s.i_dc * s.dt_s;
    }
    if (duration <= 0.0) throw ContractError("pv_efficiency: trace duration must be positive");

    PvEfficiency eff;
    eff.eta_p = p_ac_w / p_dc_w;
    eff.eta_mpp = integral / (duration * p_mpp_rated_w);
    eff.eta_total = eff.eta_p * eff.eta_mpp;
    return eff;
}

ControlDecision repair(const ControlDecision& decision, double pv_available_kw) {
    ControlDecision r;
    r.diesel_kw = std::clamp(decision.diesel_kw, kDieselMinKw, kDieselMaxKw);
    r.battery_kw = std::clamp(decision.battery_kw, kBatteryMinKw, kBatteryMaxKw);
    r.load_kw = std::clamp(decision.load_kw, kLoadMinKw, kLoadMaxKw);
    r.pv_used_kw = std::clamp(decision.pv_used_kw, 0.0, std::max(0.0, pv_available_kw));
    return r;
}

std::vector<std::string> validate_sample(const TelemetrySample& sample) {
    std::vector<std::string> findings;
    if (sample.v_rms < 0.0) findings.push_back("negative v_rms");
    if (sample.i_rms < 0.0) findings.push_back("negative i_rms");
    if (sample.frequency_hz < 45.0 || sample.frequency_hz > 55.0)
        findings.push_back("frequency outside the 45-55 Hz sanity band");
    if (sample.load_kw < 0.0) findings.push_back("negative load");
    if (pv_power_kw(sample) > kPvSanityCapKw + 1e-9)
        findings.push_back("PV power above the 5 kW bench limit");
    return findings;
}

} // namespace mgems::grid
