#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mgems/grid_model.hpp"
#include "mgems/indicators.hpp"
#include "mgems/nsga3.hpp"

namespace mgems::ems {

using WeightVector = std::array<double, 6>;

inline constexpr WeightVector kLowSocWeights{0.3, 0.2, 0.1, 0.1, 0.2, 0.1};
inline constexpr WeightVector kHighSocWeights{0.4, 0.2, 0.1, 0.1, 0.1, 0.1};

struct EmsConfig {
    double tick_seconds = 5.0;
    double initial_soc_pct = 80.0;
    double soc_weight_threshold_pct = 50.0;
    double pv_usage_floor_fraction = 0.9;
    double degradation_ceiling_pct = 0.05;  // max |dSOC| per tick admitted by the filter
    double battery_capacity_kwh = 40.0;
    double battery_floor_pct = 40.0;
    nsga3::OptimizerConfig optimizer;
    std::vector<nsga3::Layer> reference_layers{{3, 1.0}, {2, 0.5}};
    bool paced = false;               // pace ticks to tick_seconds wall clock
    std::size_t hv_mc_samples = 20000;

    void validate() const;
};

/// One row of the baseline (no-optimizer) arm, aligned to a profile sample.
struct BaselineTick {
    double timestamp_s = 0.0;
    double diesel_kw = 0.0;
    double battery_kw = 0.0;  // positive = charging
    double pv_used_kw = 0.0;  // PV routed to the load
    double mismatch_pct = 0.0;
};

/// Per-tick record mirroring the report columns.
struct EmsTickReport {
    double soc_pct = 0.0;
    std::optional<double> mismatch_improvement_pct;  // empty when the baseline mismatch is zero
    double freq_penalty_hz = 0.0;
    double battery_ratio = 0.0;  // battery kW / demanded load kW
    double load_ratio = 0.0;     // delivered load / demanded load
    double pv_usage_kw = 0.0;
    double moo_score = 0.0;
    double diesel_kw = 0.0;
};

struct ScoredMember {
    std::size_t index = 0;  // into the front
    double score = 0.0;
};

struct Selection {
    std::size_t front_index = 0;
    double score = 0.0;
    bool fallback = false;  // the post-selection filter emptied
};

struct TickResult {
    grid::ControlDecision decision;
    grid::BatteryState state;  // after applying the decision
    EmsTickReport report;
    nsga3::ParetoFront front;
    std::size_t chosen_index = 0;
    std::optional<std::size_t> knee_index;
    std::vector<double> diversity;
    double mismatch_pct = 0.0;  // of the chosen decision
    bool fallback = false;
};

struct RunResult {
    std::vector<TickResult> ticks;
    std::vector<metrics::IndicatorReport> indicators;  // one per tick
    double final_soc_pct = 0.0;
};

/// SOC-adaptive objective weights: below the threshold the battery-
/// degradation weight rises at the expense of the fuel weight.
WeightVector adaptive_weights(double soc_pct, const EmsConfig& cfg);

/// Min-max normalize each objective across the front, apply the weights, and
/// return (index, score) in ascending score order; ties go to the member with
/// larger PV usage. Throws ContractError on an empty front.
std::vector<ScoredMember> score_front(const nsga3::ParetoFront& front, const WeightVector& w);

/// Algorithm post-selection: keep candidates that do not burn more diesel
/// than the baseline, improve mismatch, clear the PV-usage floor, and stay
/// under the degradation ceiling; order by PV usage, then diesel improvement,
/// then degradation, then weighted score. Falls back to the best-scored
/// member when the filter empties.
Selection post_select(const std::vector<ScoredMember>& scored, const nsga3::ParetoFront& front,
                      const BaselineTick& baseline, const grid::TelemetrySample& sample,
                      const EmsConfig& cfg);

/// Map a front member's decision values onto the dispatch variables.
grid::ControlDecision decision_from_values(const std::vector<double>& values);

/// One control tick: optimize, score, post-select, apply, update SOC.
/// Discharge is disallowed (battery lower bound raised to 0) at or below the
/// SOC floor, and limited so one tick cannot cross it.
TickResult tick(const grid::BatteryState& battery, const grid::TelemetrySample& sample,
                const BaselineTick& baseline, const EmsConfig& cfg,
                const nsga3::ReferenceDirectionSet& refs, std::size_t tick_index);

/// Replay the profile tick by tick with SOC carried forward. The baseline
/// must be timestamp-aligned with the profile (checked before any tick runs).
/// Per-tick quality indicators are attached after the loop: the GD ideal
/// point and the IGD reference set are accumulated over the whole run.
RunResult run(const std::vector<grid::TelemetrySample>& profile,
              const std::vector<BaselineTick>& baseline, const EmsConfig& cfg);

} // namespace mgems::ems
