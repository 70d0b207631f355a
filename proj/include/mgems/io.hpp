#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mgems/ems.hpp"
#include "mgems/grid_model.hpp"

namespace mgems::io {

/// Load a telemetry profile CSV. Canonical header:
///   timestamp_s,v_dc,i_dc,v_rms,i_rms,p_active_w,frequency_hz,load_kw
/// The AC-side and frequency columns may be absent (defaults keep PF = 1 and
/// f = 50 Hz). Timestamps must be strictly increasing. Advisory findings
/// (PV above the bench cap, frequency out of band) are appended to
/// `warnings` when given.
std::vector<grid::TelemetrySample> load_profile(const std::string& path,
                                                std::vector<std::string>* warnings = nullptr);

void save_profile(const std::vector<grid::TelemetrySample>& profile, const std::string& path);

enum class ProfileShape { Day, Cloudy, Night };

ProfileShape profile_shape_from_name(const std::string& name);

/// Synthetic telemetry for desk-scale runs: a diurnal plateau near the 5 kW
/// bench limit (day), the same with passing clouds (cloudy), or PV-free
/// hours (night). Frequency is held at 50 Hz and the AC side at PF 0.98.
std::vector<grid::TelemetrySample> synth_profile(ProfileShape shape, std::size_t ticks,
                                                 double tick_seconds, std::uint64_t seed);

/// Rule-based dispatch with no optimization: PV serves the load first,
/// deficits fall to battery discharge (above the SOC floor) then diesel, and
/// surplus PV charges the battery. Records the per-tick mismatch of the
/// supply that reached the load.
std::vector<ems::BaselineTick> generate_baseline(const std::vector<grid::TelemetrySample>& profile,
                                                 grid::BatteryState battery,
                                                 double tick_seconds,
                                                 double* final_soc_pct = nullptr);

std::vector<ems::BaselineTick> load_baseline(const std::string& path);
void save_baseline(const std::vector<ems::BaselineTick>& baseline, const std::string& path);

/// Strict key-value configuration (JSON document). Unknown keys are rejected
/// by name.
ems::EmsConfig load_config(const std::string& path);
ems::EmsConfig parse_config_text(const std::string& text);

struct ArmSummary {
    double mean_mismatch_pct = 0.0;
    double diesel_kwh = 0.0;
    double diesel_liters = 0.0;
    std::optional<double> final_soc_pct;
    std::optional<double> mean_pv_usage_kw;
};

struct CompareSummary {
    std::size_t ticks = 0;
    ArmSummary baseline;
    ArmSummary moo;
    std::optional<double> mean_mismatch_improvement_pct;
    std::size_t improvement_defined_ticks = 0;
    double diesel_delta_kwh = 0.0;            // baseline minus optimized, whole run
    double diesel_delta_kwh_per_cycle = 0.0;  // per control tick
    std::uint64_t seed = 0;
};

struct CompareResult {
    std::vector<ems::BaselineTick> baseline;
    ems::RunResult run;
    CompareSummary summary;
};

/// Baseline arm, then the optimized arm against it, then the summary block.
CompareResult run_compare(const std::vector<grid::TelemetrySample>& profile,
                          const ems::EmsConfig& cfg);

CompareSummary summarize(const std::vector<grid::TelemetrySample>& profile,
                         const std::vector<ems::BaselineTick>& baseline,
                         const ems::RunResult& run, const ems::EmsConfig& cfg,
                         std::optional<double> baseline_final_soc);

// Report artifacts. Values are printed at fixed precision (4 decimals for
// the per-tick report), so two runs with the same seed produce
// byte-identical files.
void write_report_csv(const ems::RunResult& run, const std::string& path);
std::vector<ems::EmsTickReport> load_report_csv(const std::string& path);

void write_front_dump_csv(const ems::RunResult& run, const std::string& path);
void write_indicators_csv(const ems::RunResult& run, const std::string& path);
std::string summary_to_json(const CompareSummary& summary);

/// Write report.csv, fronts.csv, indicators.csv and summary.json into dir.
void write_run_outputs(const CompareResult& result, const std::string& dir);

/// Recompute per-tick indicators from a front-dump CSV; writes a CSV when
/// out_csv is nonempty and returns a JSON summary of the means.
std::string indicators_from_front_dump(const std::string& front_csv, const std::string& out_csv,
                                       std::uint64_t seed, std::size_t mc_samples = 20000);

} // namespace mgems::io
