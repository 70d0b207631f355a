#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace mgems::metrics {

using Point = std::vector<double>;

/// Hypervolume value; standard_error is set only for Monte-Carlo estimates.
struct HypervolumeResult {
    double value = 0.0;
    std::optional<double> standard_error;
};

struct KneeResult {
    std::size_t index = 0;
    double distance = 0.0;  // normalized distance to the extreme-point hyperplane
    bool degenerate = false;  // two-member front, tie rule applied
};

struct IndicatorReport {
    double hypervolume = 0.0;
    std::optional<double> hypervolume_se;
    double gd_ideal = 0.0;
    double igd = 0.0;
    std::optional<std::size_t> knee_index;
    std::vector<double> diversity;
};

/// Objective-space volume dominated by `front` relative to `ref`
/// (minimization). Exact recursive slicing up to 4 objectives, Monte-Carlo
/// with `mc_samples` draws above that. Dominated members are dropped first.
/// Throws ContractError when a point exceeds the reference point.
HypervolumeResult hypervolume(const std::vector<Point>& front, const Point& ref,
                              std::size_t mc_samples = 20000, std::uint64_t mc_seed = 1);

/// Mean Euclidean distance from each front member to the ideal point.
double gd_ideal(const std::vector<Point>& front, const Point& ideal);

/// Mean over the reference set of the minimum distance to the approximation.
double igd(const std::vector<Point>& approximation, const std::vector<Point>& reference_set);

/// Knee point: normalize per objective, take the member farthest from the
/// hyperplane through the per-objective extreme points; ties resolve to the
/// lower first objective. Fronts of two members return the lower-first-
/// objective member flagged degenerate; fewer than two throw ContractError.
KneeResult knee_point(const std::vector<Point>& front);

/// Per-point mean normalized distance to the k = min(5, n-1) nearest
/// neighbours; higher values mark sparser regions. Singleton fronts yield {0}.
std::vector<double> diversity_index(const std::vector<Point>& front);

/// |load - supply| / load * 100. Throws ContractError when load <= 0.
double mismatch_pct(double load_kw, double supply_kw);

/// (baseline - moo) / baseline * 100; negative when the optimized arm is
/// worse. Throws ContractError when the baseline mismatch is not positive.
double mismatch_improvement(double m_baseline_pct, double m_moo_pct);

/// Reference point for hypervolume: per-objective max plus 10% of the span,
/// padded by at least 1e-6.
Point default_reference_point(const std::vector<Point>& front);

} // namespace mgems::metrics
