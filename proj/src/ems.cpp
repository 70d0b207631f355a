#include "mgems/ems.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "mgems/errors.hpp"
#include "mgems/rng.hpp"

namespace mgems::ems {

void EmsConfig::validate() const {
    if (tick_seconds <= 0.0) throw ContractError("tick_seconds must be positive");
    if (initial_soc_pct < 0.0 || initial_soc_pct > 100.0)
        throw ContractError("initial_soc_pct must lie in [0,100]");
    if (soc_weight_threshold_pct < 0.0 || soc_weight_threshold_pct > 100.0)
        throw ContractError("soc_weight_threshold_pct must lie in [0,100]");
    if (pv_usage_floor_fraction < 0.0 || pv_usage_floor_fraction > 1.0)
        throw ContractError("pv_usage_floor_fraction must lie in [0,1]");
    if (degradation_ceiling_pct < 0.0) throw ContractError("degradation_ceiling_pct must be >= 0");
    if (battery_capacity_kwh <= 0.0) throw ContractError("battery_capacity_kwh must be positive");
    if (battery_floor_pct < 0.0 || battery_floor_pct > 100.0)
        throw ContractError("battery_floor_pct must lie in [0,100]");
    optimizer.validate();
}

WeightVector adaptive_weights(double soc_pct, const EmsConfig& cfg) {
    if (soc_pct < 0.0 || soc_pct > 100.0) throw ContractError("adaptive_weights: SOC out of range");
    return soc_pct < cfg.soc_weight_threshold_pct ? kLowSocWeights : kHighSocWeights;
}

std::vector<ScoredMember> score_front(const nsga3::ParetoFront& front, const WeightVector& w) {
    if (front.empty()) throw ContractError("score_front: empty front (optimizer failure)");
    const std::size_t n = front.size();
    const std::size_t m = front.members.front().objectives.size();
    if (m != w.size()) throw ContractError("score_front: expected six objectives");

    std::vector<double> lo(m, std::numeric_limits<double>::infinity());
    std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
    for (const auto& member : front.members) {
        for (std::size_t k = 0; k < m; ++k) {
            lo[k] = std::min(lo[k], member.objectives[k]);
            hi[k] = std::max(hi[k], member.objectives[k]);
        }
    }

    std::vector<ScoredMember> scored(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double span = hi[k] - lo[k];
            const double normalized = (span > 1e-12) ? (front.members[i].objectives[k] - lo[k]) / span : 0.0;
            s += w[k] * normalized;
        }
        scored[i] = {i, s};
    }
    std::stable_sort(scored.begin(), scored.end(), [&](const ScoredMember& a, const ScoredMember& b) {
        if (a.score != b.score) return a.score < b.score;
        // Tie: prefer larger PV usage (more negative O6).
        return front.members[a.index].objectives[5] < front.members[b.index].objectives[5];
    });
    return scored;
}

grid::ControlDecision decision_from_values(const std::vector<double>& values) {
    if (values.size() != 4) throw ContractError("decision_from_values: expected 4 variables");
    return {values[0], values[1], values[2], values[3]};
}

Selection post_select(const std::vector<ScoredMember>& scored, const nsga3::ParetoFront& front,
                      const BaselineTick& baseline, const grid::TelemetrySample& sample,
                      const EmsConfig& cfg) {
    if (scored.empty()) throw ContractError("post_select: empty candidate list");
    const double pv_available = grid::pv_power_kw(sample);
    const double pv_floor = cfg.pv_usage_floor_fraction * pv_available;
    const bool baseline_comparable = std::isfinite(baseline.mismatch_pct) && baseline.mismatch_pct > 0.0 &&
                                     sample.load_kw > 0.0;

    struct Candidate {
        std::size_t front_index;
        double score;
        double pv_used;
        double diesel;
        double degradation;
    };
    std::vector<Candidate> survivors;
    for (const ScoredMember& sm : scored) {
        const auto& member = front.members[sm.index];
        const grid::ControlDecision d = decision_from_values(member.decision.values);
        if (d.diesel_kw > baseline.diesel_kw + 1e-12) continue;
        if (!baseline_comparable) continue;
        const double mismatch = member.objectives[1] / sample.load_kw * 100.0;
        if (!(mismatch < baseline.mismatch_pct)) continue;
        if (d.pv_used_kw < pv_floor) continue;
        if (member.objectives[4] > cfg.degradation_ceiling_pct) continue;
        survivors.push_back({sm.index, sm.score, d.pv_used_kw, d.diesel_kw, member.objectives[4]});
    }
    if (survivors.empty()) {
        // Fall back to the best weighted score.
        return {scored.front().index, scored.front().score, true};
    }
    std::stable_sort(survivors.begin(), survivors.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.pv_used != b.pv_used) return a.pv_used > b.pv_used;
        // Diesel improvement descending == candidate diesel ascending.
        if (a.diesel != b.diesel) return a.diesel < b.diesel;
        if (a.degradation != b.degradation) return a.degradation < b.degradation;
        return a.score < b.score;
    });
    return {survivors.front().front_index, survivors.front().score, false};
}

namespace {

// Battery box for this tick: no discharge at or below the floor, and never
// enough discharge to cross it within one tick.
nsga3::Bounds battery_bounds(const grid::BatteryState& battery, double dt_hours,
                             double floor_pct) {
    nsga3::Bounds b{grid::kBatteryMinKw, grid::kBatteryMaxKw};
    if (battery.soc_pct <= floor_pct) {
        b.lower = 0.0;
    } else {
        const double discharge_cap =
            (battery.soc_pct - floor_pct) / 100.0 * battery.capacity_kwh / dt_hours;
        b.lower = std::max(b.lower, -discharge_cap);
    }
    const double charge_cap = (100.0 - battery.soc_pct) / 100.0 * battery.capacity_kwh / dt_hours;
    b.upper = std::min(b.upper, std::max(0.0, charge_cap));
    if (b.upper < b.lower) b.upper = b.lower;
    return b;
}

} // namespace

TickResult tick(const grid::BatteryState& battery, const grid::TelemetrySample& sample,
                const BaselineTick& baseline, const EmsConfig& cfg,
                const nsga3::ReferenceDirectionSet& refs, std::size_t tick_index) {
    const double dt_hours = cfg.tick_seconds / 3600.0;
    const double pv_available = grid::pv_power_kw(sample);

    nsga3::Problem problem;
    problem.n_objectives = 6;
    problem.bounds = {
        {grid::kDieselMinKw, grid::kDieselMaxKw},
        battery_bounds(battery, dt_hours, cfg.battery_floor_pct),
        {grid::kLoadMinKw, grid::kLoadMaxKw},
        {0.0, pv_available},
    };
    problem.evaluate = [&](std::span<const double> x) {
        const grid::ControlDecision d{x[0], x[1], x[2], x[3]};
        return grid::evaluate(d, sample, battery, cfg.tick_seconds).to_vector();
    };

    nsga3::OptimizerConfig opt = cfg.optimizer;
    opt.rng_seed = mix_seed(cfg.optimizer.rng_seed, tick_index);

    TickResult result;
    try {
        result.front = nsga3::optimize(problem, opt, refs);
    } catch (const Error& e) {
        throw EvaluationError("tick " + std::to_string(tick_index) + ": " + e.what());
    }
    if (result.front.empty())
        throw EvaluationError("tick " + std::to_string(tick_index) + ": optimizer returned no front");

    const WeightVector w = adaptive_weights(battery.soc_pct, cfg);
    const auto scored = score_front(result.front, w);
    const Selection sel = post_select(scored, result.front, baseline, sample, cfg);

    result.chosen_index = sel.front_index;
    result.fallback = sel.fallback;
    result.decision = decision_from_values(result.front.members[sel.front_index].decision.values);
    result.state = grid::soc_step(battery, result.decision.battery_kw, dt_hours);

    const double supply =
        result.decision.pv_used_kw + result.decision.diesel_kw - result.decision.battery_kw;
    result.mismatch_pct =
        sample.load_kw > 0.0 ? metrics::mismatch_pct(sample.load_kw, supply)
                             : std::numeric_limits<double>::quiet_NaN();

    EmsTickReport& rep = result.report;
    rep.soc_pct = result.state.soc_pct;
    if (std::isfinite(baseline.mismatch_pct) && baseline.mismatch_pct > 0.0 &&
        std::isfinite(result.mismatch_pct)) {
        rep.mismatch_improvement_pct =
            metrics::mismatch_improvement(baseline.mismatch_pct, result.mismatch_pct);
    }
    rep.freq_penalty_hz = std::abs(sample.frequency_hz - grid::kNominalFrequencyHz);
    rep.battery_ratio = sample.load_kw > 0.0 ? result.decision.battery_kw / sample.load_kw : 0.0;
    rep.load_ratio = sample.load_kw > 0.0 ? result.decision.load_kw / sample.load_kw : 0.0;
    rep.pv_usage_kw = result.decision.pv_used_kw;
    rep.moo_score = sel.score;
    rep.diesel_kw = result.decision.diesel_kw;

    // Front-local analytics for the dump.
    std::vector<metrics::Point> objs;
    objs.reserve(result.front.size());
    for (const auto& member : result.front.members) objs.push_back(member.objectives);
    if (objs.size() >= 2) {
        result.knee_index = metrics::knee_point(objs).index;
        result.diversity = metrics::diversity_index(objs);
    } else {
        result.diversity.assign(objs.size(), 0.0);
    }
    return result;
}

RunResult run(const std::vector<grid::TelemetrySample>& profile,
              const std::vector<BaselineTick>& baseline, const EmsConfig& cfg) {
    cfg.validate();
    if (profile.size() != baseline.size())
        throw ContractError("run: profile and baseline differ in length");
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (std::abs(profile[i].timestamp_s - baseline[i].timestamp_s) > 1e-9)
            throw ContractError("run: baseline timestamp mismatch at row " + std::to_string(i));
    }

    RunResult result;
    result.final_soc_pct = cfg.initial_soc_pct;
    if (profile.empty()) return result;

    const auto refs = nsga3::das_dennis(6, cfg.reference_layers);
    grid::BatteryState battery{cfg.initial_soc_pct, cfg.battery_capacity_kwh, cfg.battery_floor_pct};

    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < profile.size(); ++i) {
        result.ticks.push_back(tick(battery, profile[i], baseline[i], cfg, refs, i));
        battery = result.ticks.back().state;
        if (cfg.paced) {
            const auto deadline =
                start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>((static_cast<double>(i) + 1.0) * cfg.tick_seconds));
            std::this_thread::sleep_until(deadline);
        }
    }
    result.final_soc_pct = battery.soc_pct;

    // Run-level indicator context: ideal point and IGD reference set from the
    // union of every tick's front.
    std::vector<metrics::Point> all_points;
    for (const auto& t : result.ticks) {
        for (const auto& member : t.front.members) all_points.push_back(member.objectives);
    }
    std::vector<double> ideal(6, std::numeric_limits<double>::infinity());
    for (const auto& p : all_points) {
        for (std::size_t k = 0; k < 6; ++k) ideal[k] = std::min(ideal[k], p[k]);
    }
    std::vector<metrics::Point> reference_set;
    {
        auto fronts = nsga3::nondominated_sort(std::span<const nsga3::ObjectiveVector>(all_points));
        if (!fronts.empty()) {
            reference_set.reserve(fronts[0].size());
            for (std::size_t idx : fronts[0]) reference_set.push_back(all_points[idx]);
        }
    }

    result.indicators.reserve(result.ticks.size());
    for (std::size_t i = 0; i < result.ticks.size(); ++i) {
        std::vector<metrics::Point> objs;
        objs.reserve(result.ticks[i].front.size());
        for (const auto& member : result.ticks[i].front.members) objs.push_back(member.objectives);

        metrics::IndicatorReport rep;
        const auto ref = metrics::default_reference_point(objs);
        const auto hv = metrics::hypervolume(objs, ref, cfg.hv_mc_samples,
                                             mix_seed(cfg.optimizer.rng_seed, 0x4856'0000ULL + i));
        rep.hypervolume = hv.value;
        rep.hypervolume_se = hv.standard_error;
        rep.gd_ideal = metrics::gd_ideal(objs, ideal);
        rep.igd = reference_set.empty() ? 0.0 : metrics::igd(objs, reference_set);
        rep.knee_index = result.ticks[i].knee_index;
        rep.diversity = result.ticks[i].diversity;
        result.indicators.push_back(std::move(rep));
    }
    return result;
}

} // namespace mgems::ems
