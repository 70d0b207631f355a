#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numeric>

#include "mgems/ems.hpp"
#include "mgems/errors.hpp"
#include "mgems/io.hpp"

using namespace mgems;
using namespace mgems::ems;

namespace {

nsga3::ParetoFront make_front(const std::vector<grid::ControlDecision>& decisions,
                              const std::vector<std::vector<double>>& objectives) {
    nsga3::ParetoFront front;
    const std::vector<nsga3::Bounds> bounds{
        {0.0, 10.0}, {-5.0, 5.0}, {0.5, 5.0}, {0.0, 5.0}};
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        nsga3::DecisionVector d;
        d.values = {decisions[i].diesel_kw, decisions[i].battery_kw, decisions[i].load_kw,
                    decisions[i].pv_used_kw};
        d.bounds = bounds;
        front.members.push_back({std::move(d), objectives[i]});
    }
    front.objective_min.assign(6, 0.0);
    front.objective_max.assign(6, 1.0);
    return front;
}

grid::TelemetrySample day_sample(double pv_kw, double load_kw) {
    grid::TelemetrySample s;
    s.v_dc = 500.0;
    s.i_dc = pv_kw * 1000.0 / 500.0;
    s.load_kw = load_kw;
    s.frequency_hz = 50.0;
    s.v_rms = 120.0;
    s.p_active_w = load_kw * 1000.0;
    s.i_rms = s.p_active_w / 0.98 / (3.0 * s.v_rms);
    return s;
}

EmsConfig quick_config(std::uint64_t seed = 1, std::size_t pop = 78, std::size_t gens = 25) {
    EmsConfig cfg;
    cfg.optimizer.population_size = pop;
    cfg.optimizer.generations = gens;
    cfg.optimizer.rng_seed = seed;
    cfg.hv_mc_samples = 2000;
    return cfg;
}

} // namespace

TEST_CASE("adaptive_weights: threshold branches, boundary to the high side") {
    EmsConfig cfg;
    CHECK(adaptive_weights(49.0, cfg) == kLowSocWeights);
    CHECK(adaptive_weights(80.0, cfg) == kHighSocWeights);
    CHECK(adaptive_weights(50.0, cfg) == kHighSocWeights);

    for (const auto& w : {kLowSocWeights, kHighSocWeights}) {
        CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(adaptive_weights(101.0, cfg), ContractError);
}

TEST_CASE("score_front: degenerate and monotone cases") {
    auto single = make_front({{0.1, 0.0, 4.0, 4.5}}, {{0.1, 0.2, 0.0, 0.02, 0.01, -4.5}});
    auto scored = score_front(single, kHighSocWeights);
    REQUIRE(scored.size() == 1);
    CHECK(scored[0].score == 0.0);  // all spans degenerate

    // Identical except fuel: the lower-fuel member scores strictly lower.
    auto pair = make_front({{0.5, 0.0, 4.0, 4.5}, {0.2, 0.0, 4.0, 4.5}},
                           {{0.5, 0.2, 0.0, 0.02, 0.01, -4.5}, {0.2, 0.2, 0.0, 0.02, 0.01, -4.5}});
    scored = score_front(pair, kHighSocWeights);
    CHECK(scored[0].index == 1);
    CHECK(scored[0].score < scored[1].score);

    nsga3::ParetoFront empty;
    CHECK_THROWS_AS(score_front(empty, kHighSocWeights), ContractError);
}

TEST_CASE("score_front: matches a hand-computed weighted sum") {
    auto front = make_front({{0.2, 0.0, 4.0, 4.0}, {0.0, 0.0, 4.0, 5.0}, {0.4, 0.0, 4.0, 3.0}},
                            {{0.2, 1.0, 0.0, 0.1, 0.02, -4.0},
                             {0.0, 2.0, 0.0, 0.3, 0.00, -5.0},
                             {0.4, 0.5, 0.0, 0.2, 0.04, -3.0}});
    auto scored = score_front(front, kHighSocWeights);
    REQUIRE(scored.size() == 3);
    // Normalized columns recomputed by hand; frozen expected scores.
    CHECK(scored[0].index == 1);
    CHECK(scored[0].score == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(scored[1].index == 0);
    CHECK(scored[1].score == doctest::Approx(0.3666666667).epsilon(1e-9));
    CHECK(scored[2].index == 2);
    CHECK(scored[2].score == doctest::Approx(0.65).epsilon(1e-12));
}

TEST_CASE("score_front: argmin invariant under positive affine rescaling") {
    auto front = make_front({{0.2, 0.1, 4.0, 4.0}, {0.0, -0.4, 4.0, 5.0}, {0.4, 0.2, 4.0, 3.0},
                             {1.1, 0.9, 4.2, 2.0}},
                            {{0.2, 1.0, 0.0, 0.1, 0.02, -4.0},
                             {0.0, 2.0, 0.0, 0.3, 0.00, -5.0},
                             {0.4, 0.5, 0.0, 0.2, 0.04, -3.0},
                             {1.1, 0.4, 0.0, 0.15, 0.09, -2.0}});
    const auto base = score_front(front, kHighSocWeights);

    for (std::size_t k = 0; k < 6; ++k) {
        auto rescaled = front;
        for (auto& member : rescaled.members) member.objectives[k] = 3.7 * member.objectives[k] + 11.0;
        const auto scored = score_front(rescaled, kHighSocWeights);
        CHECK(scored[0].index == base[0].index);
    }
}

TEST_CASE("post_select: PV-descending order between survivors") {
    // The 4.9686 kW candidate beats the 4.8008 kW one on the first sort key.
    auto front = make_front({{0.0089, -0.003, 4.97, 4.9686}, {0.0131, 0.16, 4.98, 4.8008}},
                            {{1e-6, 0.02, 0.0, 0.02, 0.001, -4.9686},
                             {2e-6, 0.05, 0.0, 0.02, 0.002, -4.8008}});
    auto scored = score_front(front, kHighSocWeights);
    BaselineTick baseline{0.0, 0.05, 0.0, 4.5, 5.0};  // diesel headroom, 5% mismatch
    auto sample = day_sample(5.0, 5.0);

    EmsConfig cfg;
    auto sel = post_select(scored, front, baseline, sample, cfg);
    CHECK_FALSE(sel.fallback);
    CHECK(front.members[sel.front_index].decision.values[3] == doctest::Approx(4.9686));
}

TEST_CASE("post_select: diesel improvement breaks PV ties") {
    auto front = make_front({{0.6, 0.0, 4.9, 4.9}, {0.3, 0.0, 4.9, 4.9}},
                            {{6e-5, 0.02, 0.0, 0.02, 0.0, -4.9},
                             {3e-5, 0.03, 0.0, 0.02, 0.0, -4.9}});
    auto scored = score_front(front, kHighSocWeights);
    BaselineTick baseline{0.0, 0.8, 0.0, 4.5, 5.0};
    auto sample = day_sample(5.0, 5.0);

    EmsConfig cfg;
    auto sel = post_select(scored, front, baseline, sample, cfg);
    CHECK(front.members[sel.front_index].decision.values[0] == doctest::Approx(0.3));
}

TEST_CASE("post_select: empty filter falls back to the best score") {
    // Every candidate sits below the PV floor of 0.9 * 5 kW.
    auto front = make_front({{0.2, 0.0, 4.0, 2.0}, {0.1, 0.0, 4.0, 1.0}},
                            {{2e-5, 0.4, 0.0, 0.02, 0.0, -2.0}, {1e-5, 0.9, 0.0, 0.02, 0.0, -1.0}});
    auto scored = score_front(front, kHighSocWeights);
    BaselineTick baseline{0.0, 0.5, 0.0, 4.5, 5.0};
    auto sample = day_sample(5.0, 5.0);

    EmsConfig cfg;
    auto sel = post_select(scored, front, baseline, sample, cfg);
    CHECK(sel.fallback);
    CHECK(sel.front_index == scored.front().index);

    // A zero-mismatch baseline also empties the filter without crashing.
    BaselineTick perfect{0.0, 0.0, 0.0, 4.5, 0.0};
    sel = post_select(scored, front, perfect, sample, cfg);
    CHECK(sel.fallback);
}

TEST_CASE("tick: sunny tick favors PV and shuns diesel") {
    auto sample = day_sample(5.0, 4.99);
    grid::BatteryState battery{80.0, 40.0, 40.0};
    // Baseline under the greedy rule for this sample.
    BaselineTick baseline{0.0, 0.0, 0.01, 4.99, 0.2004};

    auto cfg = quick_config(7, 210, 60);
    auto refs = nsga3::das_dennis(6, cfg.reference_layers);
    auto result = tick(battery, sample, baseline, cfg, refs, 0);

    CHECK(result.decision.diesel_kw <= 0.05);
    CHECK(result.decision.pv_used_kw >= 4.3);
    CHECK(result.report.freq_penalty_hz == 0.0);
    CHECK(result.chosen_index < result.front.size());
    // The chosen decision is a member of the front.
    const auto& member = result.front.members[result.chosen_index];
    CHECK(member.decision.values[0] == result.decision.diesel_kw);
    CHECK(member.decision.values[3] == result.decision.pv_used_kw);
}

TEST_CASE("tick: night tick has zero PV for every candidate") {
    auto sample = day_sample(0.0, 2.0);
    grid::BatteryState battery{41.0, 40.0, 40.0};
    BaselineTick baseline{0.0, 0.0, -2.0, 0.0, 0.0};

    auto cfg = quick_config(11);
    auto refs = nsga3::das_dennis(6, cfg.reference_layers);
    auto result = tick(battery, sample, baseline, cfg, refs, 0);

    CHECK(result.decision.pv_used_kw == 0.0);
    for (const auto& member : result.front.members) CHECK(member.objectives[5] == 0.0);
}

TEST_CASE("tick: no discharge at the SOC floor") {
    auto sample = day_sample(0.0, 2.0);
    grid::BatteryState battery{40.0, 40.0, 40.0};
    BaselineTick baseline{0.0, 2.0, 0.0, 0.0, 0.0};

    auto cfg = quick_config(13);
    auto refs = nsga3::das_dennis(6, cfg.reference_layers);
    auto result = tick(battery, sample, baseline, cfg, refs, 0);

    CHECK(result.decision.battery_kw >= 0.0);
    for (const auto& member : result.front.members) CHECK(member.decision.values[1] >= 0.0);
    CHECK(result.state.soc_pct >= 40.0);
}

TEST_CASE("run: empty profile yields an empty report") {
    auto cfg = quick_config();
    auto result = run({}, {}, cfg);
    CHECK(result.ticks.empty());
    CHECK(result.indicators.empty());
    CHECK(result.final_soc_pct == cfg.initial_soc_pct);
}

TEST_CASE("run: timestamp misalignment fails before any tick") {
    auto cfg = quick_config();
    std::vector<grid::TelemetrySample> profile{day_sample(5.0, 4.9)};
    profile[0].timestamp_s = 0.0;
    std::vector<BaselineTick> baseline{{1.0, 0.0, 0.0, 4.9, 1.0}};
    CHECK_THROWS_AS(run(profile, baseline, cfg), ContractError);

    std::vector<BaselineTick> short_baseline;
    CHECK_THROWS_AS(run(profile, short_baseline, cfg), ContractError);
}

TEST_CASE("run: constant profile holds SOC and zero frequency penalty") {
    auto cfg = quick_config(19);
    std::vector<grid::TelemetrySample> profile;
    for (int i = 0; i < 10; ++i) {
        auto s = day_sample(5.0, 4.9);
        s.timestamp_s = 5.0 * i;
        profile.push_back(s);
    }
    grid::BatteryState battery{cfg.initial_soc_pct, cfg.battery_capacity_kwh, cfg.battery_floor_pct};
    auto baseline = io::generate_baseline(profile, battery, cfg.tick_seconds);

    auto result = run(profile, baseline, cfg);
    REQUIRE(result.ticks.size() == 10);
    CHECK(std::abs(result.final_soc_pct - 80.0) < 0.5);
    for (const auto& t : result.ticks) {
        CHECK(t.report.freq_penalty_hz == 0.0);
        CHECK(t.report.soc_pct >= 0.0);
        CHECK(t.report.soc_pct <= 100.0);
    }
    REQUIRE(result.indicators.size() == 10);
    for (const auto& ind : result.indicators) {
        CHECK(ind.hypervolume >= 0.0);
        CHECK(ind.gd_ideal >= 0.0);
        CHECK(ind.igd >= 0.0);
    }
}

TEST_CASE("run: discharge never crosses the floor") {
    auto cfg = quick_config(23);
    cfg.initial_soc_pct = 40.4;
    std::vector<grid::TelemetrySample> profile;
    for (int i = 0; i < 6; ++i) {
        auto s = day_sample(0.0, 3.5);  // night, battery tempted to discharge
        s.timestamp_s = 5.0 * i;
        profile.push_back(s);
    }
    grid::BatteryState battery{cfg.initial_soc_pct, cfg.battery_capacity_kwh, cfg.battery_floor_pct};
    auto baseline = io::generate_baseline(profile, battery, cfg.tick_seconds);

    auto result = run(profile, baseline, cfg);
    for (const auto& t : result.ticks) CHECK(t.state.soc_pct >= 40.0 - 1e-9);
}

TEST_CASE("run: paced mode waits out the tick interval") {
    auto cfg = quick_config(3, 78, 3);
    cfg.paced = true;
    cfg.tick_seconds = 0.05;
    std::vector<grid::TelemetrySample> profile;
    for (int i = 0; i < 3; ++i) {
        auto s = day_sample(4.5, 4.4);
        s.timestamp_s = cfg.tick_seconds * i;
        profile.push_back(s);
    }
    grid::BatteryState battery{cfg.initial_soc_pct, cfg.battery_capacity_kwh, cfg.battery_floor_pct};
    auto baseline = io::generate_baseline(profile, battery, cfg.tick_seconds);

    const auto start = std::chrono::steady_clock::now();
    auto result = run(profile, baseline, cfg);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(result.ticks.size() == 3);
    CHECK(elapsed >= 3 * cfg.tick_seconds - 0.01);
}

TEST_CASE("run: same seed, same decisions") {
    auto cfg = quick_config(31, 78, 12);
    std::vector<grid::TelemetrySample> profile;
    for (int i = 0; i < 3; ++i) {
        auto s = day_sample(4.8, 4.6);
        s.timestamp_s = 5.0 * i;
        profile.push_back(s);
    }
    grid::BatteryState battery{cfg.initial_soc_pct, cfg.battery_capacity_kwh, cfg.battery_floor_pct};
    auto baseline = io::generate_baseline(profile, battery, cfg.tick_seconds);

    auto a = run(profile, baseline, cfg);
    auto b = run(profile, baseline, cfg);
    REQUIRE(a.ticks.size() == b.ticks.size());
    for (std::size_t i = 0; i < a.ticks.size(); ++i) {
        CHECK(a.ticks[i].decision.diesel_kw == b.ticks[i].decision.diesel_kw);
        CHECK(a.ticks[i].decision.battery_kw == b.ticks[i].decision.battery_kw);
        CHECK(a.ticks[i].decision.pv_used_kw == b.ticks[i].decision.pv_used_kw);
        CHECK(a.ticks[i].report.moo_score == b.ticks[i].report.moo_score);
    }
}
