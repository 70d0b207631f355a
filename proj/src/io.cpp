#include "mgems/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mgems/errors.hpp"
#include "mgems/indicators.hpp"
#include "mgems/rng.hpp"

namespace mgems::io {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        std::size_t start = 0;
        while (start < field.size() && field[start] == ' ') ++start;
        fields.push_back(field.substr(start));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& text, long line_no, const std::string& column) {
    if (text == "na") return std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError("malformed numeric field '" + text + "' in column " + column, line_no);
    return value;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    return out;
}

std::string fmt(double v, int decimals) {
    if (std::isnan(v)) return "na";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

const std::vector<std::string> kProfileColumns = {
    "timestamp_s", "v_dc", "i_dc", "v_rms", "i_rms", "p_active_w", "frequency_hz", "load_kw"};
const std::vector<std::string> kRequiredProfileColumns = {"timestamp_s", "v_dc", "i_dc", "load_kw"};

} // namespace

std::vector<grid::TelemetrySample> load_profile(const std::string& path,
                                                std::vector<std::string>* warnings) {
    auto in = open_input(path);
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty profile file: " + path, 1);
    ++line_no;

    const auto header = split_csv_line(line);
    std::map<std::string, std::size_t> column_of;
    std::size_t canonical_pos = 0;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto it = std::find(kProfileColumns.begin(), kProfileColumns.end(), header[i]);
        if (it == kProfileColumns.end())
            throw ParseError("unknown profile column '" + header[i] + "'", line_no);
        if (!column_of.emplace(header[i], i).second)
            throw ParseError("duplicate profile column '" + header[i] + "'", line_no);
        // Columns may be omitted but not reordered.
        const auto pos = static_cast<std::size_t>(it - kProfileColumns.begin());
        if (pos < canonical_pos)
            throw ParseError("profile column '" + header[i] + "' out of order", line_no);
        canonical_pos = pos + 1;
    }
    for (const auto& required : kRequiredProfileColumns) {
        if (!column_of.count(required))
            throw ParseError("missing required profile column '" + required + "'", line_no);
    }

    std::vector<grid::TelemetrySample> profile;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             line_no);
        auto get = [&](const std::string& name, double fallback) {
            auto it = column_of.find(name);
            if (it == column_of.end()) return fallback;
            return parse_double(fields[it->second], line_no, name);
        };
        grid::TelemetrySample s;
        s.timestamp_s = get("timestamp_s", 0.0);
        s.v_dc = get("v_dc", 0.0);
        s.i_dc = get("i_dc", 0.0);
        s.v_rms = get("v_rms", 0.0);
        s.i_rms = get("i_rms", 0.0);
        s.p_active_w = get("p_active_w", 0.0);
        s.frequency_hz = get("frequency_hz", grid::kNominalFrequencyHz);
        s.load_kw = get("load_kw", 0.0);

        if (!profile.empty() && s.timestamp_s <= profile.back().timestamp_s)
            throw ParseError("timestamps must be strictly increasing", line_no);
        if (warnings) {
            for (auto& finding : grid::validate_sample(s))
                warnings->push_back("row " + std::to_string(line_no) + ": " + finding);
        }
        profile.push_back(s);
    }
    return profile;
}

void save_profile(const std::vector<grid::TelemetrySample>& profile, const std::string& path) {
    auto out = open_output(path);
    out << "timestamp_s,v_dc,i_dc,v_rms,i_rms,p_active_w,frequency_hz,load_kw\n";
    for (const auto& s : profile) {
        out << fmt(s.timestamp_s, 3) << ',' << fmt(s.v_dc, 6) << ',' << fmt(s.i_dc, 6) << ','
            << fmt(s.v_rms, 6) << ',' << fmt(s.i_rms, 6) << ',' << fmt(s.p_active_w, 6) << ','
            << fmt(s.frequency_hz, 6) << ',' << fmt(s.load_kw, 6) << '\n';
    }
}

ProfileShape profile_shape_from_name(const std::string& name) {
    if (name == "day") return ProfileShape::Day;
    if (name == "cloudy") return ProfileShape::Cloudy;
    if (name == "night") return ProfileShape::Night;
    throw ContractError("unknown profile shape: " + name);
}

std::vector<grid::TelemetrySample> synth_profile(ProfileShape shape, std::size_t ticks,
                                                 double tick_seconds, std::uint64_t seed) {
    if (tick_seconds <= 0.0) throw ContractError("synth_profile: tick_seconds must be positive");
    Rng rng(mix_seed(seed, 0x5359'4e54ULL));
    std::vector<grid::TelemetrySample> profile;
    profile.reserve(ticks);

    const std::size_t ramp = std::max<std::size_t>(1, ticks / 20);
    double cloud = 1.0;
    for (std::size_t i = 0; i < ticks; ++i) {
        double pv_kw = 0.0;
        double load_kw = 0.0;
        switch (shape) {
            case ProfileShape::Day: {
                double level = 1.0;
                if (i < ramp) level = 0.85 + 0.15 * (static_cast<double>(i) + 1.0) / ramp;
                else if (i + ramp >= ticks) level = 0.85 + 0.15 * static_cast<double>(ticks - i) / ramp;
                pv_kw = level * (4.94 + 0.06 * rng.uniform());
                // Hold the demand a small, slowly varying surplus below PV.
                const double surplus = 0.04 + 0.11 * rng.uniform();
                load_kw = pv_kw - surplus;
                break;
            }
            case ProfileShape::Cloudy: {
                // Bounded random walk for passing clouds.
                cloud = std::clamp(cloud + 0.25 * (rng.uniform() - 0.45), 0.35, 1.0);
                pv_kw = cloud * (4.9 + 0.1 * rng.uniform());
                load_kw = 3.6 + 1.2 * rng.uniform();
                break;
            }
            case ProfileShape::Night: {
                pv_kw = 0.0;
                load_kw = 0.8 + 1.7 * rng.uniform();
                break;
            }
        }
        load_kw = std::clamp(load_kw, grid::kLoadMinKw, grid::kLoadMaxKw);

        grid::TelemetrySample s;
        s.timestamp_s = static_cast<double>(i) * tick_seconds;
        s.v_dc = pv_kw > 0.0 ? 520.0 + 25.0 * (rng.uniform() - 0.5) : 0.0;
        s.i_dc = pv_kw > 0.0 ? pv_kw * 1000.0 / s.v_dc : 0.0;
        s.frequency_hz = grid::kNominalFrequencyHz;
        s.load_kw = load_kw;
        // AC side synthesized at PF ~= 0.98.
        s.v_rms = 120.0;
        s.p_active_w = load_kw * 1000.0;
        s.i_rms = s.p_active_w / 0.98 / (3.0 * s.v_rms);
        profile.push_back(s);
    }
    return profile;
}

std::vector<ems::BaselineTick> generate_baseline(const std::vector<grid::TelemetrySample>& profile,
                                                 grid::BatteryState battery,
                                                 double tick_seconds,
                                                 double* final_soc_pct) {
    if (tick_seconds <= 0.0) throw ContractError("generate_baseline: tick_seconds must be positive");
    const double dt_hours = tick_seconds / 3600.0;
    std::vector<ems::BaselineTick> baseline;
    baseline.reserve(profile.size());

    for (const auto& sample : profile) {
        const double pv_available = grid::pv_power_kw(sample);
        const double load = std::max(0.0, sample.load_kw);

        ems::BaselineTick t;
        t.timestamp_s = sample.timestamp_s;
        t.pv_used_kw = std::min(pv_available, load);

        double deficit = load - t.pv_used_kw;
        if (deficit > 0.0 && battery.soc_pct > battery.operating_floor_pct) {
            const double headroom_kw =
                (battery.soc_pct - battery.operating_floor_pct) / 100.0 * battery.capacity_kwh / dt_hours;
            const double discharge = std::min({deficit, -grid::kBatteryMinKw, headroom_kw});
            t.battery_kw -= discharge;
            deficit -= discharge;
        }
        if (deficit > 0.0) {
            const double diesel = std::min(deficit, grid::kDieselMaxKw);
            t.diesel_kw = diesel;
            deficit -= diesel;
        }
        const double surplus = pv_available - t.pv_used_kw;
        if (surplus > 0.0 && t.battery_kw == 0.0) {
            const double headroom_kw =
                (100.0 - battery.soc_pct) / 100.0 * battery.capacity_kwh / dt_hours;
            t.battery_kw = std::min({surplus, grid::kBatteryMaxKw, std::max(0.0, headroom_kw)});
        }

        const double supply = t.pv_used_kw + t.diesel_kw - t.battery_kw;
        t.mismatch_pct = load > 0.0 ? metrics::mismatch_pct(load, supply)
                                    : std::numeric_limits<double>::quiet_NaN();
        battery = grid::soc_step(battery, t.battery_kw, dt_hours);
        baseline.push_back(t);
    }
    if (final_soc_pct) *final_soc_pct = battery.soc_pct;
    return baseline;
}

std::vector<ems::BaselineTick> load_baseline(const std::string& path) {
    auto in = open_input(path);
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty baseline file: " + path, 1);
    ++line_no;
    if (split_csv_line(line) !=
        std::vector<std::string>{"timestamp_s", "diesel_kw", "battery_kw", "pv_used_kw", "mismatch_pct"})
        throw ParseError("unexpected baseline header", line_no);

    std::vector<ems::BaselineTick> baseline;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 5) throw ParseError("expected 5 fields", line_no);
        ems::BaselineTick t;
        t.timestamp_s = parse_double(fields[0], line_no, "timestamp_s");
        t.diesel_kw = parse_double(fields[1], line_no, "diesel_kw");
        t.battery_kw = parse_double(fields[2], line_no, "battery_kw");
        t.pv_used_kw = parse_double(fields[3], line_no, "pv_used_kw");
        t.mismatch_pct = parse_double(fields[4], line_no, "mismatch_pct");
        if (!baseline.empty() && t.timestamp_s <= baseline.back().timestamp_s)
            throw ParseError("timestamps must be strictly increasing", line_no);
        baseline.push_back(t);
    }
    return baseline;
}

void save_baseline(const std::vector<ems::BaselineTick>& baseline, const std::string& path) {
    auto out = open_output(path);
    out << "timestamp_s,diesel_kw,battery_kw,pv_used_kw,mismatch_pct\n";
    for (const auto& t : baseline) {
        out << fmt(t.timestamp_s, 3) << ',' << fmt(t.diesel_kw, 6) << ',' << fmt(t.battery_kw, 6)
            << ',' << fmt(t.pv_used_kw, 6) << ',' << fmt(t.mismatch_pct, 6) << '\n';
    }
}

namespace {

void apply_config_key(ems::EmsConfig& cfg, const std::string& key, const json& value) {
    if (key == "seed") cfg.optimizer.rng_seed = value.get<std::uint64_t>();
    else if (key == "population") cfg.optimizer.population_size = value.get<std::size_t>();
    else if (key == "generations") cfg.optimizer.generations = value.get<std::size_t>();
    else if (key == "crossover_probability") cfg.optimizer.crossover_probability = value.get<double>();
    else if (key == "crossover_eta") cfg.optimizer.crossover_distribution_index = value.get<double>();
    else if (key == "mutation_probability") {
        if (value.is_null()) cfg.optimizer.mutation_probability.reset();
        else cfg.optimizer.mutation_probability = value.get<double>();
    } else if (key == "mutation_eta") cfg.optimizer.mutation_distribution_index = value.get<double>();
    else if (key == "tick_seconds") cfg.tick_seconds = value.get<double>();
    else if (key == "initial_soc_pct") cfg.initial_soc_pct = value.get<double>();
    else if (key == "soc_weight_threshold_pct") cfg.soc_weight_threshold_pct = value.get<double>();
    else if (key == "pv_usage_floor_fraction") cfg.pv_usage_floor_fraction = value.get<double>();
    else if (key == "degradation_ceiling_pct") cfg.degradation_ceiling_pct = value.get<double>();
    else if (key == "battery_capacity_kwh") cfg.battery_capacity_kwh = value.get<double>();
    else if (key == "battery_floor_pct") cfg.battery_floor_pct = value.get<double>();
    else if (key == "hv_mc_samples") cfg.hv_mc_samples = value.get<std::size_t>();
    else if (key == "mode") {
        const auto mode = value.get<std::string>();
        if (mode == "replay") cfg.paced = false;
        else if (mode == "paced") cfg.paced = true;
        else throw ParseError("config: mode must be 'replay' or 'paced', got '" + mode + "'");
    } else if (key == "reference_layers") {
        std::vector<nsga3::Layer> layers;
        for (const auto& entry : value) {
            if (!entry.is_array() || entry.size() != 2)
                throw ParseError("config: reference_layers entries must be [partitions, scale]");
            layers.push_back({entry[0].get<unsigned>(), entry[1].get<double>()});
        }
        cfg.reference_layers = std::move(layers);
    } else {
        throw ParseError("config: unknown key '" + key + "'");
    }
}

} // namespace

ems::EmsConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("config: top-level document must be an object");
    ems::EmsConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        try {
            apply_config_key(cfg, key, value);
        } catch (const json::exception& e) {
            throw ParseError("config: bad value for '" + key + "': " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

ems::EmsConfig load_config(const std::string& path) {
    auto in = open_input(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

CompareSummary summarize(const std::vector<grid::TelemetrySample>& profile,
                         const std::vector<ems::BaselineTick>& baseline,
                         const ems::RunResult& run, const ems::EmsConfig& cfg,
                         std::optional<double> baseline_final_soc) {
    CompareSummary s;
    s.ticks = run.ticks.size();
    s.seed = cfg.optimizer.rng_seed;
    const double dt_hours = cfg.tick_seconds / 3600.0;

    double base_mismatch = 0.0;
    std::size_t base_defined = 0;
    for (const auto& t : baseline) {
        s.baseline.diesel_kwh += t.diesel_kw * dt_hours;
        if (std::isfinite(t.mismatch_pct)) {
            base_mismatch += t.mismatch_pct;
            ++base_defined;
        }
    }
    s.baseline.mean_mismatch_pct = base_defined ? base_mismatch / static_cast<double>(base_defined) : 0.0;
    s.baseline.diesel_liters = s.baseline.diesel_kwh * grid::kFuelLitersPerKwh;
    s.baseline.final_soc_pct = baseline_final_soc;

    double moo_mismatch = 0.0, pv_sum = 0.0, improvement_sum = 0.0;
    std::size_t moo_defined = 0;
    for (const auto& t : run.ticks) {
        s.moo.diesel_kwh += t.decision.diesel_kw * dt_hours;
        pv_sum += t.decision.pv_used_kw;
        if (std::isfinite(t.mismatch_pct)) {
            moo_mismatch += t.mismatch_pct;
            ++moo_defined;
        }
        if (t.report.mismatch_improvement_pct) {
            improvement_sum += *t.report.mismatch_improvement_pct;
            ++s.improvement_defined_ticks;
        }
    }
    s.moo.mean_mismatch_pct = moo_defined ? moo_mismatch / static_cast<double>(moo_defined) : 0.0;
    s.moo.diesel_liters = s.moo.diesel_kwh * grid::kFuelLitersPerKwh;
    s.moo.final_soc_pct = run.final_soc_pct;
    if (!run.ticks.empty()) s.moo.mean_pv_usage_kw = pv_sum / static_cast<double>(run.ticks.size());
    if (s.improvement_defined_ticks)
        s.mean_mismatch_improvement_pct =
            improvement_sum / static_cast<double>(s.improvement_defined_ticks);

    s.diesel_delta_kwh = s.baseline.diesel_kwh - s.moo.diesel_kwh;
    s.diesel_delta_kwh_per_cycle =
        profile.empty() ? 0.0 : s.diesel_delta_kwh / static_cast<double>(profile.size());
    return s;
}

CompareResult run_compare(const std::vector<grid::TelemetrySample>& profile,
                          const ems::EmsConfig& cfg) {
    CompareResult result;
    grid::BatteryState battery{cfg.initial_soc_pct, cfg.battery_capacity_kwh, cfg.battery_floor_pct};
    double baseline_final_soc = battery.soc_pct;
    result.baseline = generate_baseline(profile, battery, cfg.tick_seconds, &baseline_final_soc);
    result.run = ems::run(profile, result.baseline, cfg);
    result.summary = summarize(profile, result.baseline, result.run, cfg, baseline_final_soc);
    return result;
}

void write_report_csv(const ems::RunResult& run, const std::string& path) {
    auto out = open_output(path);
    out << "soc_pct,mismatch_improvement_pct,freq_penalty,battery_ratio,load_ratio,"
           "pv_usage_kw,moo_score,diesel_kw\n";
    for (const auto& t : run.ticks) {
        const auto& r = t.report;
        out << fmt(r.soc_pct, 4) << ','
            << (r.mismatch_improvement_pct ? fmt(*r.mismatch_improvement_pct, 4) : "na") << ','
            << fmt(r.freq_penalty_hz, 4) << ',' << fmt(r.battery_ratio, 4) << ','
            << fmt(r.load_ratio, 4) << ',' << fmt(r.pv_usage_kw, 4) << ',' << fmt(r.moo_score, 4)
            << ',' << fmt(r.diesel_kw, 4) << '\n';
    }
}

std::vector<ems::EmsTickReport> load_report_csv(const std::string& path) {
    auto in = open_input(path);
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty report file: " + path, 1);
    ++line_no;
    std::vector<ems::EmsTickReport> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 8) throw ParseError("expected 8 fields", line_no);
        ems::EmsTickReport r;
        r.soc_pct = parse_double(fields[0], line_no, "soc_pct");
        const double improvement = parse_double(fields[1], line_no, "mismatch_improvement_pct");
        if (std::isfinite(improvement)) r.mismatch_improvement_pct = improvement;
        r.freq_penalty_hz = parse_double(fields[2], line_no, "freq_penalty");
        r.battery_ratio = parse_double(fields[3], line_no, "battery_ratio");
        r.load_ratio = parse_double(fields[4], line_no, "load_ratio");
        r.pv_usage_kw = parse_double(fields[5], line_no, "pv_usage_kw");
        r.moo_score = parse_double(fields[6], line_no, "moo_score");
        r.diesel_kw = parse_double(fields[7], line_no, "diesel_kw");
        rows.push_back(r);
    }
    return rows;
}

void write_front_dump_csv(const ems::RunResult& run, const std::string& path) {
    auto out = open_output(path);
    out << "tick,o1_fuel_l,o2_mismatch_kw,o3_freq_hz,o4_pf_penalty,o5_degradation_pct,"
           "o6_pv_neg_kw,pv_usage_kw,diversity,is_selected,is_knee\n";
    for (std::size_t i = 0; i < run.ticks.size(); ++i) {
        const auto& t = run.ticks[i];
        for (std::size_t j = 0; j < t.front.size(); ++j) {
            const auto& o = t.front.members[j].objectives;
            const double pv_used = -o[5];
            out << i << ',' << fmt(o[0], 8) << ',' << fmt(o[1], 6) << ',' << fmt(o[2], 6) << ','
                << fmt(o[3], 6) << ',' << fmt(o[4], 6) << ',' << fmt(o[5], 6) << ','
                << fmt(pv_used, 6) << ',' << fmt(j < t.diversity.size() ? t.diversity[j] : 0.0, 6)
                << ',' << (j == t.chosen_index ? 1 : 0) << ','
                << (t.knee_index && *t.knee_index == j ? 1 : 0) << '\n';
        }
    }
}

void write_indicators_csv(const ems::RunResult& run, const std::string& path) {
    auto out = open_output(path);
    out << "tick,front_size,hypervolume,hv_std_err,gd_ideal,igd\n";
    for (std::size_t i = 0; i < run.indicators.size(); ++i) {
        const auto& ind = run.indicators[i];
        out << i << ',' << run.ticks[i].front.size() << ',' << fmt(ind.hypervolume, 6) << ','
            << (ind.hypervolume_se ? fmt(*ind.hypervolume_se, 6) : "na") << ','
            << fmt(ind.gd_ideal, 6) << ',' << fmt(ind.igd, 6) << '\n';
    }
}

std::string summary_to_json(const CompareSummary& s) {
    json arm_base{{"mean_mismatch_pct", s.baseline.mean_mismatch_pct},
                  {"diesel_kwh", s.baseline.diesel_kwh},
                  {"diesel_liters", s.baseline.diesel_liters}};
    arm_base["final_soc_pct"] =
        s.baseline.final_soc_pct ? json(*s.baseline.final_soc_pct) : json(nullptr);

    json arm_moo{{"mean_mismatch_pct", s.moo.mean_mismatch_pct},
                 {"diesel_kwh", s.moo.diesel_kwh},
                 {"diesel_liters", s.moo.diesel_liters}};
    arm_moo["final_soc_pct"] = s.moo.final_soc_pct ? json(*s.moo.final_soc_pct) : json(nullptr);
    arm_moo["mean_pv_usage_kw"] =
        s.moo.mean_pv_usage_kw ? json(*s.moo.mean_pv_usage_kw) : json(nullptr);

    json doc{{"ticks", s.ticks},
             {"baseline", arm_base},
             {"moo", arm_moo},
             {"improvement_defined_ticks", s.improvement_defined_ticks},
             {"diesel_delta_kwh", s.diesel_delta_kwh},
             {"diesel_delta_kwh_per_cycle", s.diesel_delta_kwh_per_cycle},
             {"seed", s.seed}};
    doc["mean_mismatch_improvement_pct"] =
        s.mean_mismatch_improvement_pct ? json(*s.mean_mismatch_improvement_pct) : json(nullptr);
    return doc.dump(2) + "\n";
}

void write_run_outputs(const CompareResult& result, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    write_report_csv(result.run, (base / "report.csv").string());
    write_front_dump_csv(result.run, (base / "fronts.csv").string());
    write_indicators_csv(result.run, (base / "indicators.csv").string());
    auto out = open_output((base / "summary.json").string());
    out << summary_to_json(result.summary);
}

std::string indicators_from_front_dump(const std::string& front_csv, const std::string& out_csv,
                                       std::uint64_t seed, std::size_t mc_samples) {
    auto in = open_input(front_csv);
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty front dump: " + front_csv, 1);
    ++line_no;
    const auto header = split_csv_line(line);
    if (header.size() < 7 || header[0] != "tick")
        throw ParseError("unexpected front dump header", line_no);

    std::map<long, std::vector<metrics::Point>> fronts;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw ParseError("field count mismatch in front dump", line_no);
        const long tick = static_cast<long>(parse_double(fields[0], line_no, "tick"));
        metrics::Point p(6);
        for (std::size_t k = 0; k < 6; ++k)
            p[k] = parse_double(fields[k + 1], line_no, header[k + 1]);
        fronts[tick].push_back(std::move(p));
    }
    if (fronts.empty()) throw ParseError("front dump holds no rows", line_no);

    std::vector<metrics::Point> all_points;
    for (const auto& [tick, pts] : fronts)
        all_points.insert(all_points.end(), pts.begin(), pts.end());
    std::vector<double> ideal(6, std::numeric_limits<double>::infinity());
    for (const auto& p : all_points)
        for (std::size_t k = 0; k < 6; ++k) ideal[k] = std::min(ideal[k], p[k]);
    std::vector<metrics::Point> reference_set;
    {
        auto fr = nsga3::nondominated_sort(std::span<const nsga3::ObjectiveVector>(all_points));
        for (std::size_t idx : fr.empty() ? std::vector<std::size_t>{} : fr[0])
            reference_set.push_back(all_points[idx]);
    }

    std::ofstream out;
    if (!out_csv.empty()) {
        out = open_output(out_csv);
        out << "tick,front_size,hypervolume,hv_std_err,gd_ideal,igd\n";
    }
    double hv_sum = 0.0, gd_sum = 0.0, igd_sum = 0.0;
    for (const auto& [tick, pts] : fronts) {
        const auto ref = metrics::default_reference_point(pts);
        const auto hv = metrics::hypervolume(pts, ref, mc_samples,
                                             mix_seed(seed, 0x4856'0000ULL + static_cast<std::uint64_t>(tick)));
        const double gd = metrics::gd_ideal(pts, ideal);
        const double ig = reference_set.empty() ? 0.0 : metrics::igd(pts, reference_set);
        hv_sum += hv.value;
        gd_sum += gd;
        igd_sum += ig;
        if (out.is_open()) {
            out << tick << ',' << pts.size() << ',' << fmt(hv.value, 6) << ','
                << (hv.standard_error ? fmt(*hv.standard_error, 6) : "na") << ',' << fmt(gd, 6)
                << ',' << fmt(ig, 6) << '\n';
        }
    }
    const double n = static_cast<double>(fronts.size());
    json doc{{"ticks", fronts.size()},
             {"mean_hypervolume", hv_sum / n},
             {"mean_gd_ideal", gd_sum / n},
             {"mean_igd", igd_sum / n}};
    return doc.dump(2) + "\n";
}

} // namespace mgems::io
