#include "mgems.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "mgems/ems.hpp"
#include "mgems/errors.hpp"
#include "mgems/grid_model.hpp"
#include "mgems/io.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

char* copy_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
mgems_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return MGEMS_OK;
    } catch (const mgems::ParseError& e) {
        set_error(e.what());
        return MGEMS_ERROR_PARSE;
    } catch (const mgems::ContractError& e) {
        set_error(e.what());
        return MGEMS_ERROR_INVALID_ARGUMENT;
    } catch (const mgems::Error& e) {
        set_error(e.what());
        return MGEMS_ERROR_RUNTIME;
    } catch (const std::exception& e) {
        set_error(e.what());
        return MGEMS_ERROR_RUNTIME;
    } catch (...) {
        set_error("unknown error");
        return MGEMS_ERROR_RUNTIME;
    }
}

mgems_status require(bool ok, const char* message) {
    if (ok) return MGEMS_OK;
    set_error(message);
    return MGEMS_ERROR_INVALID_ARGUMENT;
}

} // namespace

struct mgems_config {
    mgems::ems::EmsConfig cfg;
};

struct mgems_profile {
    std::vector<mgems::grid::TelemetrySample> samples;
    std::vector<std::string> warnings;
};

struct mgems_baseline {
    std::vector<mgems::ems::BaselineTick> ticks;
    std::optional<double> final_soc_pct;
};

struct mgems_result {
    mgems::io::CompareResult result;
};

extern "C" {

const char* mgems_version(void) { return "1.0.0"; }

const char* mgems_last_error(void) { return g_last_error.c_str(); }

void mgems_string_free(char* s) { delete[] s; }

mgems_status mgems_config_create(mgems_config** out) {
    if (auto st = require(out != nullptr, "config_create: null output"); st != MGEMS_OK) return st;
    return guarded([&] { *out = new mgems_config{}; });
}

mgems_status mgems_config_load(const char* path, mgems_config** out) {
    if (auto st = require(path && out, "config_load: null argument"); st != MGEMS_OK) return st;
    return guarded([&] { *out = new mgems_config{mgems::io::load_config(path)}; });
}

mgems_status mgems_config_set_seed(mgems_config* cfg, uint64_t seed) {
    if (auto st = require(cfg != nullptr, "config_set_seed: null config"); st != MGEMS_OK) return st;
    cfg->cfg.optimizer.rng_seed = seed;
    return MGEMS_OK;
}

mgems_status mgems_config_set_paced(mgems_config* cfg, int paced) {
    if (auto st = require(cfg != nullptr, "config_set_paced: null config"); st != MGEMS_OK) return st;
    cfg->cfg.paced = paced != 0;
    return MGEMS_OK;
}

void mgems_config_free(mgems_config* cfg) { delete cfg; }

mgems_status mgems_profile_load(const char* path, mgems_profile** out) {
    if (auto st = require(path && out, "profile_load: null argument"); st != MGEMS_OK) return st;
    return guarded([&] {
        auto p = std::make_unique<mgems_profile>();
        p->samples = mgems::io::load_profile(path, &p->warnings);
        *out = p.release();
    });
}

mgems_status mgems_profile_synth(const char* shape, long ticks, double tick_seconds,
                                 uint64_t seed, mgems_profile** out) {
    if (auto st = require(shape && out, "profile_synth: null argument"); st != MGEMS_OK) return st;
    if (auto st = require(ticks > 0, "profile_synth: ticks must be positive"); st != MGEMS_OK)
        return st;
    return guarded([&] {
        auto p = std::make_unique<mgems_profile>();
        p->samples = mgems::io::synth_profile(mgems::io::profile_shape_from_name(shape),
                                              static_cast<std::size_t>(ticks), tick_seconds, seed);
        *out = p.release();
    });
}

mgems_status mgems_profile_save(const mgems_profile* profile, const char* path) {
    if (auto st = require(profile && path, "profile_save: null argument"); st != MGEMS_OK) return st;
    return guarded([&] { mgems::io::save_profile(profile->samples, path); });
}

long mgems_profile_rows(const mgems_profile* profile) {
    return profile ? static_cast<long>(profile->samples.size()) : -1;
}

mgems_status mgems_profile_warnings(const mgems_profile* profile, char** out) {
    if (auto st = require(profile && out, "profile_warnings: null argument"); st != MGEMS_OK)
        return st;
    std::string joined;
    for (const auto& w : profile->warnings) {
        joined += w;
        joined += '\n';
    }
    *out = copy_string(joined);
    return *out ? MGEMS_OK : MGEMS_ERROR_RUNTIME;
}

void mgems_profile_free(mgems_profile* profile) { delete profile; }

mgems_status mgems_baseline_generate(const mgems_profile* profile, const mgems_config* cfg,
                                     mgems_baseline** out) {
    if (auto st = require(profile && cfg && out, "baseline_generate: null argument");
        st != MGEMS_OK)
        return st;
    return guarded([&] {
        auto b = std::make_unique<mgems_baseline>();
        const auto& c = cfg->cfg;
        mgems::grid::BatteryState battery{c.initial_soc_pct, c.battery_capacity_kwh,
                                          c.battery_floor_pct};
        double final_soc = battery.soc_pct;
        b->ticks = mgems::io::generate_baseline(profile->samples, battery, c.tick_seconds,
                                                &final_soc);
        b->final_soc_pct = final_soc;
        *out = b.release();
    });
}

mgems_status mgems_baseline_load(const char* path, mgems_baseline** out) {
    if (auto st = require(path && out, "baseline_load: null argument"); st != MGEMS_OK) return st;
    return guarded([&] {
        auto b = std::make_unique<mgems_baseline>();
        b->ticks = mgems::io::load_baseline(path);
        *out = b.release();
    });
}

mgems_status mgems_baseline_save(const mgems_baseline* baseline, const char* path) {
    if (auto st = require(baseline && path, "baseline_save: null argument"); st != MGEMS_OK)
        return st;
    return guarded([&] { mgems::io::save_baseline(baseline->ticks, path); });
}

void mgems_baseline_free(mgems_baseline* baseline) { delete baseline; }

mgems_status mgems_run(const mgems_profile* profile, const mgems_baseline* baseline,
                       const mgems_config* cfg, const char* out_dir, mgems_result** out) {
    if (auto st = require(profile && baseline && cfg && out, "run: null argument"); st != MGEMS_OK)
        return st;
    return guarded([&] {
        auto r = std::make_unique<mgems_result>();
        r->result.baseline = baseline->ticks;
        r->result.run = mgems::ems::run(profile->samples, baseline->ticks, cfg->cfg);
        r->result.summary = mgems::io::summarize(profile->samples, baseline->ticks, r->result.run,
                                                 cfg->cfg, baseline->final_soc_pct);
        if (out_dir) mgems::io::write_run_outputs(r->result, out_dir);
        *out = r.release();
    });
}

mgems_status mgems_compare(const mgems_profile* profile, const mgems_config* cfg,
                           const char* out_dir, mgems_result** out) {
    if (auto st = require(profile && cfg && out, "compare: null argument"); st != MGEMS_OK)
        return st;
    return guarded([&] {
        auto r = std::make_unique<mgems_result>();
        r->result = mgems::io::run_compare(profile->samples, cfg->cfg);
        if (out_dir) mgems::io::write_run_outputs(r->result, out_dir);
        *out = r.release();
    });
}

mgems_status mgems_result_summary_json(const mgems_result* result, char** out_json) {
    if (auto st = require(result && out_json, "result_summary_json: null argument");
        st != MGEMS_OK)
        return st;
    return guarded([&] {
        char* s = copy_string(mgems::io::summary_to_json(result->result.summary));
        if (!s) throw mgems::Error("out of memory");
        *out_json = s;
    });
}

long mgems_result_ticks(const mgems_result* result) {
    return result ? static_cast<long>(result->result.run.ticks.size()) : -1;
}

void mgems_result_free(mgems_result* result) { delete result; }

mgems_status mgems_front_indicators(const char* front_csv, const char* out_csv, uint64_t seed,
                                    char** out_json) {
    if (auto st = require(front_csv && out_json, "front_indicators: null argument");
        st != MGEMS_OK)
        return st;
    return guarded([&] {
        const std::string summary = mgems::io::indicators_from_front_dump(
            front_csv, out_csv ? out_csv : "", seed);
        char* s = copy_string(summary);
        if (!s) throw mgems::Error("out of memory");
        *out_json = s;
    });
}

} // extern "C"
