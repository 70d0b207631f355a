// Command-line front end for the mgems shared library. Everything here goes
// through the C API in mgems.h.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "mgems.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

void print_error_json(const char* where, mgems_status status) {
    std::string message = mgems_last_error();
    std::string escaped;
    for (char c : message) {
        if (c == '"' || c == '\\') escaped += '\\';
        if (c == '\n') {
            escaped += "\\n";
            continue;
        }
        escaped += c;
    }
    std::fprintf(stderr, "{\"error\":\"%s\",\"where\":\"%s\",\"status\":%d}\n", escaped.c_str(),
                 where, static_cast<int>(status));
}

struct ConfigHandle {
    mgems_config* ptr = nullptr;
    ~ConfigHandle() { mgems_config_free(ptr); }
};
struct ProfileHandle {
    mgems_profile* ptr = nullptr;
    ~ProfileHandle() { mgems_profile_free(ptr); }
};
struct BaselineHandle {
    mgems_baseline* ptr = nullptr;
    ~BaselineHandle() { mgems_baseline_free(ptr); }
};
struct ResultHandle {
    mgems_result* ptr = nullptr;
    ~ResultHandle() { mgems_result_free(ptr); }
};

int load_config(const std::string& config_path, bool seed_set, std::uint64_t seed, bool paced,
                ConfigHandle& out) {
    mgems_status st = config_path.empty() ? mgems_config_create(&out.ptr)
                                          : mgems_config_load(config_path.c_str(), &out.ptr);
    if (st != MGEMS_OK) {
        print_error_json("config", st);
        return st == MGEMS_ERROR_PARSE ? kExitFailure : kExitUsage;
    }
    if (seed_set) mgems_config_set_seed(out.ptr, seed);
    if (paced) mgems_config_set_paced(out.ptr, 1);
    return kExitOk;
}

int load_profile_checked(const std::string& path, ProfileHandle& out) {
    const mgems_status st = mgems_profile_load(path.c_str(), &out.ptr);
    if (st != MGEMS_OK) {
        print_error_json("profile", st);
        return kExitFailure;
    }
    char* warnings = nullptr;
    if (mgems_profile_warnings(out.ptr, &warnings) == MGEMS_OK && warnings && warnings[0]) {
        std::fprintf(stderr, "%s", warnings);
    }
    mgems_string_free(warnings);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive multi-objective microgrid EMS (NSGA-III core)"};
    app.set_version_flag("--version", mgems_version());
    app.require_subcommand(1);

    std::string profile_path, baseline_path, config_path, out_path, shape = "day";
    std::uint64_t seed = 0;
    bool seed_set = false, paced = false;
    long ticks = 60;
    double tick_seconds = 5.0;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Override the configured RNG seed")
            ->each([&](const std::string&) { seed_set = true; });
    };

    auto* cmd_baseline = app.add_subcommand("baseline", "Generate the rule-based baseline arm");
    cmd_baseline->add_option("profile", profile_path, "Telemetry profile CSV")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_baseline->add_option("--config", config_path, "Run configuration JSON")->check(CLI::ExistingFile);
    cmd_baseline->add_option("-o,--output", out_path, "Baseline CSV path (default baseline.csv)");
    add_seed(cmd_baseline);

    auto* cmd_run = app.add_subcommand("run", "Run the optimizing EMS against a stored baseline");
    cmd_run->add_option("profile", profile_path, "Telemetry profile CSV")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_run->add_option("--baseline", baseline_path, "Baseline CSV from the baseline subcommand")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_run->add_option("--config", config_path, "Run configuration JSON")->check(CLI::ExistingFile);
    cmd_run->add_option("-o,--output", out_path, "Output directory (default out)");
    cmd_run->add_flag("--paced", paced, "Pace ticks to wall-clock tick_seconds");
    add_seed(cmd_run);

    auto* cmd_compare = app.add_subcommand("compare", "Baseline and optimized arms on one profile");
    cmd_compare->add_option("profile", profile_path, "Telemetry profile CSV")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_compare->add_option("--config", config_path, "Run configuration JSON")->check(CLI::ExistingFile);
    cmd_compare->add_option("-o,--output", out_path, "Output directory (default out)");
    add_seed(cmd_compare);

    auto* cmd_ind = app.add_subcommand("indicators", "Recompute quality indicators from a front dump");
    cmd_ind->add_option("front-dump", profile_path, "fronts.csv from a previous run")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_ind->add_option("-o,--output", out_path, "Indicator CSV path (optional)");
    add_seed(cmd_ind);

    auto* cmd_synth = app.add_subcommand("synth-profile", "Write a synthetic telemetry profile");
    cmd_synth->add_option("output", out_path, "Destination CSV")->required();
    auto* day = cmd_synth->add_flag("--day", "Diurnal plateau near 5 kW (default)");
    auto* cloudy = cmd_synth->add_flag("--cloudy", "Plateau with passing clouds");
    auto* night = cmd_synth->add_flag("--night", "No PV");
    cmd_synth->add_option("--ticks", ticks, "Number of samples (default 60)");
    cmd_synth->add_option("--tick-seconds", tick_seconds, "Sample spacing in seconds (default 5)");
    add_seed(cmd_synth);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (app.got_subcommand(cmd_synth)) {
        if (cloudy->count()) shape = "cloudy";
        if (night->count()) shape = "night";
        if (day->count() + cloudy->count() + night->count() > 1) {
            std::fprintf(stderr, "{\"error\":\"pick one of --day/--cloudy/--night\",\"status\":%d}\n",
                         MGEMS_ERROR_INVALID_ARGUMENT);
            return kExitUsage;
        }
        ProfileHandle profile;
        mgems_status st = mgems_profile_synth(shape.c_str(), ticks, tick_seconds,
                                              seed_set ? seed : 1, &profile.ptr);
        if (st == MGEMS_OK) st = mgems_profile_save(profile.ptr, out_path.c_str());
        if (st != MGEMS_OK) {
            print_error_json("synth-profile", st);
            return kExitFailure;
        }
        std::printf("wrote %ld samples to %s\n", mgems_profile_rows(profile.ptr), out_path.c_str());
        return kExitOk;
    }

    ConfigHandle config;
    if (int rc = load_config(config_path, seed_set, seed, paced, config); rc != kExitOk) return rc;

    if (app.got_subcommand(cmd_baseline)) {
        ProfileHandle profile;
        if (int rc = load_profile_checked(profile_path, profile); rc != kExitOk) return rc;
        BaselineHandle baseline;
        mgems_status st = mgems_baseline_generate(profile.ptr, config.ptr, &baseline.ptr);
        const std::string dest = out_path.empty() ? "baseline.csv" : out_path;
        if (st == MGEMS_OK) st = mgems_baseline_save(baseline.ptr, dest.c_str());
        if (st != MGEMS_OK) {
            print_error_json("baseline", st);
            return kExitFailure;
        }
        std::printf("wrote baseline to %s\n", dest.c_str());
        return kExitOk;
    }

    if (app.got_subcommand(cmd_run) || app.got_subcommand(cmd_compare)) {
        ProfileHandle profile;
        if (int rc = load_profile_checked(profile_path, profile); rc != kExitOk) return rc;
        const std::string dir = out_path.empty() ? "out" : out_path;
        ResultHandle result;
        mgems_status st;
        if (app.got_subcommand(cmd_run)) {
            BaselineHandle baseline;
            st = mgems_baseline_load(baseline_path.c_str(), &baseline.ptr);
            if (st == MGEMS_OK)
                st = mgems_run(profile.ptr, baseline.ptr, config.ptr, dir.c_str(), &result.ptr);
        } else {
            st = mgems_compare(profile.ptr, config.ptr, dir.c_str(), &result.ptr);
        }
        if (st != MGEMS_OK) {
            print_error_json("run", st);
            return kExitFailure;
        }
        char* summary = nullptr;
        if (mgems_result_summary_json(result.ptr, &summary) == MGEMS_OK) {
            std::printf("%s", summary);
        }
        mgems_string_free(summary);
        std::fprintf(stderr, "outputs written to %s/\n", dir.c_str());
        return kExitOk;
    }

    if (app.got_subcommand(cmd_ind)) {
        char* summary = nullptr;
        const mgems_status st = mgems_front_indicators(
            profile_path.c_str(), out_path.empty() ? nullptr : out_path.c_str(),
            seed_set ? seed : 1, &summary);
        if (st != MGEMS_OK) {
            print_error_json("indicators", st);
            return kExitFailure;
        }
        std::printf("%s", summary);
        mgems_string_free(summary);
        return kExitOk;
    }

    return kExitUsage;
}
