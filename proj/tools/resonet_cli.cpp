// Command-line frontend. Talks to the library exclusively through the C ABI
// in resonet/resonet.h: all physics, JSON parsing, and report formatting live
// behind that boundary, so this file only maps flags to calls, writes files
// atomically, and translates status codes into the documented exit codes
// (0 ok, 1 input error, 2 solver error, 3 validation threshold).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "resonet/resonet.h"

namespace {

using ScenarioPtr = std::unique_ptr<rn_scenario, decltype(&rn_scenario_free)>;
using StringPtr = std::unique_ptr<char, decltype(&rn_string_free)>;

ScenarioPtr make_scenario() { return ScenarioPtr(nullptr, &rn_scenario_free); }
StringPtr make_string() { return StringPtr(nullptr, &rn_string_free); }

int exit_code_for(rn_status status) {
    switch (status) {
        case RN_OK:
            return 0;
        case RN_ERR_INVALID_ARGUMENT:
        case RN_ERR_PARSE:
        case RN_ERR_DIMENSION:
            return 1;
        case RN_ERR_VALIDATION_THRESHOLD:
            return 3;
        default:
            return 2;
    }
}

int report_failure(rn_status status) {
    std::fprintf(stderr, "error: %s\n", rn_last_error());
    return exit_code_for(status);
}

// --config accepts either a scenario file path or a built-in scenario name;
// an existing file wins so parse errors in real files are never masked by the
// catalog lookup.
int load_scenario(const std::string& config, ScenarioPtr& scenario, StringPtr& optimize_spec) {
    rn_scenario* raw = nullptr;
    rn_status status = RN_OK;
    if (std::filesystem::exists(config)) {
        char* spec = nullptr;
        status = rn_scenario_from_file(config.c_str(), &raw, &spec);
        optimize_spec.reset(spec);
    } else {
        status = rn_scenario_catalog(config.c_str(), &raw);
    }
    if (status != RN_OK) return report_failure(status);
    scenario.reset(raw);
    return 0;
}

struct CommonArgs {
    std::string config;
    std::string out;
    int grid = 0;  // 0 = per-command default
    std::uint64_t seed = 0;
    bool has_seed = false;
    int restarts = 0;  // 0 = per-command default
    std::string pair_text;
    int pair_a = 0;  // 0,0 = library default pair
    int pair_b = 0;
};

int parse_pair(CommonArgs& args) {
    if (args.pair_text.empty()) return 0;
    int a = 0;
    int b = 0;
    char trailing = '\0';
    if (std::sscanf(args.pair_text.c_str(), "%d,%d%c", &a, &b, &trailing) != 2 || a < 1 ||
        b < 1) {
        std::fprintf(stderr, "error: --pair expects two 1-based node indices as i,j\n");
        return 1;
    }
    args.pair_a = a;
    args.pair_b = b;
    return 0;
}

// Writes the data file plus its provenance sidecar <out>.manifest.json.
int write_with_manifest(const std::string& command, const std::string& scenario_hash,
                        std::uint64_t seed, double wall_seconds, const std::string& out_path,
                        const char* contents) {
    rn_status status = rn_write_file_atomic(out_path.c_str(), contents);
    if (status != RN_OK) return report_failure(status);

    const char* outputs[] = {out_path.c_str()};
    StringPtr manifest = make_string();
    {
        char* text = nullptr;
        status = rn_manifest_json(command.c_str(), scenario_hash.c_str(), seed, wall_seconds,
                                  outputs, 1, &text);
        if (status != RN_OK) return report_failure(status);
        manifest.reset(text);
    }
    const std::string manifest_path = out_path + ".manifest.json";
    status = rn_write_file_atomic(manifest_path.c_str(), manifest.get());
    if (status != RN_OK) return report_failure(status);

    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

std::string hash_of(const rn_scenario* scenario) {
    char* text = nullptr;
    if (rn_scenario_hash(scenario, &text) != RN_OK) return "";
    StringPtr guard(text, &rn_string_free);
    return std::string(text);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int run_steady(const CommonArgs& args, const std::string& command) {
    ScenarioPtr scenario = make_scenario();
    StringPtr optimize_spec = make_string();
    if (int rc = load_scenario(args.config, scenario, optimize_spec); rc != 0) return rc;

    std::vector<int> pairs;
    if (args.pair_a != 0) pairs = {args.pair_a, args.pair_b};

    const auto start = std::chrono::steady_clock::now();
    StringPtr report = make_string();
    {
        char* text = nullptr;
        rn_status status = rn_steady_report(scenario.get(), pairs.empty() ? nullptr : pairs.data(),
                                            pairs.size() / 2, &text);
        if (status != RN_OK) return report_failure(status);
        report.reset(text);
    }
    return write_with_manifest(command, hash_of(scenario.get()), args.seed, seconds_since(start),
                               args.out, report.get());
}

int run_optimize(const CommonArgs& args, const std::string& command) {
    ScenarioPtr scenario = make_scenario();
    StringPtr optimize_spec = make_string();
    if (int rc = load_scenario(args.config, scenario, optimize_spec); rc != 0) return rc;

    const auto start = std::chrono::steady_clock::now();
    StringPtr report = make_string();
    {
        char* text = nullptr;
        rn_status status = rn_optimize_report(scenario.get(), optimize_spec.get(), args.seed,
                                              args.has_seed ? 1 : 0, args.restarts, args.pair_a,
                                              args.pair_b, &text);
        if (status != RN_OK) return report_failure(status);
        report.reset(text);
    }
    return write_with_manifest(command, hash_of(scenario.get()), args.seed, seconds_since(start),
                               args.out, report.get());
}

int run_sweep(const std::string& kind, const CommonArgs& args, const std::string& mags_text,
              const std::string& command) {
    double mag_a = -1.0;
    double mag_b = -1.0;
    if (!mags_text.empty()) {
        char trailing = '\0';
        if (std::sscanf(mags_text.c_str(), "%lf,%lf%c", &mag_a, &mag_b, &trailing) != 2 ||
            mag_a < 0.0 || mag_b < 0.0) {
            std::fprintf(stderr, "error: --mags expects two nonnegative moduli as a,b\n");
            return 1;
        }
    }

    const auto start = std::chrono::steady_clock::now();
    StringPtr csv = make_string();
    std::string scenario_hash;

    if (kind == "z") {
        // z sweeps run over built-in scenario families; --config narrows the
        // set with a comma-separated list of their names.
        const int grid = args.grid > 0 ? args.grid : 30;
        char* text = nullptr;
        rn_status status = rn_z_sweep_csv(args.config.empty() ? nullptr : args.config.c_str(),
                                          grid, args.seed, args.restarts, &text);
        if (status != RN_OK) return report_failure(status);
        csv.reset(text);
    } else {
        ScenarioPtr scenario = make_scenario();
        StringPtr optimize_spec = make_string();
        if (int rc = load_scenario(args.config, scenario, optimize_spec); rc != 0) return rc;
        scenario_hash = hash_of(scenario.get());

        char* text = nullptr;
        rn_status status = RN_OK;
        if (kind == "phase") {
            const int grid = args.grid > 0 ? args.grid : 51;
            status = rn_phase_sweep_csv(scenario.get(), grid, mag_a, mag_b, args.pair_a,
                                        args.pair_b, &text);
        } else {
            const int grid = args.grid > 0 ? args.grid : 72;
            status = rn_ratio_scan_csv(scenario.get(), grid, args.seed, args.restarts, &text);
        }
        if (status != RN_OK) return report_failure(status);
        csv.reset(text);
    }
    return write_with_manifest(command, scenario_hash, args.seed, seconds_since(start), args.out,
                               csv.get());
}

int run_validate_full(const CommonArgs& args, int n_max, double dt, double t_max,
                      double deviation_limit, const std::string& command) {
    ScenarioPtr scenario = make_scenario();
    StringPtr optimize_spec = make_string();
    if (int rc = load_scenario(args.config, scenario, optimize_spec); rc != 0) return rc;

    const auto start = std::chrono::steady_clock::now();
    StringPtr report = make_string();
    int passed = 0;
    {
        char* text = nullptr;
        rn_status status = rn_validate_full(scenario.get(), n_max, dt, t_max, deviation_limit,
                                            args.pair_a, args.pair_b, &text, &passed);
        if (status != RN_OK) return report_failure(status);
        report.reset(text);
    }
    int rc = write_with_manifest(command, hash_of(scenario.get()), args.seed,
                                 seconds_since(start), args.out, report.get());
    if (rc != 0) return rc;
    if (passed == 0) {
        std::fprintf(stderr, "validation checks failed; see %s\n", args.out.c_str());
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::string command;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) command += ' ';
        command += argv[i];
    }

    CLI::App app{"Steady-state entanglement in driven emitter networks with lossy links"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = auto)")
        ->envname("RESONATOR_NET_THREADS");

    CommonArgs steady_args;
    CLI::App* steady = app.add_subcommand("steady", "Solve one scenario and report its steady state");
    steady->fallthrough();
    steady->add_option("--config", steady_args.config, "scenario file or built-in scenario name")
        ->required();
    steady->add_option("--out", steady_args.out, "output JSON path")->required();
    steady->add_option("--pair", steady_args.pair_text, "report one node pair i,j (default: all)");

    CommonArgs opt_args;
    CLI::App* optimize = app.add_subcommand("optimize", "Maximize steady-state concurrence");
    optimize->fallthrough();
    optimize->add_option("--config", opt_args.config,
                         "scenario file with an \"optimize\" section")
        ->required();
    optimize->add_option("--out", opt_args.out, "output JSON path")->required();
    optimize->add_option("--seed", opt_args.seed, "override the spec's random seed");
    optimize->add_option("--restarts", opt_args.restarts, "override the spec's restart count");
    optimize->add_option("--pair", opt_args.pair_text, "override the concurrence pair i,j");

    CommonArgs sweep_args;
    std::string sweep_kind;
    CLI::App* sweep = app.add_subcommand("sweep", "Grid data: drive phases, drive ratio, or loss");
    sweep->fallthrough();
    sweep->add_option("kind", sweep_kind, "phase | ratio | z")
        ->required()
        ->check(CLI::IsMember({"phase", "ratio", "z"}));
    sweep->add_option("--config", sweep_args.config,
                      "scenario file or name; for kind=z a comma-separated list of "
                      "config_i,config_ii,config_iii (default: all)");
    sweep->add_option("--out", sweep_args.out, "output CSV path")->required();
    sweep->add_option("--grid", sweep_args.grid,
                      "grid points per axis (defaults: phase 51, ratio 72, z 30)")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--seed", sweep_args.seed, "random seed for per-point optimization");
    sweep->add_option("--restarts", sweep_args.restarts, "optimizer restarts per grid point");
    sweep->add_option("--pair", sweep_args.pair_text, "concurrence pair i,j (phase sweeps)");
    std::string sweep_mags;
    sweep->add_option("--mags", sweep_mags,
                      "drive moduli a,b for the two swept links (phase sweeps; "
                      "default: the scenario's own)");

    CommonArgs val_args;
    int n_max = 0;
    double dt = 0.0;
    double t_max = 0.0;
    double deviation_limit = 0.0;
    CLI::App* validate = app.add_subcommand(
        "validate-full", "Check a raw waveguide scenario against its reduced description");
    validate->fallthrough();
    validate->add_option("--config", val_args.config,
                         "scenario file or name carrying raw waveguide parameters")
        ->required();
    validate->add_option("--out", val_args.out, "output JSON path")->required();
    validate->add_option("--pair", val_args.pair_text, "concurrence pair i,j");
    validate->add_option("--nmax", n_max, "link mode occupation cutoff (default 3)")
        ->check(CLI::PositiveNumber);
    validate->add_option("--dt", dt, "integration step (default: auto)");
    validate->add_option("--tmax", t_max, "integration horizon (default: auto)");
    validate->add_option("--deviation-limit", deviation_limit,
                         "relative concurrence deviation allowed (default 0.10)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (rn_status status = rn_set_threads(threads); status != RN_OK) return report_failure(status);

    for (CommonArgs* args : {&steady_args, &opt_args, &sweep_args, &val_args}) {
        if (int rc = parse_pair(*args); rc != 0) return rc;
    }
    opt_args.has_seed = optimize->count("--seed") > 0;

    if (steady->parsed()) return run_steady(steady_args, command);
    if (optimize->parsed()) return run_optimize(opt_args, command);
    if (sweep->parsed()) return run_sweep(sweep_kind, sweep_args, sweep_mags, command);
    if (validate->parsed())
        return run_validate_full(val_args, n_max, dt, t_max, deviation_limit, command);
    return 1;
}
