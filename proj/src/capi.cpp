// C ABI over the core library. All exceptions are translated to status codes
// here; no exception crosses this boundary. Strings handed to the caller are
// heap copies released by rn_string_free.

#include "resonet/resonet.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "analysis/entangle.hpp"
#include "common/error.hpp"
#include "common/threading.hpp"
#include "fullmodel/fullmodel.hpp"
#include "io/reports.hpp"
#include "json.hpp"
#include "model/network.hpp"
#include "model/operators.hpp"
#include "opt/objectives.hpp"
#include "solve/steady.hpp"

struct rn_scenario {
    resonet::Topology topology;
};

namespace {

using resonet::ErrorCode;
using resonet::Topology;

thread_local std::string t_last_error;

rn_status status_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return RN_ERR_INVALID_ARGUMENT;
        case ErrorCode::Parse: return RN_ERR_PARSE;
        case ErrorCode::Dimension: return RN_ERR_DIMENSION;
        case ErrorCode::NonUniqueSteadyState: return RN_ERR_NON_UNIQUE_STEADY_STATE;
        case ErrorCode::UnphysicalState: return RN_ERR_UNPHYSICAL_STATE;
        case ErrorCode::NoConvergence: return RN_ERR_NO_CONVERGENCE;
        case ErrorCode::DegenerateDenominator: return RN_ERR_DEGENERATE_DENOMINATOR;
        case ErrorCode::ValidationThreshold: return RN_ERR_VALIDATION_THRESHOLD;
        case ErrorCode::Internal: return RN_ERR_INTERNAL;
    }
    return RN_ERR_INTERNAL;
}

// Runs the body and converts anything thrown into a status plus the
// thread-local message. Output parameters are only written on success.
template <typename Fn>
rn_status guarded(Fn&& fn) {
    try {
        fn();
        return RN_OK;
    } catch (const resonet::Error& e) {
        t_last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        t_last_error = "out of memory";
        return RN_ERR_INTERNAL;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return RN_ERR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown error";
        return RN_ERR_INTERNAL;
    }
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require_arg(bool ok, const char* message) {
    resonet::require(ok, ErrorCode::InvalidArgument, message);
}

// Solver entry points accept either mode; raw waveguide descriptions are
// reduced on the way in.
Topology as_effective(const Topology& t) {
    if (t.mode == resonet::TopologyMode::Physical) return resonet::derive_effective(t);
    return t;
}

// External pair convention: 1-based node labels, (0, 0) = default pair.
// Returns 0-based labels, (-1, -1) for the default.
std::pair<int, int> decode_pair(const Topology& t, int a, int b, const char* who) {
    if (a == 0 && b == 0) return {-1, -1};
    const int n = t.node_count();
    resonet::require(a >= 1 && a <= n && b >= 1 && b <= n && a != b, ErrorCode::InvalidArgument,
                     std::string(who) + ": pair must name two distinct nodes between 1 and " +
                         std::to_string(n) + " (or 0,0 for the default)");
    return {a - 1, b - 1};
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < count; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    return out;
}

}  // namespace

extern "C" {

const char* rn_version(void) { return resonet::kToolVersion; }

const char* rn_last_error(void) { return t_last_error.c_str(); }

void rn_string_free(char* s) { delete[] s; }

rn_status rn_set_threads(int n) {
    return guarded([&] {
        require_arg(n >= 0, "rn_set_threads: thread count must be >= 0 (0 = auto)");
        resonet::set_thread_count(n);
    });
}

rn_status rn_scenario_from_json(const char* json_text, rn_scenario** out) {
    return guarded([&] {
        require_arg(json_text != nullptr && out != nullptr,
                    "rn_scenario_from_json: null argument");
        Topology t = resonet::parse_scenario_json(json_text);
        *out = new rn_scenario{std::move(t)};
    });
}

rn_status rn_scenario_from_file(const char* path, rn_scenario** out, char** optimize_section) {
    return guarded([&] {
        require_arg(path != nullptr && out != nullptr, "rn_scenario_from_file: null argument");
        const std::string text = resonet::read_file(path);

        // A scenario file may carry a top-level "optimize" object next to the
        // topology; split it off before the strict schema parse.
        std::string scenario_text = text;
        std::string optimize_text;
        nlohmann::ordered_json doc = nlohmann::ordered_json::parse(text, nullptr, false);
        if (!doc.is_discarded() && doc.is_object() && doc.contains("optimize")) {
            optimize_text = doc["optimize"].dump();
            doc.erase("optimize");
            scenario_text = doc.dump();
        }

        Topology t = resonet::parse_scenario_json(scenario_text);
        *out = new rn_scenario{std::move(t)};
        if (optimize_section != nullptr)
            *optimize_section = optimize_text.empty() ? nullptr : copy_string(optimize_text);
    });
}

rn_status rn_scenario_catalog(const char* name, rn_scenario** out) {
    return guarded([&] {
        require_arg(name != nullptr && out != nullptr, "rn_scenario_catalog: null argument");
        Topology t = resonet::scenario_catalog(name);
        *out = new rn_scenario{std::move(t)};
    });
}

void rn_scenario_free(rn_scenario* s) { delete s; }

rn_status rn_scenario_canonical_json(const rn_scenario* s, char** out) {
    return guarded([&] {
        require_arg(s != nullptr && out != nullptr, "rn_scenario_canonical_json: null argument");
        *out = copy_string(resonet::scenario_to_canonical_json(s->topology));
    });
}

rn_status rn_scenario_hash(const rn_scenario* s, char** out) {
    return guarded([&] {
        require_arg(s != nullptr && out != nullptr, "rn_scenario_hash: null argument");
        *out = copy_string(resonet::scenario_hash(s->topology));
    });
}

rn_status rn_scenario_node_count(const rn_scenario* s, int* out) {
    return guarded([&] {
        require_arg(s != nullptr && out != nullptr, "rn_scenario_node_count: null argument");
        *out = s->topology.node_count();
    });
}

rn_status rn_scenario_is_physical(const rn_scenario* s, int* out) {
    return guarded([&] {
        require_arg(s != nullptr && out != nullptr, "rn_scenario_is_physical: null argument");
        *out = s->topology.mode == resonet::TopologyMode::Physical ? 1 : 0;
    });
}

rn_status rn_scenario_set_z(rn_scenario* s, int link, double z) {
    return guarded([&] {
        require_arg(s != nullptr, "rn_scenario_set_z: null scenario");
        require_arg(link >= 1, "rn_scenario_set_z: link index is 1-based");
        s->topology = resonet::set_z(s->topology, static_cast<std::size_t>(link - 1), z);
    });
}

rn_status rn_scenario_derive_effective(const rn_scenario* s, rn_scenario** out) {
    return guarded([&] {
        require_arg(s != nullptr && out != nullptr,
                    "rn_scenario_derive_effective: null argument");
        Topology t = resonet::derive_effective(s->topology);
        *out = new rn_scenario{std::move(t)};
    });
}

rn_status rn_concurrence(const rn_scenario* s, int node_a, int node_b, double* out) {
    return guarded([&] {
        require_arg(s != nullptr && out != nullptr, "rn_concurrence: null argument");
        const Topology t = as_effective(s->topology);
        auto pair = decode_pair(t, node_a, node_b, "rn_concurrence");
        if (pair.first < 0) pair = resonet::default_pair(t.node_count());
        const resonet::SteadyStateResult result = resonet::steady_state_of(t);
        const resonet::Matrix rho2 =
            resonet::partial_trace_pair(result.rho, t.node_count(), pair.first, pair.second);
        *out = resonet::concurrence(rho2);
    });
}

rn_status rn_steady_report(const rn_scenario* s, const int* pairs, size_t n_pairs,
                           char** out_json) {
    return guarded([&] {
        require_arg(s != nullptr && out_json != nullptr, "rn_steady_report: null argument");
        require_arg(n_pairs == 0 || pairs != nullptr,
                    "rn_steady_report: pair array is null but n_pairs > 0");
        const Topology t = as_effective(s->topology);
        const int n = t.node_count();

        std::vector<std::pair<int, int>> want;
        if (n_pairs == 0) {
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) want.emplace_back(i, j);
        } else {
            for (size_t k = 0; k < n_pairs; ++k) {
                const auto p =
                    decode_pair(t, pairs[2 * k], pairs[2 * k + 1], "rn_steady_report");
                require_arg(p.first >= 0, "rn_steady_report: pair entries must be explicit");
                want.push_back(p);
            }
        }

        const resonet::SteadyStateResult result = resonet::steady_state_of(t);
        *out_json = copy_string(resonet::steady_report_json(t, result, want));
    });
}

rn_status rn_optimize_report(const rn_scenario* s, const char* spec_json, uint64_t seed,
                             int has_seed, int restarts, int pair_a, int pair_b,
                             char** out_json) {
    return guarded([&] {
        require_arg(s != nullptr && out_json != nullptr, "rn_optimize_report: null argument");
        require_arg(spec_json != nullptr,
                    "rn_optimize_report: the scenario has no optimize specification");
        const Topology t = as_effective(s->topology);

        resonet::OptimizeSpecData spec = resonet::parse_optimize_spec_json(spec_json, t);
        if (has_seed != 0) spec.seed = seed;
        if (restarts > 0) spec.restarts = restarts;
        const auto pair = decode_pair(t, pair_a, pair_b, "rn_optimize_report");
        if (pair.first >= 0) {
            spec.pair_first = pair.first;
            spec.pair_second = pair.second;
        }

        const resonet::OptimizeOutcome outcome = resonet::maximize_concurrence(spec);
        int pf = spec.pair_first;
        int ps = spec.pair_second;
        if (pf < 0) std::tie(pf, ps) = resonet::default_pair(t.node_count());
        *out_json = copy_string(resonet::optimize_report_json(spec.free_params, outcome, pf, ps));
    });
}

rn_status rn_phase_sweep_csv(const rn_scenario* s, int grid, double mag_a, double mag_b,
                             int pair_a, int pair_b, char** out_csv) {
    return guarded([&] {
        require_arg(s != nullptr && out_csv != nullptr, "rn_phase_sweep_csv: null argument");
        require_arg(grid >= 1, "rn_phase_sweep_csv: grid must be >= 1");
        const Topology t = as_effective(s->topology);
        resonet::require(t.links.size() >= 3, ErrorCode::InvalidArgument,
                         "rn_phase_sweep_csv: the scenario needs at least three links");
        const auto pair = decode_pair(t, pair_a, pair_b, "rn_phase_sweep_csv");
        if (mag_a < 0.0) mag_a = std::abs(t.links[0].x);
        if (mag_b < 0.0) mag_b = std::abs(t.links[2].x);
        const resonet::PhaseSweepResult result = resonet::phase_sweep(
            t, mag_a, mag_b, static_cast<std::size_t>(grid), pair.first, pair.second);
        *out_csv = copy_string(resonet::phase_sweep_csv(result));
    });
}

rn_status rn_ratio_scan_csv(const rn_scenario* s, int grid, uint64_t seed, int restarts,
                            char** out_csv) {
    return guarded([&] {
        require_arg(s != nullptr && out_csv != nullptr, "rn_ratio_scan_csv: null argument");
        require_arg(grid >= 1, "rn_ratio_scan_csv: grid must be >= 1");
        const Topology t = as_effective(s->topology);
        const int effective_restarts = restarts > 0 ? restarts : 6;
        const resonet::RatioScanResult result =
            resonet::ratio_scan(t, static_cast<std::size_t>(grid), seed, effective_restarts);
        *out_csv = copy_string(resonet::ratio_scan_csv(result));
    });
}

rn_status rn_z_sweep_csv(const char* configs, int grid, uint64_t seed, int restarts,
                         char** out_csv) {
    return guarded([&] {
        require_arg(out_csv != nullptr, "rn_z_sweep_csv: null output argument");
        require_arg(grid >= 1, "rn_z_sweep_csv: grid must be >= 1");

        std::vector<std::string> names;
        if (configs == nullptr || *configs == '\0') {
            names = {"config_i", "config_ii", "config_iii"};
        } else {
            std::string rest = configs;
            while (!rest.empty()) {
                const std::size_t comma = rest.find(',');
                std::string item = rest.substr(0, comma);
                rest = comma == std::string::npos ? std::string() : rest.substr(comma + 1);
                const std::size_t first = item.find_first_not_of(" \t");
                const std::size_t last = item.find_last_not_of(" \t");
                resonet::require(first != std::string::npos, ErrorCode::InvalidArgument,
                                 "rn_z_sweep_csv: empty config name in list");
                names.push_back(item.substr(first, last - first + 1));
            }
        }

        const int effective_restarts = restarts > 0 ? restarts : 16;
        const resonet::ZSweepResult result =
            resonet::z_sweep(names, linspace(1.0, 6.0, grid), seed, effective_restarts);
        *out_csv = copy_string(resonet::z_sweep_csv(result));
    });
}

rn_status rn_validate_full(const rn_scenario* s, int n_max, double dt, double t_max,
                           double deviation_limit, int pair_a, int pair_b, char** out_json,
                           int* out_passed) {
    return guarded([&] {
        require_arg(s != nullptr && out_json != nullptr && out_passed != nullptr,
                    "rn_validate_full: null argument");
        resonet::FullModelConfig config;
        if (n_max > 0) config.n_max = n_max;
        config.dt = dt;
        config.t_max = t_max;
        if (deviation_limit > 0.0) config.deviation_limit = deviation_limit;
        const auto pair = decode_pair(s->topology, pair_a, pair_b, "rn_validate_full");
        config.pair_first = pair.first;
        config.pair_second = pair.second;

        const resonet::EliminationReport report =
            resonet::validate_elimination(s->topology, config);
        *out_json = copy_string(resonet::elimination_report_json(report));
        *out_passed = report.passed ? 1 : 0;
    });
}

rn_status rn_write_file_atomic(const char* path, const char* contents) {
    return guarded([&] {
        require_arg(path != nullptr && contents != nullptr,
                    "rn_write_file_atomic: null argument");
        resonet::write_file_atomic(path, contents);
    });
}

rn_status rn_manifest_json(const char* command, const char* scenario_hash, uint64_t seed,
                           double wall_seconds, const char* const* outputs, size_t n_outputs,
                           char** out_json) {
    return guarded([&] {
        require_arg(command != nullptr && out_json != nullptr,
                    "rn_manifest_json: null argument");
        require_arg(n_outputs == 0 || outputs != nullptr,
                    "rn_manifest_json: output array is null but n_outputs > 0");
        resonet::RunManifest manifest;
        manifest.command = command;
        manifest.scenario_hash = scenario_hash == nullptr ? "" : scenario_hash;
        manifest.seed = seed;
        manifest.wall_seconds = wall_seconds;
        for (size_t i = 0; i < n_outputs; ++i) {
            require_arg(outputs[i] != nullptr, "rn_manifest_json: null output path");
            manifest.outputs.emplace_back(outputs[i]);
        }
        *out_json = copy_string(resonet::run_manifest_json(manifest));
    });
}

}  // extern "C"
