#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fullmodel/fullmodel.hpp"
#include "model/network.hpp"
#include "opt/objectives.hpp"
#include "solve/steady.hpp"

namespace resonet {

inline constexpr char kToolVersion[] = "1.0.0";

// Full-precision scientific notation (17 significant digits) used for every
// CSV numeric field so files are byte-stable across runs and platforms.
std::string format_full(double value);

// Write-temp-then-rename in the target directory, so readers never observe a
// partial file and failed runs leave no output behind.
void write_file_atomic(const std::string& path, const std::string& contents);

// Whole-file read; throws InvalidArgument when the file cannot be opened.
std::string read_file(const std::string& path);

// Provenance sidecar written next to every data file.
struct RunManifest {
    std::string command;
    std::string scenario_hash;  // canonical-topology hash; empty if no scenario
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    double wall_seconds = 0.0;
    std::vector<std::string> outputs;
};

std::string run_manifest_json(const RunManifest& manifest);

// Steady-state report: the full density matrix (real/imag parts), solver
// certificates, per-pair concurrence and cross-correlation (the latter is
// null with a status label when a population vanishes), and, for three-node
// networks, how close each single node is to factoring out in its ground
// state. Pairs are 0-based in, 1-based in the JSON.
std::string steady_report_json(const Topology& topology, const SteadyStateResult& result,
                               const std::vector<std::pair<int, int>>& pairs);

// Optimization report: best parameters by name, best value, bookkeeping.
std::string optimize_report_json(const std::vector<FreeParam>& params,
                                 const OptimizeOutcome& outcome, int pair_first, int pair_second);

// Parses the "optimize" JSON object of a scenario file into a runnable spec
// bound to the given scenario. Schema (unknown keys rejected at every level;
// link/node indices 1-based):
//   {
//     "restarts": 16,            // optional, >= 1
//     "seed": 1,                 // optional, unsigned
//     "max_evaluations": 2000,   // optional, per-restart simplex budget
//     "pair": [1, 2],            // optional concurrence pair
//     "free": [                  // at least one entry
//       {"kind": "amplitude", "link": 1, "lo": 0.0, "hi": 12.0},
//       {"kind": "amplitude_pair", "link": 1, "tie_link": 3,
//        "tie_factor": 1.0, "lo": 0.0, "hi": 12.0},
//       {"kind": "phase", "link": 3},
//       {"kind": "y", "link": 2, "lo": -30.0, "hi": 30.0},
//       {"kind": "y_common", "lo": -30.0, "hi": 30.0},
//       {"kind": "z", "link": 1, "lo": 1.0, "hi": 6.0},
//       {"kind": "gamma_ratio", "link": 2, "ref_link": 1, "lo": 1e-4, "hi": 1.0}
//     ]
//   }
// "phase" takes no bounds (the whole circle is searched); every other kind
// requires lo < hi. Link references must exist in the scenario.
OptimizeSpecData parse_optimize_spec_json(const std::string& text, const Topology& scenario);

// Grid data as CSV. Column orders are fixed:
//   phase: phi_1,phi_3,concurrence,cross_correlation,status
//   ratio: theta,best_concurrence,best_magnitude,status
//   z:     config,z,concurrence,side_amplitude,middle_amplitude,y,status
std::string phase_sweep_csv(const PhaseSweepResult& result);
std::string ratio_scan_csv(const RatioScanResult& result);
std::string z_sweep_csv(const ZSweepResult& result);

// Waveguide-elimination validation report.
std::string elimination_report_json(const EliminationReport& report);

}  // namespace resonet
