/* C interface to the polariton-network steady-state library.
 *
 * Conventions:
 *   - Node and link indices crossing this boundary are 1-based, matching the
 *     scenario JSON schema. A pair value of 0 means "use the default pair"
 *     (nodes 1,2 for two-node networks, 2,3 for three-node networks).
 *   - Every function returning rn_status sets a thread-local error message
 *     readable via rn_last_error() when it fails.
 *   - Strings returned through char** out parameters are heap-allocated;
 *     release them with rn_string_free().
 *   - Handles are opaque; release them with rn_scenario_free().
 */
#ifndef RESONET_H
#define RESONET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RN_API __declspec(dllexport)
#else
#define RN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rn_status {
    RN_OK = 0,
    RN_ERR_INVALID_ARGUMENT = 1,
    RN_ERR_PARSE = 2,
    RN_ERR_DIMENSION = 3,
    RN_ERR_NON_UNIQUE_STEADY_STATE = 4,
    RN_ERR_UNPHYSICAL_STATE = 5,
    RN_ERR_NO_CONVERGENCE = 6,
    RN_ERR_DEGENERATE_DENOMINATOR = 7,
    RN_ERR_VALIDATION_THRESHOLD = 8,
    RN_ERR_INTERNAL = 9
} rn_status;

typedef struct rn_scenario rn_scenario;

/* Library version string (static storage, do not free). */
RN_API const char* rn_version(void);

/* Message of the most recent failure on this thread (static storage per
 * thread, valid until the next failing call). */
RN_API const char* rn_last_error(void);

RN_API void rn_string_free(char* s);

/* Worker threads used by sweeps and multi-start optimization. 0 = auto. */
RN_API rn_status rn_set_threads(int n);

/* ---- scenarios ------------------------------------------------------- */

/* Parse a scenario from JSON text (the topology schema only). */
RN_API rn_status rn_scenario_from_json(const char* json_text, rn_scenario** out);

/* Load a scenario file. The file holds the topology schema plus an optional
 * top-level "optimize" object; when present and optimize_section is non-NULL,
 * that object is returned as JSON text (caller frees). */
RN_API rn_status rn_scenario_from_file(const char* path, rn_scenario** out,
                                       char** optimize_section);

/* Built-in example networks: config_i, config_ii, config_iii,
 * config_iii_optimal. */
RN_API rn_status rn_scenario_catalog(const char* name, rn_scenario** out);

RN_API void rn_scenario_free(rn_scenario* s);

RN_API rn_status rn_scenario_canonical_json(const rn_scenario* s, char** out);
RN_API rn_status rn_scenario_hash(const rn_scenario* s, char** out);
RN_API rn_status rn_scenario_node_count(const rn_scenario* s, int* out);

/* 1 if the scenario carries raw waveguide parameters, 0 if reduced ones. */
RN_API rn_status rn_scenario_is_physical(const rn_scenario* s, int* out);

/* Set the decay rate of the link's endpoint nodes so that the link's
 * cooperativity parameter z = 1 + gamma/(2 Gamma) matches. In place. */
RN_API rn_status rn_scenario_set_z(rn_scenario* s, int link, double z);

/* Reduce a physical scenario to its effective description. */
RN_API rn_status rn_scenario_derive_effective(const rn_scenario* s, rn_scenario** out);

/* ---- solving and analysis -------------------------------------------- */

/* Steady-state concurrence of one node pair (certified solve). */
RN_API rn_status rn_concurrence(const rn_scenario* s, int node_a, int node_b, double* out);

/* Steady-state report JSON: density matrix, solver certificates, per-pair
 * concurrence and cross-correlation, factorization diagnostics. pairs holds
 * n_pairs (a, b) couples flattened; n_pairs = 0 reports every pair. */
RN_API rn_status rn_steady_report(const rn_scenario* s, const int* pairs, size_t n_pairs,
                                  char** out_json);

/* Multi-start concurrence maximization driven by an "optimize" JSON object
 * (see the scenario schema). seed/restarts/pair arguments override the spec
 * when has_seed is nonzero / restarts > 0 / pair values > 0. */
RN_API rn_status rn_optimize_report(const rn_scenario* s, const char* spec_json,
                                    uint64_t seed, int has_seed, int restarts, int pair_a,
                                    int pair_b, char** out_json);

/* Concurrence + cross-correlation on a grid x grid lattice of the phases of
 * the first and third link's drive, whose moduli are fixed to mag_a / mag_b
 * (negative = keep the scenario's own modulus for that link). CSV columns:
 * phi_1,phi_3,concurrence,cross_correlation,status */
RN_API rn_status rn_phase_sweep_csv(const rn_scenario* s, int grid, double mag_a, double mag_b,
                                    int pair_a, int pair_b, char** out_csv);

/* Optimal drive magnitude along each direction (x_1, x_3) = r(cos t, sin t).
 * CSV columns: theta,best_concurrence,best_magnitude,status */
RN_API rn_status rn_ratio_scan_csv(const rn_scenario* s, int grid, uint64_t seed, int restarts,
                                   char** out_csv);

/* Re-optimized concurrence against the cooperativity parameter z in [1, 6]
 * for a comma-separated subset of config_i,config_ii,config_iii (NULL or ""
 * = all three). CSV columns:
 * config,z,concurrence,side_amplitude,middle_amplitude,y,status */
RN_API rn_status rn_z_sweep_csv(const char* configs, int grid, uint64_t seed, int restarts,
                                char** out_csv);

/* Joint emitter+waveguide validation of the eliminated description (physical
 * scenarios only). n_max <= 0 selects 3; dt/t_max 0 select automatic values;
 * deviation_limit <= 0 selects 0.10. out_passed reports the overall verdict;
 * the JSON report is returned in both cases. */
RN_API rn_status rn_validate_full(const rn_scenario* s, int n_max, double dt, double t_max,
                                  double deviation_limit, int pair_a, int pair_b,
                                  char** out_json, int* out_passed);

/* ---- files and provenance -------------------------------------------- */

/* Write-temp-then-rename so partial files are never observed. */
RN_API rn_status rn_write_file_atomic(const char* path, const char* contents);

/* Provenance sidecar JSON (command line, scenario hash, seed, tool version,
 * wall time, output paths). */
RN_API rn_status rn_manifest_json(const char* command, const char* scenario_hash, uint64_t seed,
                                  double wall_seconds, const char* const* outputs,
                                  size_t n_outputs, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* RESONET_H */
