#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "model/network.hpp"
#include "opt/neldermead.hpp"

namespace resonet {

// One optimizable degree of freedom of a scenario. Parameters apply to a
// copy of the base topology in list order.
//   Amplitude      |x_link|; the link keeps its base phase (0 if x was 0).
//   AmplitudePair  one modulus m shared by two links: the primary link gets
//                  m, the tied link gets tie_factor * m (sign folded into the
//                  drive; |tie_factor| scales the modulus).
//   Phase          arg x_link, optimized on the circle via a (cos, sin)
//                  embedding (two optimizer dimensions; bounds ignored).
//   YLink          y of one two-endpoint link.
//   YCommon        one y shared by every two-endpoint link.
//   ZLink          endpoint decay via z = 1 + gamma/(2 Gamma_link).
//   GammaRatio     Gamma_link = value * (base Gamma of ref_link).
enum class FreeParamKind {
    Amplitude,
    AmplitudePair,
    Phase,
    YLink,
    YCommon,
    ZLink,
    GammaRatio,
};

struct FreeParam {
    FreeParamKind kind = FreeParamKind::Amplitude;
    std::size_t link = 0;
    std::size_t tie_link = 0;   // AmplitudePair only
    double tie_factor = 1.0;    // AmplitudePair only
    std::size_t ref_link = 0;   // GammaRatio only
    double lo = 0.0;
    double hi = 0.0;
};

struct OptimizeSpecData {
    Topology scenario;
    std::vector<FreeParam> free_params;
    int restarts = 16;
    std::uint64_t seed = 0;
    int pair_first = -1;   // -1 selects the default pair for the node count
    int pair_second = -1;
    NelderMeadOptions nm;
    bool parallel_restarts = true;
};

struct OptimizeOutcome {
    std::vector<double> best_params;  // decoded values, one per FreeParam
    double best_value = 0.0;
    std::size_t evaluations = 0;      // objective calls across all restarts
    std::size_t failed_points = 0;    // solver failures, scored 0
    int best_restart = -1;
    std::vector<double> restart_values;
};

// Default concurrence pair: nodes (1,2) for two-node networks, (2,3) for
// three-node networks (1-based labels; returned 0-based).
std::pair<int, int> default_pair(int node_count);

// Human-readable name of a free parameter, used in reports ("abs_x_1",
// "arg_x_3", "y_2", "y_common", "z_2", "gamma_ratio_2_1"; 1-based links).
std::string free_param_label(const FreeParam& param);

// Number of optimizer dimensions the parameter list encodes (Phase takes 2).
std::size_t encoded_dimension(const std::vector<FreeParam>& params);

// Applies encoded optimizer coordinates to a copy of the base topology.
// Amplitude/phase overrides on the same link compose; throws what set_z or
// validation throws.
Topology apply_free_parameters(const Topology& base, const std::vector<FreeParam>& params,
                               const std::vector<double>& x);

// Multi-start Nelder-Mead maximization of the steady-state concurrence of the
// requested pair. The first restart starts from the scenario's own parameter
// values; the others draw start points within bounds from a per-restart
// seeded generator (drive amplitudes with a quadratic bias toward weak drive,
// where the optima live). Results are reproducible bit-for-bit for a fixed
// spec. Points where the steady-state solve fails score 0 and are counted in
// failed_points. Best-of-restarts wins; value ties break toward the lowest
// restart index.
OptimizeOutcome maximize_concurrence(const OptimizeSpecData& spec);

struct PhaseSweepCell {
    double phi_a = 0.0;
    double phi_b = 0.0;
    double concurrence = 0.0;        // NaN when status != "ok"
    double cross_correlation = 0.0;  // NaN when status != "ok" or undefined
    std::string status;              // "ok" or an error label
};

struct PhaseSweepResult {
    std::size_t grid = 0;
    std::vector<PhaseSweepCell> cells;  // row-major over (phi_a, phi_b)
    std::size_t failed_points = 0;
};

// Certified steady-state concurrence and cross-correlation on a uniform
// grid x grid lattice over [0, 2pi)^2 of the drive phases of the first and
// third link (the two driven outer links of the catalog scenarios), with the
// drive moduli fixed to mag_a and mag_b. Needs at least three links.
PhaseSweepResult phase_sweep(const Topology& scenario, double mag_a, double mag_b,
                             std::size_t grid, int pair_first = -1, int pair_second = -1);

struct RatioScanPoint {
    double theta = 0.0;
    double best_concurrence = 0.0;  // NaN when status != "ok"
    double best_magnitude = 0.0;
    std::string status;
};

struct RatioScanResult {
    std::vector<RatioScanPoint> points;
    std::size_t evaluations = 0;
    std::size_t failed_points = 0;
};

// For each theta on a uniform grid over [0, 2pi), maximizes concurrence over
// the overall drive magnitude r in [0, 12] along (x_1, x_3) = r (cos theta,
// sin theta) (real drives; the middle link stays undriven). The scenario must
// sit at the weak-middle-ring defaults this scan is defined for: Gamma_2 =
// 1e-3 Gamma_1 = 1e-3 Gamma_3, y_1 = y_3 = 15, z_1 = z_3 = 1.01, z_2 = 11
// (all checked to 1e-6 relative).
RatioScanResult ratio_scan(const Topology& scenario, std::size_t theta_count,
                           std::uint64_t seed, int restarts);

struct ZSweepPoint {
    std::string config;
    double z = 0.0;
    double concurrence = 0.0;      // NaN when status != "ok"
    double side_amplitude = 0.0;   // optimal |x| of the driven outer link(s)
    double middle_amplitude = 0.0; // optimal |x| of the middle link (NaN if none free)
    double y_value = 0.0;          // optimal y of the free coupling (NaN if none free)
    std::string status;
};

struct ZSweepResult {
    std::vector<ZSweepPoint> points;
    std::size_t failed_points = 0;
};

// Maximized concurrence as a function of the cooperativity parameter z, for
// any subset of {config_i, config_ii, config_iii}. z is applied to the
// dominant link(s) of each scenario (the single link of config_i, the middle
// link of config_ii, both outer links of config_iii) and the remaining drive
// and coupling parameters are re-optimized at every grid point. Grid values
// must lie within [1, 6]. Points whose steady state is non-unique (config_i
// at z = 1 has a dark antisymmetric state) are reported with an error status
// instead of a value.
ZSweepResult z_sweep(const std::vector<std::string>& configs, const std::vector<double>& z_values,
                     std::uint64_t seed, int restarts);

struct SizeCheckReport {
    double ring3_best = 0.0;
    std::vector<std::string> ring3_labels;
    std::vector<double> ring3_params;
    double ring4_adjacent_best = 0.0;
    double ring4_opposite_best = 0.0;
    std::vector<std::string> ring4_labels;
    std::vector<double> ring4_adjacent_params;
    std::vector<double> ring4_opposite_params;
    std::size_t evaluations = 0;
    std::size_t failed_points = 0;
};

// Uniform four-node ring used by size_check: Gamma = 1, y = 15, z = 1.01,
// drives free.
Topology four_ring_topology();

// Optimizes pairwise concurrence on the four-node ring (adjacent pair and
// opposite pair) and reports both next to the three-node ring optimum
// computed with the same settings. max_evaluations caps each restart's
// simplex budget (the four-node solves dominate the cost).
SizeCheckReport size_check(std::uint64_t seed, int restarts, std::size_t max_evaluations = 2000);

}  // namespace resonet
