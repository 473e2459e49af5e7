#pragma once

#include <cstddef>
#include <vector>

#include "model/network.hpp"
#include "numeric/matrix.hpp"

namespace resonet {

// Joint emitter + waveguide simulation of a physical-mode network, used to
// check the reduced (waveguide-eliminated) description against the model it
// came from.
//
// Tensor order: emitter qubits first (node 1 = most significant), then one
// (n_max+1)-level harmonic mode per link, in link order. The joint dimension
// 2^n (n_max+1)^m is capped so a misconfigured run fails fast instead of
// allocating gigabytes.

inline constexpr std::size_t kFullModelDimCap = 1024;

// Direct (least-squares) steady-state solves build the dense superoperator,
// which scales as dim^4 in memory; cap the dimension where that is sane.
inline constexpr std::size_t kFullDirectSolveCap = 32;

struct FullModelConfig {
    int n_max = 3;       // waveguide occupation cutoff, at least 2
    double dt = 0.0;     // RK4 step; 0 selects 0.5 / (fastest generator rate)
    double t_max = 0.0;  // integration horizon; 0 selects 60 / (slowest rate)
    double deviation_limit = 0.10;  // gate on the reduced-model concurrence deviation
    int pair_first = -1;            // concurrence pair; -1,-1 selects the default pair
    int pair_second = -1;
};

struct FullOperators {
    int n_nodes = 0;
    int n_links = 0;
    int n_max = 0;
    std::size_t dim = 0;
    std::vector<Matrix> P;  // emitter lowering operators on the joint space
    std::vector<Matrix> a;  // waveguide lowering operators on the joint space
};

// Requires physical mode and n_max >= 2; throws Dimension above the cap.
FullOperators build_full_operators(const Topology& physical, int n_max);

// Hamiltonian in the frame rotating at the drive frequency omega_d:
//   sum_l (omega_c,l - omega_d) a_l^dag a_l
// + sum_i (omega_p,i - omega_d) P_i^dag P_i
// + sum_l J_l (a_l^dag sum_{i in endpoints(l)} P_i + h.c.)
// + sum_l alpha_l (e^{i phi_l} a_l^dag + h.c.)
Matrix build_full_hamiltonian(const Topology& physical, const FullOperators& ops);

// Precomputed generator pieces. The right-hand side is
//   rhs(rho) = -i [H, rho] + sum_c rate_c F_c(rho),
//   F_c(rho) = 2 A_c rho A_c^dag - A_c^dag A_c rho - rho A_c^dag A_c,
// with A = a_l at rate kappa_l and A = P_i at rate gamma_i. This amplitude
// convention matches the diagonal terms of the reduced model, so the induced
// rate Gamma = J^2 kappa / (kappa^2 + Delta^2) comes out of the elimination
// with no extra factors (validate_elimination is the check of that claim).
struct FullGenerator {
    Matrix H;
    std::vector<Matrix> jump;         // waveguide modes first, then emitters
    std::vector<Matrix> jump_dag;
    std::vector<Matrix> jump_number;  // A^dag A
    std::vector<double> rate;
    int n_waveguide_jumps = 0;
    double fastest = 0.0;  // max(2 ||H||_inf, total dissipator scale)
    double slowest = 0.0;  // min positive of {gamma_i} and induced {Gamma_l}
};

FullGenerator build_full_generator(const Topology& physical, const FullOperators& ops);

Matrix apply_full_rhs(const FullGenerator& generator, const Matrix& rho);

Matrix full_ground_state(const FullOperators& ops);
Matrix full_maximally_mixed(const FullOperators& ops);

// Partial trace over every waveguide mode, leaving the 2^n emitter state.
Matrix trace_out_waveguides(const FullOperators& ops, const Matrix& rho_full);

struct FullEvolutionResult {
    Matrix rho;
    double residual = 0.0;  // ||rhs(rho)||_F at the returned state
    double elapsed = 0.0;
    std::size_t steps = 0;
    bool converged = false;
};

// Fixed-step RK4 from rho0 until ||rhs||_F < 1e-9 max(1, fastest) or t_max.
// The trace stays renormalized; drift above 1e-9 in one step is an internal
// error. A caller-supplied dt must satisfy dt * fastest <= 0.5.
FullEvolutionResult evolve_full(const Topology& physical, const FullOperators& ops,
                                const FullModelConfig& config, const Matrix& rho0);

// Independent route to the same steady state: augmented least squares on the
// dense superoperator (dim <= kFullDirectSolveCap only).
Matrix solve_full_steady_direct(const Topology& physical, const FullOperators& ops);

struct ReducedComparison {
    double concurrence_eff = 0.0;
    double concurrence_deviation = 0.0;     // |C_full - C_eff| / max(C_full, 1e-12)
    double max_population_deviation = 0.0;  // max_i |<n_i>_full - <n_i>_eff|
    double max_coherence_deviation = 0.0;   // max_{i<j} |<P_i^+ P_j>_full - <P_i^+ P_j>_eff|
    double state_distance = 0.0;            // ||rho_reduced - rho_eff||_F
};

struct EliminationReport {
    int n_nodes = 0;
    int n_links = 0;
    int n_max = 0;
    std::size_t dim = 0;
    int pair_first = 0;
    int pair_second = 0;
    double scale_separation = 0.0;  // min kappa / max reduced-model rate; must be >= 10
    double deviation_limit = 0.0;

    double residual = 0.0;                 // ||rhs||_F at the integrated steady state
    double initial_state_agreement = 0.0;  // ||rho_ground - rho_mixed||_F at stop
    bool uniqueness_ok = false;            // agreement <= 1e-6
    double direct_solve_distance = -1.0;   // vs. the least-squares route; -1 above the cap
    double max_photon_number = 0.0;        // max_l <a_l^dag a_l>
    bool photon_ok = false;                // max photon < n_max / 2
    double truncation_shift = 0.0;         // max relative observable change n_max -> n_max+1
    bool truncation_ok = false;            // <= 1%

    double concurrence_full = 0.0;
    std::vector<double> populations_full;

    ReducedComparison mapped;   // reduced model exactly as derived
    ReducedComparison shifted;  // plus induced detunings delta_i = sum_{l at i} Gamma_l y_l
    double best_deviation = 0.0;
    bool deviation_ok = false;

    bool passed = false;  // uniqueness && photon && truncation && deviation
};

// Full validation protocol:
//   1. check the scale separation precondition (throws InvalidArgument below 10);
//   2. integrate the physical model to steady state from the emitter+vacuum
//      ground state;
//   3. certify uniqueness by integrating the ground-vs-maximally-mixed
//      difference (linear in the generator) until it collapses;
//   4. check waveguide occupation against the cutoff and rerun at n_max + 1
//      to bound the truncation error;
//   5. trace out the waveguides and compare populations, coherences, and
//      concurrence against the reduced model, both exactly as derived and
//      with the induced per-node detunings restored.
EliminationReport validate_elimination(const Topology& physical, const FullModelConfig& config);

}  // namespace resonet
