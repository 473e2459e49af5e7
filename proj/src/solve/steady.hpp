#pragma once

#include "model/liouvillian.hpp"
#include "model/network.hpp"
#include "model/operators.hpp"

namespace resonet {

struct SteadyStateResult {
    Matrix rho;                    // dim 2^n, trace 1, Hermitian
    double residual = 0.0;         // ||(L/s) vec(rho)||_2 with s = max |L| (scale-free)
    double uniqueness_gap = 0.0;   // second-smallest singular value of L/s
    double min_eigenvalue = 0.0;   // smallest eigenvalue of rho
};

// Uniqueness certificate threshold: the gap must exceed 1e3 times the
// residual tolerance of the linear solve (1e-12 on the normalized system).
inline constexpr double kSteadyGapThreshold = 1e-9;
inline constexpr double kSteadyResidualLimit = 1e-8;
inline constexpr double kPositivityTolerance = -1e-8;

// Solves the augmented least-squares system [L/s; trace row] vec(rho) = [0; 1],
// symmetrizes, and certifies the result: unique null direction (gap above
// threshold), small residual, and spectrum above the positivity tolerance.
// Throws NonUniqueSteadyState / UnphysicalState / NoConvergence.
SteadyStateResult solve_steady(const LiouvillianMatrix& liouvillian);

// Same linear solve without the certificates (no SVD gap, no spectrum check).
// Used in optimizer inner loops where millions of solves run on scenarios
// whose uniqueness was established by the certified path; any degeneracy
// still surfaces through the residual, which is always checked.
SteadyStateResult solve_steady_fast(const LiouvillianMatrix& liouvillian);

// Convenience wrapper: build operators and the Liouvillian for a topology and
// run the certified solve.
SteadyStateResult steady_state_of(const Topology& topology);

// Independent cross-check for solve_steady: fixed-step 4th-order integration
// of apply_master_rhs from rho0 until ||rhs||_F < 1e-10 or t_max. The step
// must resolve the fastest scale: dt * max(max |H_eff|, max D_i) < 0.05.
// Trace drift is renormalized each step and must stay below 1e-9 per step.
Matrix evolve_to_steady(const Topology& topology, const Matrix& rho0, double dt, double t_max);

}  // namespace resonet
