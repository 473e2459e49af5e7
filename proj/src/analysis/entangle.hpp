#pragma once

#include "model/operators.hpp"
#include "numeric/matrix.hpp"

namespace resonet {

// Reduced state on an ordered pair of sites; the first kept site becomes the
// leading qubit of the output, in the |00>,|01>,|10>,|11> ordering of the
// site-operator convention. Indices are 0-based.
Matrix partial_trace_pair(const Matrix& rho, int n, int keep_first, int keep_second);

// Reduced single-site state (2x2).
Matrix partial_trace_single(const Matrix& rho, int n, int keep);

// Two-qubit concurrence: with s = sigma_y kron sigma_y, sigma_y = [[0,-i],[i,0]],
// and the spin-flipped state rho~ = s * conj(rho) * s (entrywise conjugate,
// not adjoint), the values lambda_i are the decreasingly-ordered nonnegative
// square roots of the moduli of the eigenvalues of rho * rho~; moduli below
// 1e-14 are clamped to zero. Returns max(0, l1 - l2 - l3 - l4).
double concurrence(const Matrix& rho4);

// <n_i n_j> / (<n_i><n_j>) in the given state. Throws DegenerateDenominator
// if either population is at or below 1e-12.
double cross_correlation(const Matrix& rho, const SiteOperators& ops, int i, int j);

struct FactorizationDiagnostic {
    double purity = 0.0;           // tr(rho_1^2) of the reduced single-site state
    double ground_fidelity = 0.0;  // <0| rho_1 |0>
};

// How close the remaining site of a three-node network is to a pure ground
// state (three nodes only; 'third' is the 0-based site that is kept).
FactorizationDiagnostic factorization_diagnostic(const Matrix& rho, int n, int third);

}  // namespace resonet
