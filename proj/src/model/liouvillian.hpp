#pragma once

#include "model/network.hpp"
#include "model/operators.hpp"

namespace resonet {

// Liouvillian of the effective master equation, as a 4^n x 4^n matrix acting
// on column-stacked density matrices.
struct LiouvillianMatrix {
    std::size_t dim = 0;  // 4^n
    Matrix matrix;
};

// Effective Hamiltonian. For each two-endpoint link l = (j, k):
//   Gamma_l y_l P_j^dag P_k + Gamma_l x_l (P_j^dag + P_k^dag) + h.c.
// For each single-endpoint link l = (j):
//   Gamma_l x_l P_j^dag + h.c.
// Plus the optional per-node detuning term delta_i P_i^dag P_i.
// Exactly Hermitian by construction.
Matrix build_h_eff(const Topology& topology, const SiteOperators& ops);

// Per-node diagonal dissipation coefficient D_i = gamma_i + sum_{l owning i} Gamma_l.
std::vector<double> diagonal_rates(const Topology& topology);

// Right-hand side of the master equation, with F_{j,k}(rho) =
// 2 P_j rho P_k^dag - P_j^dag P_k rho - rho P_j^dag P_k:
//   rhs = -i[H_eff, rho] + sum_i D_i F_{i,i}(rho)
//         + sum_{2-endpoint links l=(j,k)} Gamma_l (F_{j,k}(rho) + F_{k,j}(rho))
Matrix apply_master_rhs(const Topology& topology, const SiteOperators& ops, const Matrix& rho);

// Same generator as a superoperator matrix: L vec(rho) = vec(rhs(rho)) under
// column stacking, where F_{j,k} contributes
//   2 (conj(P_k) kron P_j) - I kron (P_j^dag P_k) - (P_j^dag P_k)^T kron I.
LiouvillianMatrix build_liouvillian(const Topology& topology, const SiteOperators& ops);

}  // namespace resonet
