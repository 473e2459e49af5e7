#pragma once

#include <vector>

#include "numeric/matrix.hpp"

namespace resonet {

// Lowering operators for n two-level sites on the 2^n product space.
//
// Basis convention (used everywhere, including partial traces): node 1 is the
// leftmost tensor slot, i.e. the most significant bit of the basis index.
// Basis state |b_1 b_2 ... b_n> has index sum_i b_i 2^(n-i), so for n=2 the
// ordering is |00>, |01>, |10>, |11>.
struct SiteOperators {
    int n = 0;
    std::size_t dim = 0;
    std::vector<Matrix> P;       // P[i] lowers site i (0-based)
    std::vector<Matrix> number;  // number[i] = P[i]^dagger P[i]
};

SiteOperators build_site_operators(int n);

}  // namespace resonet
