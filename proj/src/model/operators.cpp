#include "model/operators.hpp"

#include "common/error.hpp"

namespace resonet {

SiteOperators build_site_operators(int n) {
    require(n >= 1 && n <= 5, ErrorCode::InvalidArgument,
            "build_site_operators: node count must be between 1 and 5");

    SiteOperators ops;
    ops.n = n;
    ops.dim = std::size_t{1} << n;

    Matrix lower(2, 2);
    lower(0, 1) = 1.0;  // maps |1> to |0>

    for (int i = 0; i < n; ++i) {
        Matrix p = Matrix::identity(1);
        for (int slot = 0; slot < n; ++slot)
            p = kron(p, slot == i ? lower : Matrix::identity(2));
        ops.number.push_back(p.adjoint() * p);
        ops.P.push_back(std::move(p));
    }
    return ops;
}

}  // namespace resonet
