#include "solve/steady.hpp"

#include <cmath>

namespace resonet {

namespace {

SteadyStateResult solve_impl(const LiouvillianMatrix& liouvillian, bool certify) {
    const Matrix& l = liouvillian.matrix;
    require(l.rows() == l.cols() && l.rows() == liouvillian.dim, ErrorCode::Dimension,
            "solve_steady: malformed Liouvillian");
    const std::size_t dim2 = l.rows();
    const auto dim = static_cast<std::size_t>(std::llround(std::sqrt(double(dim2))));
    require(dim * dim == dim2, ErrorCode::Dimension, "solve_steady: dimension is not a square");

    double s = l.max_abs();
    if (s == 0.0) s = 1.0;
    const cplx inv_s(1.0 / s, 0.0);

    // Augmented system: the scaled Liouvillian stacked with the trace row.
    Matrix a(dim2 + 1, dim2);
    for (std::size_t r = 0; r < dim2; ++r)
        for (std::size_t c = 0; c < dim2; ++c) a(r, c) = l(r, c) * inv_s;
    for (std::size_t i = 0; i < dim; ++i) a(dim2, i * dim + i) = 1.0;

    std::vector<cplx> b(dim2 + 1, cplx(0.0, 0.0));
    b[dim2] = 1.0;

    auto ls = solve_linear_least_squares(a, b);

    Matrix rho = unvec_columns(ls.x, dim, dim);
    rho = cplx(0.5, 0.0) * (rho + rho.adjoint());
    const double tr = rho.trace().real();
    require(std::isfinite(tr) && std::abs(tr) > 1e-6, ErrorCode::NonUniqueSteadyState,
            "solve_steady: trace collapsed, no normalizable steady state found");
    rho *= cplx(1.0 / tr, 0.0);

    SteadyStateResult result;
    result.residual = 0.0;
    {
        std::vector<cplx> r = matvec(l, vec_columns(rho));
        double acc = 0.0;
        for (const cplx& v : r) acc += std::norm(v);
        result.residual = std::sqrt(acc) / s;
    }
    require(std::isfinite(result.residual) && result.residual < kSteadyResidualLimit,
            ErrorCode::NonUniqueSteadyState,
            "solve_steady: residual too large, steady state not resolved");

    if (certify) {
        Matrix ls_scaled(dim2, dim2);
        for (std::size_t r = 0; r < dim2; ++r)
            for (std::size_t c = 0; c < dim2; ++c) ls_scaled(r, c) = l(r, c) * inv_s;
        SingularPair pair = smallest_singular_pair(ls_scaled);
        result.uniqueness_gap = pair.second_smallest;
        require(result.uniqueness_gap >= kSteadyGapThreshold, ErrorCode::NonUniqueSteadyState,
                "solve_steady: steady-state manifold is degenerate (uniqueness gap below "
                "threshold)");

        double min_eig = 0.0;
        bool first = true;
        for (const cplx& ev : eigenvalues_general(rho)) {
            if (first || ev.real() < min_eig) min_eig = ev.real();
            first = false;
        }
        result.min_eigenvalue = min_eig;
        require(result.min_eigenvalue >= kPositivityTolerance, ErrorCode::UnphysicalState,
                "solve_steady: steady state has a significantly negative eigenvalue");
    } else {
        result.uniqueness_gap = 0.0;
        result.min_eigenvalue = 0.0;
    }

    result.rho = std::move(rho);
    return result;
}

}  // namespace

SteadyStateResult solve_steady(const LiouvillianMatrix& liouvillian) {
    return solve_impl(liouvillian, /*certify=*/true);
}

SteadyStateResult solve_steady_fast(const LiouvillianMatrix& liouvillian) {
    return solve_impl(liouvillian, /*certify=*/false);
}

SteadyStateResult steady_state_of(const Topology& topology) {
    SiteOperators ops = build_site_operators(topology.node_count());
    return solve_steady(build_liouvillian(topology, ops));
}

Matrix evolve_to_steady(const Topology& topology, const Matrix& rho0, double dt, double t_max) {
    require(dt > 0.0 && t_max > 0.0, ErrorCode::InvalidArgument,
            "evolve_to_steady: dt and t_max must be positive");
    SiteOperators ops = build_site_operators(topology.node_count());
    require(rho0.rows() == ops.dim && rho0.cols() == ops.dim, ErrorCode::Dimension,
            "evolve_to_steady: initial state dimension mismatch");

    Matrix h = build_h_eff(topology, ops);
    double fastest = h.max_abs();
    for (double d : diagonal_rates(topology)) fastest = std::max(fastest, d);
    require(dt * fastest < 0.05, ErrorCode::InvalidArgument,
            "evolve_to_steady: dt does not resolve the fastest rate (need dt*rate < 0.05)");

    require(std::abs(rho0.trace().real() - 1.0) < 1e-6, ErrorCode::InvalidArgument,
            "evolve_to_steady: initial state must have unit trace");

    Matrix rho = rho0;
    const double half = dt / 2.0;
    const auto steps = static_cast<long long>(std::ceil(t_max / dt));

    // Stationarity threshold normalized by the fastest rate, so the stopping
    // rule is invariant under rescaling all frequencies (Hz vs dimensionless
    // inputs describe the same physics).
    const double stop_norm = 1e-11 * std::max(1.0, fastest);

    for (long long step = 0; step < steps; ++step) {
        Matrix k1 = apply_master_rhs(topology, ops, rho);
        if (k1.frobenius_norm() < stop_norm) return rho;

        Matrix k2 = apply_master_rhs(topology, ops, rho + cplx(half, 0.0) * k1);
        Matrix k3 = apply_master_rhs(topology, ops, rho + cplx(half, 0.0) * k2);
        Matrix k4 = apply_master_rhs(topology, ops, rho + cplx(dt, 0.0) * k3);

        Matrix incr = k1 + cplx(2.0, 0.0) * k2 + cplx(2.0, 0.0) * k3 + k4;
        rho += cplx(dt / 6.0, 0.0) * incr;

        const double tr = rho.trace().real();
        require(std::isfinite(tr) && std::abs(tr - 1.0) < 1e-9, ErrorCode::Internal,
                "evolve_to_steady: trace drift exceeded 1e-9 in a single step");
        rho *= cplx(1.0 / tr, 0.0);
    }

    fail(ErrorCode::NoConvergence,
         "evolve_to_steady: no steady state reached within t_max");
}

}  // namespace resonet
