#include "model/liouvillian.hpp"

namespace resonet {

namespace {

void require_effective(const Topology& topology, const SiteOperators& ops, const char* who) {
    require(topology.mode == TopologyMode::Effective, ErrorCode::InvalidArgument,
            std::string(who) + ": requires an effective-mode topology");
    require(topology.node_count() == ops.n, ErrorCode::Dimension,
            std::string(who) + ": operator set built for a different node count");
}

}  // namespace

Matrix build_h_eff(const Topology& topology, const SiteOperators& ops) {
    require_effective(topology, ops, "build_h_eff");

    Matrix h(ops.dim, ops.dim);
    for (const EffectiveLink& link : topology.links) {
        if (link.endpoints.size() == 2) {
            const auto j = static_cast<std::size_t>(link.endpoints[0]);
            const auto k = static_cast<std::size_t>(link.endpoints[1]);
            h += (link.Gamma * link.y) * (ops.P[j].adjoint() * ops.P[k]);
            h += (link.Gamma * link.x) * (ops.P[j].adjoint() + ops.P[k].adjoint());
        } else {
            const auto j = static_cast<std::size_t>(link.endpoints[0]);
            h += (link.Gamma * link.x) * ops.P[j].adjoint();
        }
    }
    h += h.adjoint();
    // Detuning terms are Hermitian on their own, so they are added after the
    // h.c. completion of the link terms.
    if (!topology.detunings.empty())
        for (std::size_t i = 0; i < topology.detunings.size(); ++i)
            h += cplx(topology.detunings[i], 0.0) * ops.number[i];
    return h;
}

std::vector<double> diagonal_rates(const Topology& topology) {
    require(topology.mode == TopologyMode::Effective, ErrorCode::InvalidArgument,
            "diagonal_rates: requires an effective-mode topology");
    std::vector<double> d(topology.nodes.size());
    for (std::size_t i = 0; i < topology.nodes.size(); ++i) d[i] = topology.nodes[i].gamma;
    for (const EffectiveLink& link : topology.links)
        for (int e : link.endpoints) d[static_cast<std::size_t>(e)] += link.Gamma;
    return d;
}

Matrix apply_master_rhs(const Topology& topology, const SiteOperators& ops, const Matrix& rho) {
    require_effective(topology, ops, "apply_master_rhs");
    require(rho.rows() == ops.dim && rho.cols() == ops.dim, ErrorCode::Dimension,
            "apply_master_rhs: state dimension mismatch");

    const cplx minus_i(0.0, -1.0);
    Matrix h = build_h_eff(topology, ops);
    Matrix out = minus_i * (h * rho - rho * h);

    auto add_f_term = [&](std::size_t j, std::size_t k, double coeff) {
        // coeff * F_{j,k}(rho) = coeff * (2 P_j rho P_k^dag - P_j^dag P_k rho - rho P_j^dag P_k)
        Matrix pjk = ops.P[j].adjoint() * ops.P[k];
        out += cplx(2.0 * coeff, 0.0) * (ops.P[j] * rho * ops.P[k].adjoint());
        out -= cplx(coeff, 0.0) * (pjk * rho);
        out -= cplx(coeff, 0.0) * (rho * pjk);
    };

    const std::vector<double> d = diagonal_rates(topology);
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] != 0.0) add_f_term(i, i, d[i]);

    for (const EffectiveLink& link : topology.links) {
        if (link.endpoints.size() != 2 || link.Gamma == 0.0) continue;
        const auto j = static_cast<std::size_t>(link.endpoints[0]);
        const auto k = static_cast<std::size_t>(link.endpoints[1]);
        add_f_term(j, k, link.Gamma);
        add_f_term(k, j, link.Gamma);
    }
    return out;
}

LiouvillianMatrix build_liouvillian(const Topology& topology, const SiteOperators& ops) {
    require_effective(topology, ops, "build_liouvillian");

    const std::size_t dim = ops.dim * ops.dim;
    const Matrix eye = Matrix::identity(ops.dim);

    Matrix h = build_h_eff(topology, ops);
    const cplx minus_i(0.0, -1.0);
    Matrix l = minus_i * (kron(eye, h) - kron(h.transpose(), eye));

    auto add_f_super = [&](std::size_t j, std::size_t k, double coeff) {
        Matrix pjk = ops.P[j].adjoint() * ops.P[k];
        l += cplx(2.0 * coeff, 0.0) * kron(ops.P[k].conjugate(), ops.P[j]);
        l -= cplx(coeff, 0.0) * kron(eye, pjk);
        l -= cplx(coeff, 0.0) * kron(pjk.transpose(), eye);
    };

    const std::vector<double> d = diagonal_rates(topology);
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] != 0.0) add_f_super(i, i, d[i]);

    for (const EffectiveLink& link : topology.links) {
        if (link.endpoints.size() != 2 || link.Gamma == 0.0) continue;
        const auto j = static_cast<std::size_t>(link.endpoints[0]);
        const auto k = static_cast<std::size_t>(link.endpoints[1]);
        add_f_super(j, k, link.Gamma);
        add_f_super(k, j, link.Gamma);
    }

    LiouvillianMatrix out;
    out.dim = dim;
    out.matrix = std::move(l);
    return out;
}

}  // namespace resonet
