#include "fullmodel/fullmodel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "analysis/entangle.hpp"
#include "common/error.hpp"
#include "model/liouvillian.hpp"
#include "model/operators.hpp"
#include "solve/steady.hpp"

namespace resonet {

namespace {

bool finite(double v) { return std::isfinite(v); }

// Matrix acting on one tensor slot, identity elsewhere. slot_dims lists the
// local dimension of every slot in order.
Matrix embed(const Matrix& op, std::size_t slot, const std::vector<std::size_t>& slot_dims) {
    Matrix out = Matrix::identity(1);
    for (std::size_t s = 0; s < slot_dims.size(); ++s) {
        if (s == slot) {
            out = kron(out, op);
        } else {
            out = kron(out, Matrix::identity(slot_dims[s]));
        }
    }
    return out;
}

double infinity_norm(const Matrix& m) {
    double best = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < m.cols(); ++c) row += std::abs(m(r, c));
        best = std::max(best, row);
    }
    return best;
}

struct TimeGrid {
    double dt = 0.0;
    double t_max = 0.0;
};

TimeGrid resolve_time_grid(const FullGenerator& generator, const FullModelConfig& config) {
    require(generator.fastest > 0.0, ErrorCode::InvalidArgument,
            "full model: generator has no dynamics (all rates and couplings are zero)");
    TimeGrid grid;
    if (config.dt == 0.0) {
        grid.dt = 0.5 / generator.fastest;
    } else {
        require(finite(config.dt) && config.dt > 0.0 &&
                    config.dt * generator.fastest <= 0.5 * (1.0 + 1e-12),
                ErrorCode::InvalidArgument,
                "full model: dt must be positive and satisfy dt * fastest_rate <= 0.5");
        grid.dt = config.dt;
    }
    if (config.t_max == 0.0) {
        require(generator.slowest > 0.0, ErrorCode::InvalidArgument,
                "full model: no dissipation present, t_max cannot be chosen automatically");
        grid.t_max = 60.0 / generator.slowest;
    } else {
        require(finite(config.t_max) && config.t_max > 0.0, ErrorCode::InvalidArgument,
                "full model: t_max must be positive");
        grid.t_max = config.t_max;
    }
    require(grid.t_max >= grid.dt, ErrorCode::InvalidArgument,
            "full model: t_max is smaller than one integration step");
    return grid;
}

enum class StopRule { ResidualNorm, StateNorm };

struct IntegrateOutcome {
    double residual = 0.0;
    double elapsed = 0.0;
    std::size_t steps = 0;
    bool converged = false;
};

// Classic fixed-step RK4 on rho in place. StopRule::ResidualNorm halts when
// ||rhs(rho)||_F drops below the threshold (steady-state search on a density
// matrix, trace renormalized each step); StopRule::StateNorm halts when
// ||rho||_F itself drops below the threshold (decay of a traceless
// difference, no renormalization).
IntegrateOutcome rk4_integrate(const FullGenerator& generator, Matrix& rho, const TimeGrid& grid,
                               StopRule rule, double threshold, bool renormalize_trace) {
    IntegrateOutcome out;
    const double dt = grid.dt;
    const auto max_steps =
        static_cast<std::size_t>(std::ceil(grid.t_max / dt - 1e-9));

    for (std::size_t step = 0; step <= max_steps; ++step) {
        if (rule == StopRule::StateNorm) {
            out.residual = rho.frobenius_norm();
            if (out.residual < threshold) {
                out.converged = true;
                break;
            }
        }
        Matrix k1 = apply_full_rhs(generator, rho);
        if (rule == StopRule::ResidualNorm) {
            out.residual = k1.frobenius_norm();
            if (out.residual < threshold) {
                out.converged = true;
                break;
            }
        }
        if (step == max_steps) break;  // horizon reached without convergence

        Matrix stage = rho;
        stage += cplx(0.5 * dt, 0.0) * k1;
        Matrix k2 = apply_full_rhs(generator, stage);
        stage = rho;
        stage += cplx(0.5 * dt, 0.0) * k2;
        Matrix k3 = apply_full_rhs(generator, stage);
        stage = rho;
        stage += cplx(dt, 0.0) * k3;
        Matrix k4 = apply_full_rhs(generator, stage);

        rho += cplx(dt / 6.0, 0.0) * k1;
        k2 += k3;
        rho += cplx(dt / 3.0, 0.0) * k2;
        rho += cplx(dt / 6.0, 0.0) * k4;
        ++out.steps;

        if (renormalize_trace) {
            const double tr = rho.trace().real();
            require(std::abs(tr - 1.0) < 1e-9, ErrorCode::Internal,
                    "full model: trace drifted by more than 1e-9 in one step");
            rho *= cplx(1.0 / tr, 0.0);
        }
        if ((out.steps & 255u) == 0u) {
            require(rho.is_finite(), ErrorCode::Internal, "full model: integration diverged");
            Matrix sym = rho.adjoint();
            sym += rho;
            sym *= cplx(0.5, 0.0);
            rho = std::move(sym);
        }
    }
    out.elapsed = static_cast<double>(out.steps) * dt;
    require(rho.is_finite(), ErrorCode::Internal, "full model: integration diverged");
    return out;
}

struct ReducedObservables {
    double concurrence = 0.0;
    std::vector<double> populations;
    std::vector<cplx> coherences;  // <P_i^dag P_j> for i < j, row-major pair order
};

ReducedObservables reduced_observables(const Matrix& reduced, const SiteOperators& site, int p1,
                                       int p2) {
    ReducedObservables obs;
    obs.concurrence = concurrence(partial_trace_pair(reduced, site.n, p1, p2));
    for (int i = 0; i < site.n; ++i)
        obs.populations.push_back((reduced * site.number[static_cast<std::size_t>(i)]).trace().real());
    for (int i = 0; i < site.n; ++i)
        for (int j = i + 1; j < site.n; ++j)
            obs.coherences.push_back((reduced * site.P[static_cast<std::size_t>(i)].adjoint() *
                                      site.P[static_cast<std::size_t>(j)])
                                         .trace());
    return obs;
}

ReducedComparison compare_reduced(const ReducedObservables& full, const Matrix& rho_full_reduced,
                                  const Topology& effective, const SiteOperators& site, int p1,
                                  int p2) {
    const SteadyStateResult eff = steady_state_of(effective);
    const ReducedObservables obs = reduced_observables(eff.rho, site, p1, p2);

    ReducedComparison cmp;
    cmp.concurrence_eff = obs.concurrence;
    cmp.concurrence_deviation =
        std::abs(full.concurrence - obs.concurrence) / std::max(full.concurrence, 1e-12);
    for (std::size_t i = 0; i < obs.populations.size(); ++i)
        cmp.max_population_deviation = std::max(
            cmp.max_population_deviation, std::abs(full.populations[i] - obs.populations[i]));
    for (std::size_t k = 0; k < obs.coherences.size(); ++k)
        cmp.max_coherence_deviation =
            std::max(cmp.max_coherence_deviation, std::abs(full.coherences[k] - obs.coherences[k]));
    Matrix diff = rho_full_reduced;
    diff -= eff.rho;
    cmp.state_distance = diff.frobenius_norm();
    return cmp;
}

void resolve_pair(int n, int& p1, int& p2) {
    if (p1 < 0 && p2 < 0) {
        if (n == 2) {
            p1 = 0;
            p2 = 1;
        } else if (n == 3) {
            p1 = 1;
            p2 = 2;
        } else {
            fail(ErrorCode::InvalidArgument,
                 "validate: an explicit node pair is required for more than three nodes");
        }
    }
    require(p1 >= 0 && p2 >= 0 && p1 < n && p2 < n && p1 != p2, ErrorCode::InvalidArgument,
            "validate: concurrence pair indices out of range");
}

}  // namespace

FullOperators build_full_operators(const Topology& physical, int n_max) {
    require(physical.mode == TopologyMode::Physical, ErrorCode::InvalidArgument,
            "full model: a physical-mode topology is required");
    validate_topology(physical);
    require(n_max >= 2, ErrorCode::InvalidArgument,
            "full model: the occupation cutoff n_max must be at least 2");

    FullOperators ops;
    ops.n_nodes = physical.node_count();
    ops.n_links = static_cast<int>(physical.physical_links.size());
    require(ops.n_links >= 1, ErrorCode::InvalidArgument,
            "full model: at least one waveguide link is required");
    ops.n_max = n_max;

    std::vector<std::size_t> slot_dims;
    std::size_t dim = 1;
    for (int i = 0; i < ops.n_nodes; ++i) slot_dims.push_back(2);
    for (int l = 0; l < ops.n_links; ++l) slot_dims.push_back(static_cast<std::size_t>(n_max) + 1);
    for (std::size_t d : slot_dims) {
        require(dim <= kFullModelDimCap / d, ErrorCode::Dimension,
                "full model: joint dimension 2^n (n_max+1)^m exceeds the cap of 1024");
        dim *= d;
    }
    ops.dim = dim;

    Matrix lower2(2, 2);
    lower2(0, 1) = 1.0;  // acts on one emitter: |1> -> |0>
    Matrix lower_mode(static_cast<std::size_t>(n_max) + 1, static_cast<std::size_t>(n_max) + 1);
    for (int k = 1; k <= n_max; ++k)
        lower_mode(static_cast<std::size_t>(k) - 1, static_cast<std::size_t>(k)) =
            std::sqrt(static_cast<double>(k));

    for (int i = 0; i < ops.n_nodes; ++i)
        ops.P.push_back(embed(lower2, static_cast<std::size_t>(i), slot_dims));
    for (int l = 0; l < ops.n_links; ++l)
        ops.a.push_back(
            embed(lower_mode, static_cast<std::size_t>(ops.n_nodes + l), slot_dims));
    return ops;
}

Matrix build_full_hamiltonian(const Topology& physical, const FullOperators& ops) {
    require(physical.node_count() == ops.n_nodes &&
                static_cast<int>(physical.physical_links.size()) == ops.n_links,
            ErrorCode::Dimension, "full model: operators do not match the topology");
    Matrix h(ops.dim, ops.dim);
    for (int l = 0; l < ops.n_links; ++l) {
        const PhysicalLink& link = physical.physical_links[static_cast<std::size_t>(l)];
        const Matrix& a = ops.a[static_cast<std::size_t>(l)];
        const Matrix a_dag = a.adjoint();
        const double detuned = link.omega_c - physical.omega_d;
        if (detuned != 0.0) h += cplx(detuned, 0.0) * (a_dag * a);
        if (link.J != 0.0) {
            Matrix sum_p(ops.dim, ops.dim);
            for (int e : link.endpoints) sum_p += ops.P[static_cast<std::size_t>(e)];
            Matrix hop = a_dag * sum_p;
            h += cplx(link.J, 0.0) * hop;
            h += cplx(link.J, 0.0) * hop.adjoint();
        }
        if (link.alpha != 0.0) {
            const cplx amp = link.alpha * std::exp(cplx(0.0, link.phi));
            h += amp * a_dag;
            h += std::conj(amp) * a;
        }
    }
    for (int i = 0; i < ops.n_nodes; ++i) {
        const double detuned = physical.nodes[static_cast<std::size_t>(i)].omega_p - physical.omega_d;
        if (detuned != 0.0) {
            const Matrix& p = ops.P[static_cast<std::size_t>(i)];
            h += cplx(detuned, 0.0) * (p.adjoint() * p);
        }
    }
    return h;
}

FullGenerator build_full_generator(const Topology& physical, const FullOperators& ops) {
    FullGenerator gen;
    gen.H = build_full_hamiltonian(physical, ops);

    double dissipator_scale = 0.0;
    for (int l = 0; l < ops.n_links; ++l) {
        const PhysicalLink& link = physical.physical_links[static_cast<std::size_t>(l)];
        gen.jump.push_back(ops.a[static_cast<std::size_t>(l)]);
        gen.rate.push_back(link.kappa);
        dissipator_scale += 2.0 * link.kappa * static_cast<double>(ops.n_max);
    }
    gen.n_waveguide_jumps = ops.n_links;
    for (int i = 0; i < ops.n_nodes; ++i) {
        const double gamma = physical.nodes[static_cast<std::size_t>(i)].gamma;
        if (gamma > 0.0) {
            gen.jump.push_back(ops.P[static_cast<std::size_t>(i)]);
            gen.rate.push_back(gamma);
            dissipator_scale += 2.0 * gamma;
        }
    }
    for (const Matrix& j : gen.jump) {
        gen.jump_dag.push_back(j.adjoint());
        gen.jump_number.push_back(j.adjoint() * j);
    }

    gen.fastest = std::max(2.0 * infinity_norm(gen.H), dissipator_scale);

    double slowest = std::numeric_limits<double>::infinity();
    for (const NodeParams& node : physical.nodes)
        if (node.gamma > 0.0) slowest = std::min(slowest, node.gamma);
    const Topology derived = derive_effective(physical);
    for (const EffectiveLink& link : derived.links)
        if (link.Gamma > 0.0) slowest = std::min(slowest, link.Gamma);
    gen.slowest = std::isfinite(slowest) ? slowest : 0.0;
    return gen;
}

Matrix apply_full_rhs(const FullGenerator& generator, const Matrix& rho) {
    Matrix rhs = generator.H * rho;
    rhs -= rho * generator.H;
    rhs *= cplx(0.0, -1.0);
    for (std::size_t c = 0; c < generator.jump.size(); ++c) {
        const cplx rate(generator.rate[c], 0.0);
        Matrix gain = generator.jump[c] * rho;
        gain = gain * generator.jump_dag[c];
        rhs += (2.0 * rate) * gain;
        rhs -= rate * (generator.jump_number[c] * rho);
        rhs -= rate * (rho * generator.jump_number[c]);
    }
    return rhs;
}

Matrix full_ground_state(const FullOperators& ops) {
    Matrix rho(ops.dim, ops.dim);
    rho(0, 0) = 1.0;
    return rho;
}

Matrix full_maximally_mixed(const FullOperators& ops) {
    Matrix rho(ops.dim, ops.dim);
    const cplx p(1.0 / static_cast<double>(ops.dim), 0.0);
    for (std::size_t k = 0; k < ops.dim; ++k) rho(k, k) = p;
    return rho;
}

Matrix trace_out_waveguides(const FullOperators& ops, const Matrix& rho_full) {
    require(rho_full.rows() == ops.dim && rho_full.cols() == ops.dim, ErrorCode::Dimension,
            "trace_out_waveguides: state dimension mismatch");
    const std::size_t dq = std::size_t{1} << ops.n_nodes;
    const std::size_t nw = ops.dim / dq;
    Matrix out(dq, dq);
    for (std::size_t q = 0; q < dq; ++q)
        for (std::size_t qq = 0; qq < dq; ++qq) {
            cplx acc(0.0, 0.0);
            for (std::size_t w = 0; w < nw; ++w) acc += rho_full(q * nw + w, qq * nw + w);
            out(q, qq) = acc;
        }
    return out;
}

FullEvolutionResult evolve_full(const Topology& physical, const FullOperators& ops,
                                const FullModelConfig& config, const Matrix& rho0) {
    require(rho0.rows() == ops.dim && rho0.cols() == ops.dim, ErrorCode::Dimension,
            "evolve_full: initial state dimension mismatch");
    const double tr = rho0.trace().real();
    require(std::abs(tr - 1.0) < 1e-9, ErrorCode::InvalidArgument,
            "evolve_full: initial state must have unit trace");

    const FullGenerator generator = build_full_generator(physical, ops);
    const TimeGrid grid = resolve_time_grid(generator, config);
    const double threshold = 1e-9 * std::max(1.0, generator.fastest);

    FullEvolutionResult result;
    result.rho = rho0;
    const IntegrateOutcome outcome = rk4_integrate(generator, result.rho, grid,
                                                   StopRule::ResidualNorm, threshold,
                                                   /*renormalize_trace=*/true);
    Matrix sym = result.rho.adjoint();
    sym += result.rho;
    sym *= cplx(0.5, 0.0);
    result.rho = std::move(sym);
    result.residual = outcome.residual;
    result.elapsed = outcome.elapsed;
    result.steps = outcome.steps;
    result.converged = outcome.converged;
    return result;
}

Matrix solve_full_steady_direct(const Topology& physical, const FullOperators& ops) {
    require(ops.dim <= kFullDirectSolveCap, ErrorCode::Dimension,
            "solve_full_steady_direct: dimension exceeds the direct-solve cap");
    const FullGenerator gen = build_full_generator(physical, ops);
    const std::size_t d = ops.dim;
    const Matrix id = Matrix::identity(d);

    Matrix superop = kron(id, gen.H);
    superop -= kron(gen.H.transpose(), id);
    superop *= cplx(0.0, -1.0);
    for (std::size_t c = 0; c < gen.jump.size(); ++c) {
        const cplx rate(gen.rate[c], 0.0);
        superop += (2.0 * rate) * kron(gen.jump[c].conjugate(), gen.jump[c]);
        superop -= rate * kron(id, gen.jump_number[c]);
        superop -= rate * kron(gen.jump_number[c].transpose(), id);
    }

    const double scale = superop.max_abs();
    require(scale > 0.0, ErrorCode::InvalidArgument,
            "solve_full_steady_direct: generator is identically zero");
    Matrix augmented(d * d + 1, d * d);
    for (std::size_t r = 0; r < d * d; ++r)
        for (std::size_t c = 0; c < d * d; ++c) augmented(r, c) = superop(r, c) / scale;
    for (std::size_t k = 0; k < d; ++k) augmented(d * d, k * d + k) = 1.0;
    std::vector<cplx> b(d * d + 1, cplx(0.0, 0.0));
    b[d * d] = 1.0;

    const LeastSquaresResult ls = solve_linear_least_squares(augmented, b);
    require(!ls.rank_deficient, ErrorCode::NonUniqueSteadyState,
            "solve_full_steady_direct: the steady state is not unique");

    Matrix rho = unvec_columns(ls.x, d, d);
    Matrix sym = rho.adjoint();
    sym += rho;
    sym *= cplx(0.5, 0.0);
    rho = std::move(sym);
    const double tr = rho.trace().real();
    require(std::abs(tr) > 1e-12, ErrorCode::NoConvergence,
            "solve_full_steady_direct: solution has vanishing trace");
    rho *= cplx(1.0 / tr, 0.0);

    const std::vector<cplx> residual_vec = matvec(superop, vec_columns(rho));
    double residual = 0.0;
    for (const cplx& v : residual_vec) residual += std::norm(v);
    residual = std::sqrt(residual) / scale;
    require(residual <= kSteadyResidualLimit, ErrorCode::NoConvergence,
            "solve_full_steady_direct: residual above tolerance");

    if (d <= 64) {
        double min_eig = 0.0;
        for (const cplx& ev : eigenvalues_general(rho)) min_eig = std::min(min_eig, ev.real());
        require(min_eig >= kPositivityTolerance, ErrorCode::UnphysicalState,
                "solve_full_steady_direct: negative eigenvalue beyond tolerance");
    }
    return rho;
}

EliminationReport validate_elimination(const Topology& physical, const FullModelConfig& config) {
    require(std::isfinite(config.deviation_limit) && config.deviation_limit > 0.0,
            ErrorCode::InvalidArgument, "validate: deviation limit must be positive");
    const Topology derived = derive_effective(physical);

    EliminationReport report;
    report.n_nodes = physical.node_count();
    report.n_links = static_cast<int>(physical.physical_links.size());
    report.n_max = config.n_max;
    report.deviation_limit = config.deviation_limit;

    int p1 = config.pair_first;
    int p2 = config.pair_second;
    resolve_pair(report.n_nodes, p1, p2);
    report.pair_first = p1;
    report.pair_second = p2;

    // Applicability gate: every waveguide must be fast against every rate
    // the reduced model generates.
    double max_rate = 0.0;
    for (const NodeParams& node : physical.nodes) max_rate = std::max(max_rate, node.gamma);
    for (const EffectiveLink& link : derived.links) {
        max_rate = std::max(max_rate, link.Gamma);
        max_rate = std::max(max_rate, link.Gamma * std::abs(link.x));
        max_rate = std::max(max_rate, link.Gamma * std::abs(link.y));
    }
    require(max_rate > 0.0, ErrorCode::InvalidArgument,
            "validate: the reduced model has no dynamics to compare");
    double min_kappa = std::numeric_limits<double>::infinity();
    for (const PhysicalLink& link : physical.physical_links)
        min_kappa = std::min(min_kappa, link.kappa);
    report.scale_separation = min_kappa / max_rate;
    require(report.scale_separation >= 10.0, ErrorCode::InvalidArgument,
            "validate: scale separation below 10, the waveguides are not fast enough to eliminate");

    // Integrate the joint model to its steady state from the ground state.
    const FullOperators ops = build_full_operators(physical, config.n_max);
    report.dim = ops.dim;
    const FullEvolutionResult ev = evolve_full(physical, ops, config, full_ground_state(ops));
    require(ev.converged, ErrorCode::NoConvergence,
            "validate: the joint model did not reach a steady state within t_max");
    report.residual = ev.residual;

    // Uniqueness: the difference of any two solutions evolves linearly, so a
    // single integration of (ground - mixed) measures how far the two initial
    // conditions remain apart at the end.
    const FullGenerator generator = build_full_generator(physical, ops);
    const TimeGrid grid = resolve_time_grid(generator, config);
    Matrix difference = full_ground_state(ops);
    difference -= full_maximally_mixed(ops);
    rk4_integrate(generator, difference, grid, StopRule::StateNorm, 5e-7,
                  /*renormalize_trace=*/false);
    report.initial_state_agreement = difference.frobenius_norm();
    report.uniqueness_ok = report.initial_state_agreement <= 1e-6;

    // Occupation must stay well under the cutoff.
    for (int l = 0; l < generator.n_waveguide_jumps; ++l) {
        const double occupation =
            (ev.rho * generator.jump_number[static_cast<std::size_t>(l)]).trace().real();
        report.max_photon_number = std::max(report.max_photon_number, occupation);
    }
    report.photon_ok = report.max_photon_number < 0.5 * static_cast<double>(config.n_max);

    // Cross-check the integrated state against the dense linear solve.
    if (ops.dim <= kFullDirectSolveCap) {
        Matrix diff = solve_full_steady_direct(physical, ops);
        diff -= ev.rho;
        report.direct_solve_distance = diff.frobenius_norm();
    }

    // Truncation series: rerun one cutoff higher and require every reduced
    // observable to move by at most 1%.
    const SiteOperators site = build_site_operators(report.n_nodes);
    const Matrix reduced = trace_out_waveguides(ops, ev.rho);
    const ReducedObservables obs = reduced_observables(reduced, site, p1, p2);
    report.concurrence_full = obs.concurrence;
    report.populations_full = obs.populations;

    FullModelConfig next = config;
    next.n_max = config.n_max + 1;
    const FullOperators ops_next = build_full_operators(physical, next.n_max);
    const FullEvolutionResult ev_next =
        evolve_full(physical, ops_next, next, full_ground_state(ops_next));
    require(ev_next.converged, ErrorCode::NoConvergence,
            "validate: the n_max+1 truncation run did not reach a steady state");
    const ReducedObservables obs_next =
        reduced_observables(trace_out_waveguides(ops_next, ev_next.rho), site, p1, p2);
    report.truncation_shift = std::abs(obs_next.concurrence - obs.concurrence) /
                              std::max(obs.concurrence, 1e-12);
    for (std::size_t i = 0; i < obs.populations.size(); ++i)
        report.truncation_shift =
            std::max(report.truncation_shift, std::abs(obs_next.populations[i] - obs.populations[i]) /
                                                  std::max(obs.populations[i], 1e-12));
    report.truncation_ok = report.truncation_shift <= 0.01;

    // Compare against the reduced model, exactly as derived and with the
    // link-induced frequency shifts delta_i = sum_{l at i} Gamma_l y_l put back.
    report.mapped = compare_reduced(obs, reduced, derived, site, p1, p2);
    Topology shifted = derived;
    shifted.detunings.assign(physical.nodes.size(), 0.0);
    for (const EffectiveLink& link : derived.links)
        for (int e : link.endpoints)
            shifted.detunings[static_cast<std::size_t>(e)] += link.Gamma * link.y;
    report.shifted = compare_reduced(obs, reduced, shifted, site, p1, p2);

    report.best_deviation =
        std::min(report.mapped.concurrence_deviation, report.shifted.concurrence_deviation);
    report.deviation_ok = report.best_deviation <= config.deviation_limit;
    report.passed =
        report.uniqueness_ok && report.photon_ok && report.truncation_ok && report.deviation_ok;
    return report;
}

}  // namespace resonet
