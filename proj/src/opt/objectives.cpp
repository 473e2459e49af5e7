#include "opt/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>

#include "analysis/entangle.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "common/threading.hpp"
#include "model/liouvillian.hpp"
#include "model/operators.hpp"
#include "solve/steady.hpp"

namespace resonet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_two_endpoint(const EffectiveLink& link) { return link.endpoints.size() == 2; }

void validate_free_params(const Topology& scenario, const std::vector<FreeParam>& params) {
    require(scenario.mode == TopologyMode::Effective, ErrorCode::InvalidArgument,
            "optimization requires an effective-mode scenario");
    require(!params.empty(), ErrorCode::InvalidArgument, "free parameter list is empty");
    const std::size_t nlinks = scenario.links.size();
    for (const FreeParam& p : params) {
        require(p.link < nlinks, ErrorCode::InvalidArgument, "free parameter link out of range");
        if (p.kind != FreeParamKind::Phase) {
            require(std::isfinite(p.lo) && std::isfinite(p.hi) && p.lo <= p.hi,
                    ErrorCode::InvalidArgument, "free parameter bounds must be finite with lo <= hi");
        }
        switch (p.kind) {
            case FreeParamKind::Amplitude:
            case FreeParamKind::Phase:
                break;
            case FreeParamKind::AmplitudePair:
                require(p.tie_link < nlinks && p.tie_link != p.link, ErrorCode::InvalidArgument,
                        "amplitude pair needs two distinct links");
                require(std::isfinite(p.tie_factor) && p.tie_factor != 0.0,
                        ErrorCode::InvalidArgument, "amplitude pair factor must be finite and nonzero");
                break;
            case FreeParamKind::YLink:
                require(is_two_endpoint(scenario.links[p.link]), ErrorCode::InvalidArgument,
                        "y is only defined on two-endpoint links");
                break;
            case FreeParamKind::YCommon: {
                bool any = false;
                for (const auto& l : scenario.links) any = any || is_two_endpoint(l);
                require(any, ErrorCode::InvalidArgument,
                        "common y needs at least one two-endpoint link");
                break;
            }
            case FreeParamKind::ZLink:
                require(p.lo >= 1.0, ErrorCode::InvalidArgument, "z bounds must start at or above 1");
                break;
            case FreeParamKind::GammaRatio:
                require(p.ref_link < nlinks, ErrorCode::InvalidArgument,
                        "gamma ratio reference link out of range");
                require(p.lo > 0.0, ErrorCode::InvalidArgument, "gamma ratio must stay positive");
                break;
        }
    }
}

// Certified solve + concurrence, used wherever a single honest value is
// needed (probes, sweep cells, best-point rechecks).
double certified_concurrence(const Topology& topo, const SiteOperators& ops, int a, int b) {
    LiouvillianMatrix liouvillian = build_liouvillian(topo, ops);
    SteadyStateResult ss = solve_steady(liouvillian);
    return concurrence(partial_trace_pair(ss.rho, ops.n, a, b));
}

std::string link_label(std::size_t link) { return std::to_string(link + 1); }

double clamp_interval(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Encoding of the base scenario's own parameter values, used as the first
// restart's start point. Scenarios ship at physically sensible operating
// points, so this warm start anchors the multistart search in the basin the
// scenario designer intended while the remaining restarts explore the box.
std::vector<double> warm_start_encoding(const Topology& base, const std::vector<FreeParam>& params) {
    std::vector<double> x;
    x.reserve(encoded_dimension(params));
    for (const FreeParam& p : params) {
        switch (p.kind) {
            case FreeParamKind::Amplitude:
            case FreeParamKind::AmplitudePair:
                x.push_back(clamp_interval(std::abs(base.links[p.link].x), p.lo, p.hi));
                break;
            case FreeParamKind::Phase: {
                cplx v = base.links[p.link].x;
                if (std::abs(v) == 0.0) {
                    x.push_back(1.0);
                    x.push_back(0.0);
                } else {
                    double a = std::arg(v);
                    x.push_back(std::cos(a));
                    x.push_back(std::sin(a));
                }
                break;
            }
            case FreeParamKind::YLink:
                x.push_back(clamp_interval(base.links[p.link].y, p.lo, p.hi));
                break;
            case FreeParamKind::YCommon: {
                double y = 0.0;
                for (const auto& l : base.links) {
                    if (is_two_endpoint(l)) {
                        y = l.y;
                        break;
                    }
                }
                x.push_back(clamp_interval(y, p.lo, p.hi));
                break;
            }
            case FreeParamKind::ZLink:
                x.push_back(clamp_interval(link_z(base, p.link), p.lo, p.hi));
                break;
            case FreeParamKind::GammaRatio:
                x.push_back(clamp_interval(base.links[p.link].Gamma / base.links[p.ref_link].Gamma,
                                           p.lo, p.hi));
                break;
        }
    }
    return x;
}

}  // namespace

std::pair<int, int> default_pair(int node_count) {
    if (node_count == 2) return {0, 1};
    if (node_count == 3) return {1, 2};
    fail(ErrorCode::InvalidArgument,
         "no default concurrence pair for " + std::to_string(node_count) +
             " nodes; pass the pair explicitly");
}

std::string free_param_label(const FreeParam& param) {
    switch (param.kind) {
        case FreeParamKind::Amplitude: return "abs_x_" + link_label(param.link);
        case FreeParamKind::AmplitudePair:
            return "abs_x_" + link_label(param.link) + "_" + link_label(param.tie_link);
        case FreeParamKind::Phase: return "arg_x_" + link_label(param.link);
        case FreeParamKind::YLink: return "y_" + link_label(param.link);
        case FreeParamKind::YCommon: return "y_common";
        case FreeParamKind::ZLink: return "z_" + link_label(param.link);
        case FreeParamKind::GammaRatio:
            return "gamma_ratio_" + link_label(param.link) + "_" + link_label(param.ref_link);
    }
    fail(ErrorCode::Internal, "unknown free parameter kind");
}

std::size_t encoded_dimension(const std::vector<FreeParam>& params) {
    std::size_t dim = 0;
    for (const FreeParam& p : params) dim += (p.kind == FreeParamKind::Phase) ? 2 : 1;
    return dim;
}

Topology apply_free_parameters(const Topology& base, const std::vector<FreeParam>& params,
                               const std::vector<double>& x) {
    require(x.size() == encoded_dimension(params), ErrorCode::InvalidArgument,
            "encoded parameter vector has the wrong dimension");
    Topology topo = base;

    // Drive overrides are collected first and resolved per link afterwards so
    // that a modulus parameter and a phase parameter can target the same link.
    struct DriveOverride {
        bool has_modulus = false;
        double modulus = 0.0;
        double sign = 1.0;
        bool modulus_resets_phase = false;  // pair overrides replace the base phase
        bool has_phase = false;
        double phase = 0.0;
    };
    std::vector<DriveOverride> drive(topo.links.size());

    std::size_t xi = 0;
    for (const FreeParam& p : params) {
        switch (p.kind) {
            case FreeParamKind::Amplitude: {
                double m = x[xi++];
                drive[p.link].has_modulus = true;
                drive[p.link].modulus = m;
                break;
            }
            case FreeParamKind::AmplitudePair: {
                double m = x[xi++];
                drive[p.link].has_modulus = true;
                drive[p.link].modulus = m;
                drive[p.link].sign = 1.0;
                drive[p.link].modulus_resets_phase = true;
                drive[p.tie_link].has_modulus = true;
                drive[p.tie_link].modulus = std::abs(p.tie_factor) * m;
                drive[p.tie_link].sign = p.tie_factor < 0.0 ? -1.0 : 1.0;
                drive[p.tie_link].modulus_resets_phase = true;
                break;
            }
            case FreeParamKind::Phase: {
                double c = x[xi++];
                double s = x[xi++];
                drive[p.link].has_phase = true;
                drive[p.link].phase = (c == 0.0 && s == 0.0) ? 0.0 : std::atan2(s, c);
                break;
            }
            case FreeParamKind::YLink:
                topo.links[p.link].y = x[xi++];
                break;
            case FreeParamKind::YCommon: {
                double v = x[xi++];
                for (auto& l : topo.links) {
                    if (is_two_endpoint(l)) l.y = v;
                }
                break;
            }
            case FreeParamKind::ZLink:
                topo = set_z(topo, p.link, x[xi++]);
                break;
            case FreeParamKind::GammaRatio:
                topo.links[p.link].Gamma = x[xi++] * base.links[p.ref_link].Gamma;
                break;
        }
    }

    for (std::size_t l = 0; l < topo.links.size(); ++l) {
        const DriveOverride& d = drive[l];
        if (!d.has_modulus && !d.has_phase) continue;
        double modulus = d.has_modulus ? d.modulus : std::abs(topo.links[l].x);
        double phase;
        if (d.has_phase) {
            phase = d.phase;
        } else if (d.modulus_resets_phase) {
            phase = 0.0;
        } else {
            phase = std::arg(topo.links[l].x);
        }
        topo.links[l].x = d.sign * std::polar(modulus, phase);
    }

    validate_topology(topo);
    return topo;
}

OptimizeOutcome maximize_concurrence(const OptimizeSpecData& spec) {
    require(spec.restarts >= 1, ErrorCode::InvalidArgument, "restarts must be at least 1");
    validate_topology(spec.scenario);
    validate_free_params(spec.scenario, spec.free_params);

    const int n = spec.scenario.node_count();
    int pair_a = spec.pair_first;
    int pair_b = spec.pair_second;
    if (pair_a < 0 || pair_b < 0) std::tie(pair_a, pair_b) = default_pair(n);
    require(pair_a != pair_b && pair_a >= 0 && pair_b >= 0 && pair_a < n && pair_b < n,
            ErrorCode::InvalidArgument, "concurrence pair must name two distinct nodes");

    const SiteOperators ops = build_site_operators(n);
    const std::size_t dim = encoded_dimension(spec.free_params);
    const std::size_t restarts = static_cast<std::size_t>(spec.restarts);

    std::vector<double> restart_best(restarts, 0.0);
    std::vector<std::vector<double>> restart_x(restarts);
    std::vector<std::size_t> restart_evals(restarts, 0);
    std::vector<std::size_t> restart_fails(restarts, 0);

    const std::vector<double> warm = warm_start_encoding(spec.scenario, spec.free_params);

    auto run_restart = [&](std::size_t r) {
        SplitMix64 rng(mix_seed(spec.seed, r));
        std::vector<double> x0, step, lower, upper;
        x0.reserve(dim);
        step.reserve(dim);
        lower.reserve(dim);
        upper.reserve(dim);
        for (const FreeParam& p : spec.free_params) {
            if (p.kind == FreeParamKind::Phase) {
                double angle = rng.next_double() * kTwoPi;
                x0.push_back(std::cos(angle));
                x0.push_back(std::sin(angle));
                // Radius is irrelevant (atan2 reads only the direction), so the
                // embedding box just keeps the simplex from drifting far out.
                for (int k = 0; k < 2; ++k) {
                    step.push_back(0.6);
                    lower.push_back(-1.2);
                    upper.push_back(1.2);
                }
            } else {
                double u = rng.next_double();
                // Drive amplitudes get a quadratic low bias: concurrence optima
                // sit at moderate drive, and strong drive is a wide zero
                // plateau where a simplex cannot orient itself.
                if (p.kind == FreeParamKind::Amplitude || p.kind == FreeParamKind::AmplitudePair) {
                    u *= u;
                }
                x0.push_back(p.lo + u * (p.hi - p.lo));
                double s = 0.25 * (p.hi - p.lo);
                if (s == 0.0) s = 0.1 * std::max(1.0, std::abs(p.lo));
                step.push_back(s);
                lower.push_back(p.lo);
                upper.push_back(p.hi);
            }
        }
        // First restart starts from the scenario's own operating point.
        if (r == 0) x0 = warm;

        std::size_t fails = 0;
        auto objective = [&](const std::vector<double>& xv) -> double {
            try {
                Topology topo = apply_free_parameters(spec.scenario, spec.free_params, xv);
                LiouvillianMatrix liouvillian = build_liouvillian(topo, ops);
                SteadyStateResult ss = solve_steady_fast(liouvillian);
                return -concurrence(partial_trace_pair(ss.rho, ops.n, pair_a, pair_b));
            } catch (const Error&) {
                ++fails;
                return 0.0;
            }
        };

        NelderMeadResult nm = nelder_mead_minimize(objective, x0, step, lower, upper, spec.nm);
        restart_best[r] = -nm.value;
        restart_x[r] = std::move(nm.x);
        restart_evals[r] = nm.evaluations;
        restart_fails[r] = fails;
    };

    if (spec.parallel_restarts) {
        parallel_for(restarts, run_restart);
    } else {
        for (std::size_t r = 0; r < restarts; ++r) run_restart(r);
    }

    std::size_t best_r = 0;
    for (std::size_t r = 1; r < restarts; ++r) {
        if (restart_best[r] > restart_best[best_r]) best_r = r;
    }

    OptimizeOutcome outcome;
    outcome.best_restart = static_cast<int>(best_r);
    outcome.restart_values = restart_best;
    for (std::size_t r = 0; r < restarts; ++r) {
        outcome.evaluations += restart_evals[r];
        outcome.failed_points += restart_fails[r];
    }

    // Decode the winning point back to domain values.
    const std::vector<double>& xbest = restart_x[best_r];
    std::size_t xi = 0;
    for (const FreeParam& p : spec.free_params) {
        if (p.kind == FreeParamKind::Phase) {
            double c = xbest[xi++];
            double s = xbest[xi++];
            double angle = (c == 0.0 && s == 0.0) ? 0.0 : std::atan2(s, c);
            if (angle < 0.0) angle += kTwoPi;
            outcome.best_params.push_back(angle);
        } else {
            outcome.best_params.push_back(xbest[xi++]);
        }
    }

    // The winner is re-solved on the certified path so the reported value
    // carries the uniqueness and positivity guarantees (the fast path skips
    // them). Both paths share the linear solve, so the value is unchanged.
    Topology best_topo = apply_free_parameters(spec.scenario, spec.free_params, xbest);
    outcome.best_value = certified_concurrence(best_topo, ops, pair_a, pair_b);
    return outcome;
}

PhaseSweepResult phase_sweep(const Topology& scenario, double mag_a, double mag_b,
                             std::size_t grid, int pair_first, int pair_second) {
    validate_topology(scenario);
    require(scenario.mode == TopologyMode::Effective, ErrorCode::InvalidArgument,
            "phase sweep requires an effective-mode scenario");
    require(scenario.links.size() >= 3, ErrorCode::InvalidArgument,
            "phase sweep drives the first and third link; scenario has fewer links");
    require(grid >= 2, ErrorCode::InvalidArgument, "phase sweep grid must be at least 2");
    require(std::isfinite(mag_a) && std::isfinite(mag_b) && mag_a >= 0.0 && mag_b >= 0.0,
            ErrorCode::InvalidArgument, "phase sweep drive moduli must be finite and nonnegative");

    const int n = scenario.node_count();
    int pair_a = pair_first;
    int pair_b = pair_second;
    if (pair_a < 0 || pair_b < 0) std::tie(pair_a, pair_b) = default_pair(n);
    require(pair_a != pair_b && pair_a >= 0 && pair_b >= 0 && pair_a < n && pair_b < n,
            ErrorCode::InvalidArgument, "concurrence pair must name two distinct nodes");

    const SiteOperators ops = build_site_operators(n);

    PhaseSweepResult result;
    result.grid = grid;
    result.cells.resize(grid * grid);
    std::vector<std::size_t> failed(grid * grid, 0);

    parallel_for(grid * grid, [&](std::size_t idx) {
        std::size_t ka = idx / grid;
        std::size_t kb = idx % grid;
        PhaseSweepCell& cell = result.cells[idx];
        cell.phi_a = kTwoPi * static_cast<double>(ka) / static_cast<double>(grid);
        cell.phi_b = kTwoPi * static_cast<double>(kb) / static_cast<double>(grid);
        Topology topo = scenario;
        topo.links[0].x = std::polar(mag_a, cell.phi_a);
        topo.links[2].x = std::polar(mag_b, cell.phi_b);
        try {
            LiouvillianMatrix liouvillian = build_liouvillian(topo, ops);
            SteadyStateResult ss = solve_steady(liouvillian);
            cell.concurrence = concurrence(partial_trace_pair(ss.rho, ops.n, pair_a, pair_b));
            cell.status = "ok";
            try {
                cell.cross_correlation = cross_correlation(ss.rho, ops, pair_a, pair_b);
            } catch (const Error& inner) {
                // Concurrence is still valid; only the correlation is undefined.
                cell.cross_correlation = kNaN;
                cell.status = error_code_label(inner.code());
            }
        } catch (const Error& e) {
            cell.concurrence = kNaN;
            cell.cross_correlation = kNaN;
            cell.status = error_code_label(e.code());
            failed[idx] = 1;
        }
    });

    for (std::size_t f : failed) result.failed_points += f;
    return result;
}

RatioScanResult ratio_scan(const Topology& scenario, std::size_t theta_count,
                           std::uint64_t seed, int restarts) {
    validate_topology(scenario);
    require(scenario.mode == TopologyMode::Effective, ErrorCode::InvalidArgument,
            "ratio scan requires an effective-mode scenario");
    require(theta_count >= 1, ErrorCode::InvalidArgument, "ratio scan needs at least one angle");
    require(restarts >= 1, ErrorCode::InvalidArgument, "restarts must be at least 1");
    require(scenario.links.size() == 3 && scenario.node_count() == 3, ErrorCode::InvalidArgument,
            "ratio scan is defined on the three-node ring");

    // The scan is defined at the weak-middle-ring operating point; verify it
    // instead of silently scanning a different scenario.
    auto near = [](double a, double b) {
        return std::abs(a - b) <= 1e-6 * std::max({1.0, std::abs(a), std::abs(b)});
    };
    const auto& links = scenario.links;
    require(is_two_endpoint(links[0]) && is_two_endpoint(links[1]) && is_two_endpoint(links[2]),
            ErrorCode::InvalidArgument, "ratio scan expects a ring of two-endpoint links");
    require(near(links[1].Gamma, 1e-3 * links[0].Gamma) && near(links[2].Gamma, links[0].Gamma),
            ErrorCode::InvalidArgument,
            "ratio scan requires the middle link at 1e-3 of the equal outer links");
    require(near(links[0].y, 15.0) && near(links[2].y, 15.0), ErrorCode::InvalidArgument,
            "ratio scan requires y = 15 on the outer links");
    require(near(link_z(scenario, 0), 1.01) && near(link_z(scenario, 2), 1.01) &&
                near(link_z(scenario, 1), 11.0),
            ErrorCode::InvalidArgument, "ratio scan requires z = 1.01 outer, z = 11 middle");

    const SiteOperators ops = build_site_operators(3);
    auto [pair_a, pair_b] = default_pair(3);
    const double r_max = 12.0;

    RatioScanResult result;
    result.points.resize(theta_count);
    std::vector<std::size_t> evals(theta_count, 0);
    std::vector<std::size_t> fails(theta_count, 0);

    parallel_for(theta_count, [&](std::size_t j) {
        RatioScanPoint& point = result.points[j];
        point.theta = kTwoPi * static_cast<double>(j) / static_cast<double>(theta_count);
        const double c = std::cos(point.theta);
        const double s = std::sin(point.theta);

        auto with_magnitude = [&](double r) {
            Topology topo = scenario;
            topo.links[0].x = cplx(r * c, 0.0);
            topo.links[2].x = cplx(r * s, 0.0);
            return topo;
        };

        try {
            // One certified probe per angle; the optimization itself runs on
            // the fast path.
            certified_concurrence(with_magnitude(1.0), ops, pair_a, pair_b);

            std::size_t point_fails = 0;
            auto objective = [&](const std::vector<double>& xv) -> double {
                try {
                    LiouvillianMatrix liouvillian = build_liouvillian(with_magnitude(xv[0]), ops);
                    SteadyStateResult ss = solve_steady_fast(liouvillian);
                    return -concurrence(partial_trace_pair(ss.rho, ops.n, pair_a, pair_b));
                } catch (const Error&) {
                    ++point_fails;
                    return 0.0;
                }
            };

            SplitMix64 rng(mix_seed(seed, j));
            double best_value = -1.0;
            double best_r = 0.0;
            for (int rs = 0; rs < restarts; ++rs) {
                std::vector<double> x0{rng.next_double() * r_max};
                NelderMeadResult nm = nelder_mead_minimize(objective, x0, {0.25 * r_max}, {0.0},
                                                           {r_max});
                evals[j] += nm.evaluations;
                if (-nm.value > best_value) {
                    best_value = -nm.value;
                    best_r = nm.x[0];
                }
            }
            point.best_concurrence = best_value;
            point.best_magnitude = best_r;
            point.status = "ok";
            fails[j] = point_fails;
        } catch (const Error& e) {
            point.best_concurrence = kNaN;
            point.best_magnitude = kNaN;
            point.status = error_code_label(e.code());
            fails[j] = 1;
        }
    });

    for (std::size_t j = 0; j < theta_count; ++j) {
        result.evaluations += evals[j];
        result.failed_points += fails[j];
    }
    return result;
}

namespace {

struct ZSweepPolicy {
    Topology base;
    std::vector<std::size_t> z_links;
    std::vector<FreeParam> free_params;
    int pair_a = 0;
    int pair_b = 1;
    int side_slot = -1;
    int middle_slot = -1;
    int y_slot = -1;
};

ZSweepPolicy z_sweep_policy(const std::string& config) {
    ZSweepPolicy policy;
    policy.base = scenario_catalog(config);
    if (config == "config_i") {
        policy.z_links = {0};
        policy.free_params = {
            {FreeParamKind::Amplitude, 0, 0, 1.0, 0, 0.0, 15.0},
            {FreeParamKind::YLink, 0, 0, 1.0, 0, 0.0, 25.0},
        };
        policy.pair_a = 0;
        policy.pair_b = 1;
        policy.side_slot = 0;
        policy.y_slot = 1;
    } else if (config == "config_ii") {
        policy.z_links = {1};
        policy.free_params = {
            {FreeParamKind::AmplitudePair, 0, 2, -1.0, 0, 0.0, 60.0},
            {FreeParamKind::Amplitude, 1, 0, 1.0, 0, 0.0, 12.0},
            {FreeParamKind::YLink, 1, 0, 1.0, 0, 0.0, 25.0},
        };
        policy.pair_a = 0;
        policy.pair_b = 1;
        policy.side_slot = 0;
        policy.middle_slot = 1;
        policy.y_slot = 2;
    } else if (config == "config_iii") {
        policy.z_links = {0, 2};
        policy.free_params = {
            {FreeParamKind::AmplitudePair, 0, 2, -1.0, 0, 0.0, 12.0},
            {FreeParamKind::YCommon, 0, 0, 1.0, 0, 0.0, 25.0},
        };
        auto [a, b] = default_pair(3);
        policy.pair_a = a;
        policy.pair_b = b;
        policy.side_slot = 0;
        policy.y_slot = 1;
    } else {
        fail(ErrorCode::InvalidArgument,
             "z sweep supports config_i, config_ii, config_iii; got '" + config + "'");
    }
    return policy;
}

std::vector<double> midpoint_encoding(const std::vector<FreeParam>& params) {
    std::vector<double> x;
    for (const FreeParam& p : params) {
        if (p.kind == FreeParamKind::Phase) {
            x.push_back(1.0);
            x.push_back(0.0);
        } else {
            x.push_back(0.5 * (p.lo + p.hi));
        }
    }
    return x;
}

double slot_value(const OptimizeOutcome& outcome, int slot) {
    return slot < 0 ? kNaN : outcome.best_params[static_cast<std::size_t>(slot)];
}

}  // namespace

ZSweepResult z_sweep(const std::vector<std::string>& configs, const std::vector<double>& z_values,
                     std::uint64_t seed, int restarts) {
    require(!configs.empty(), ErrorCode::InvalidArgument, "z sweep needs at least one config");
    require(!z_values.empty(), ErrorCode::InvalidArgument, "z sweep needs at least one z value");
    require(restarts >= 1, ErrorCode::InvalidArgument, "restarts must be at least 1");
    for (double z : z_values) {
        require(std::isfinite(z) && z >= 1.0 && z <= 6.0, ErrorCode::InvalidArgument,
                "z grid values must lie within [1, 6]");
    }

    std::vector<ZSweepPolicy> policies;
    policies.reserve(configs.size());
    for (const std::string& name : configs) policies.push_back(z_sweep_policy(name));

    const std::size_t nz = z_values.size();
    const std::size_t total = configs.size() * nz;

    ZSweepResult result;
    result.points.resize(total);
    std::vector<std::size_t> fails(total, 0);

    parallel_for(total, [&](std::size_t idx) {
        const std::size_t ci = idx / nz;
        const std::size_t zi = idx % nz;
        const ZSweepPolicy& policy = policies[ci];
        ZSweepPoint& point = result.points[idx];
        point.config = configs[ci];
        point.z = z_values[zi];
        try {
            Topology topo = policy.base;
            for (std::size_t l : policy.z_links) topo = set_z(topo, l, point.z);

            // Certified probe at the midpoint of the free box: a degenerate
            // steady state (config_i at z = 1) is reported instead of letting
            // the optimizer chase an arbitrary mixture.
            const SiteOperators ops = build_site_operators(topo.node_count());
            Topology probe = apply_free_parameters(topo, policy.free_params,
                                                   midpoint_encoding(policy.free_params));
            LiouvillianMatrix liouvillian = build_liouvillian(probe, ops);
            (void)solve_steady(liouvillian);

            OptimizeSpecData spec;
            spec.scenario = std::move(topo);
            spec.free_params = policy.free_params;
            spec.restarts = restarts;
            spec.seed = mix_seed(seed, ci * 100003 + zi);
            spec.pair_first = policy.pair_a;
            spec.pair_second = policy.pair_b;
            spec.parallel_restarts = false;  // the sweep already runs points in parallel
            OptimizeOutcome outcome = maximize_concurrence(spec);

            point.concurrence = outcome.best_value;
            point.side_amplitude = slot_value(outcome, policy.side_slot);
            point.middle_amplitude = slot_value(outcome, policy.middle_slot);
            point.y_value = slot_value(outcome, policy.y_slot);
            point.status = "ok";
            fails[idx] = outcome.failed_points;
        } catch (const Error& e) {
            point.concurrence = kNaN;
            point.side_amplitude = kNaN;
            point.middle_amplitude = kNaN;
            point.y_value = kNaN;
            point.status = error_code_label(e.code());
            fails[idx] = 1;
        }
    });

    for (std::size_t f : fails) result.failed_points += f;
    return result;
}

Topology four_ring_topology() {
    Topology topo;
    topo.mode = TopologyMode::Effective;
    topo.nodes.assign(4, NodeParams{0.0, 0.02});
    for (int i = 0; i < 4; ++i) {
        EffectiveLink link;
        link.endpoints = {i, (i + 1) % 4};
        link.Gamma = 1.0;
        link.x = cplx(0.0, 0.0);
        link.y = 15.0;
        topo.links.push_back(link);
    }
    validate_topology(topo);
    return topo;
}

SizeCheckReport size_check(std::uint64_t seed, int restarts, std::size_t max_evaluations) {
    require(restarts >= 1, ErrorCode::InvalidArgument, "restarts must be at least 1");
    SizeCheckReport report;

    OptimizeSpecData ring3;
    ring3.nm.max_evaluations = max_evaluations;
    ring3.scenario = scenario_catalog("config_iii");
    ring3.free_params = {
        {FreeParamKind::AmplitudePair, 0, 2, 1.0, 0, 0.0, 12.0},
        {FreeParamKind::Phase, 2, 0, 1.0, 0, 0.0, 0.0},
    };
    ring3.restarts = restarts;
    ring3.seed = mix_seed(seed, 1);
    OptimizeOutcome out3 = maximize_concurrence(ring3);
    report.ring3_best = out3.best_value;
    report.ring3_params = out3.best_params;
    for (const FreeParam& p : ring3.free_params) report.ring3_labels.push_back(free_param_label(p));
    report.evaluations += out3.evaluations;
    report.failed_points += out3.failed_points;

    OptimizeSpecData ring4;
    ring4.nm.max_evaluations = max_evaluations;
    ring4.scenario = four_ring_topology();
    ring4.free_params = {
        {FreeParamKind::Amplitude, 0, 0, 1.0, 0, 0.0, 8.0},
        {FreeParamKind::Amplitude, 1, 0, 1.0, 0, 0.0, 8.0},
        {FreeParamKind::Amplitude, 2, 0, 1.0, 0, 0.0, 8.0},
        {FreeParamKind::Amplitude, 3, 0, 1.0, 0, 0.0, 8.0},
        {FreeParamKind::Phase, 1, 0, 1.0, 0, 0.0, 0.0},
        {FreeParamKind::Phase, 2, 0, 1.0, 0, 0.0, 0.0},
        {FreeParamKind::Phase, 3, 0, 1.0, 0, 0.0, 0.0},
    };
    for (const FreeParam& p : ring4.free_params) report.ring4_labels.push_back(free_param_label(p));
    ring4.restarts = restarts;

    ring4.seed = mix_seed(seed, 2);
    ring4.pair_first = 0;
    ring4.pair_second = 1;
    OptimizeOutcome adjacent = maximize_concurrence(ring4);
    report.ring4_adjacent_best = adjacent.best_value;
    report.ring4_adjacent_params = adjacent.best_params;
    report.evaluations += adjacent.evaluations;
    report.failed_points += adjacent.failed_points;

    ring4.seed = mix_seed(seed, 3);
    ring4.pair_first = 0;
    ring4.pair_second = 2;
    OptimizeOutcome opposite = maximize_concurrence(ring4);
    report.ring4_opposite_best = opposite.best_value;
    report.ring4_opposite_params = opposite.best_params;
    report.evaluations += opposite.evaluations;
    report.failed_points += opposite.failed_points;

    return report;
}

}  // namespace resonet
