// Acceptance checks for the whole pipeline, one printed verdict per criterion.
// Every tolerance is pinned here in code next to the check it guards. The
// binary exits nonzero if any criterion fails, so it can gate CI directly.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "analysis/entangle.hpp"
#include "common/rng.hpp"
#include "fullmodel/fullmodel.hpp"
#include "io/reports.hpp"
#include "model/liouvillian.hpp"
#include "model/network.hpp"
#include "model/operators.hpp"
#include "opt/objectives.hpp"
#include "solve/steady.hpp"

using namespace resonet;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

std::string fmt(const char* format, ...) {
    char buffer[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buffer, sizeof(buffer), format, args);
    va_end(args);
    return buffer;
}

void report(int index, const char* label, bool ok, const std::string& detail) {
    std::printf("[%s] %d. %s  (%s)\n", ok ? "PASS" : "FAIL", index, label, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double wrap_angle(double a) {
    while (a > kPi) a -= 2.0 * kPi;
    while (a <= -kPi) a += 2.0 * kPi;
    return a;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string scenario_path(const char* name) {
    return std::string(RESONET_SCENARIO_DIR) + "/" + name;
}

bool within_rel(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

double pair_concurrence(const Topology& t, int a, int b) {
    SteadyStateResult ss = steady_state_of(t);
    return concurrence(partial_trace_pair(ss.rho, t.node_count(), a, b));
}

Matrix random_hermitian_unit_trace(std::size_t dim, uint64_t seed) {
    SplitMix64 rng(seed);
    Matrix g(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            g(r, c) = cplx(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
    Matrix h = g * g.adjoint();
    h *= cplx(1.0 / h.trace().real(), 0.0);
    return h;
}

// 1. The raw-waveguide -> reduced-link map reproduces the reference operating
//    point of the three-node ring, every derived quantity within 1% relative.
void criterion_parameter_map() {
    const auto start = std::chrono::steady_clock::now();
    Topology raw = parse_scenario_json(read_file(scenario_path("ring_physical.json")));
    Topology eff = derive_effective(raw);

    bool ok = eff.links.size() == 3;
    if (ok) {
        ok = ok && within_rel(eff.links[0].Gamma, 4.42e8, 0.01);
        ok = ok && within_rel(eff.links[2].Gamma, 4.42e8, 0.01);
        ok = ok && within_rel(eff.links[1].Gamma, 4.41e5, 0.01);
        for (int l = 0; l < 3; ++l)
            ok = ok && within_rel(eff.links[static_cast<std::size_t>(l)].y, 15.0, 0.01);
        ok = ok && within_rel(std::abs(eff.links[0].x), 1.82, 0.01);
        ok = ok && within_rel(link_z(eff, 0), 1.113, 0.01);
        ok = ok && within_rel(link_z(eff, 2), 1.113, 0.01);
        ok = ok && within_rel(link_z(eff, 1), 114.0, 0.01);
    }
    report(1, "waveguide reduction hits the ring reference point within 1%", ok,
           fmt("Gamma=(%.4g, %.4g, %.4g) y=%.4g |x1|=%.4g z=(%.4g, %.4g) %.0f ms",
               eff.links[0].Gamma, eff.links[1].Gamma, eff.links[2].Gamma, eff.links[0].y,
               std::abs(eff.links[0].x), link_z(eff, 0), link_z(eff, 1),
               1e3 * seconds_since(start)));
}

// 2. Steady state of the ring at its optimal operating point: concurrence of
//    the far node pair equals 0.402 +- 0.02.
void criterion_ring_optimum() {
    const auto start = std::chrono::steady_clock::now();
    const double c = pair_concurrence(scenario_catalog("config_iii_optimal"), 1, 2);
    const bool ok = std::abs(c - 0.402) <= 0.02;
    report(2, "ring optimal point gives far-pair concurrence 0.402 +- 0.02", ok,
           fmt("C(2,3)=%.5f, %.2f s", c, seconds_since(start)));
}

struct PhaseSweepOutcome {
    PhaseSweepResult result;
    bool produced = false;
};

PhaseSweepOutcome g_phase_sweep;  // shared between criteria 3 and 7

// 3. Phase-control law on the undriven ring template with both outer drive
//    moduli at 1.67: the 51x51 sweep peaks at an odd multiple of pi in the
//    phase difference with C = 0.417 +- 0.02, and a quarter-turn difference
//    kills the entanglement (C < 0.03).
void criterion_phase_law() {
    const auto start = std::chrono::steady_clock::now();
    Topology ring = scenario_catalog("config_iii");
    const std::size_t grid = 51;
    g_phase_sweep.result = phase_sweep(ring, 1.67, 1.67, grid);
    g_phase_sweep.produced = true;
    const PhaseSweepResult& r = g_phase_sweep.result;

    std::size_t best = 0;
    for (std::size_t i = 1; i < r.cells.size(); ++i)
        if (r.cells[i].concurrence > r.cells[best].concurrence) best = i;
    const double c_max = r.cells[best].concurrence;
    const double diff = wrap_angle(r.cells[best].phi_a - r.cells[best].phi_b);
    const double step = 2.0 * kPi / static_cast<double>(grid);

    Topology quarter = ring;
    quarter.links[0].x = 1.67 * std::polar(1.0, kPi / 2.0);  // phi_1 - phi_3 = pi/2
    quarter.links[2].x = cplx(1.67, 0.0);
    const double c_quarter = pair_concurrence(quarter, 1, 2);

    const bool ok = std::abs(c_max - 0.417) <= 0.02 &&
                    std::abs(std::abs(diff) - kPi) <= 1.2 * step && c_quarter < 0.03 &&
                    r.failed_points == 0;
    report(3, "phase law: odd-pi peak at 0.417 +- 0.02, quarter-turn disentangles", ok,
           fmt("max C=%.5f at |dphi|=%.4f (pi=%.4f), C(dphi=pi/2)=%.5f, %.1f s", c_max,
               std::abs(diff), kPi, c_quarter, seconds_since(start)));
}

// 4. Drive-direction scan: the best achievable concurrence is maximal when
//    the two outer drives have equal magnitude and opposite sign, and every
//    opposite-sign direction beats its same-sign mirror image.
void criterion_ratio_scan() {
    const auto start = std::chrono::steady_clock::now();
    RatioScanResult r = ratio_scan(scenario_catalog("config_iii"), 72, 2026, 6);

    std::size_t imax = 0;
    for (std::size_t j = 1; j < r.points.size(); ++j)
        if (r.points[j].best_concurrence > r.points[imax].best_concurrence) imax = j;
    // theta = 3pi/4 is index 27 on the 72-point grid; index 63 (7pi/4) is the
    // same drive line by the global phase gauge.
    const bool peak_ok = (imax == 27 || imax == 63);

    int violations = 0;
    for (std::size_t k = 0; k < r.points.size(); ++k) {
        const double c = std::cos(r.points[k].theta);
        const double s = std::sin(r.points[k].theta);
        if (c * s > 1e-12) {  // same-sign direction; mirror is theta -> pi - theta
            const std::size_t mirror = (36 + 72 - k) % 72;
            if (r.points[mirror].best_concurrence < r.points[k].best_concurrence - 1e-6)
                ++violations;
        }
    }
    bool all_solved = r.failed_points == 0;
    const bool ok = peak_ok && violations == 0 && all_solved;
    report(4, "opposite-sign drives dominate; peak at the anti-symmetric direction", ok,
           fmt("argmax theta=%.4f (C=%.5f), same-sign violations=%d, %.1f s",
               r.points[imax].theta, r.points[imax].best_concurrence, violations,
               seconds_since(start)));
}

// 5. Two-node double-drive optimum: re-optimizing the drive modulus and the
//    relative phase yields C = 0.470 +- 0.02 at an odd-pi phase difference.
void criterion_double_drive_optimum() {
    const auto start = std::chrono::steady_clock::now();
    OptimizeSpecData spec;
    spec.scenario = scenario_catalog("config_ii");
    spec.free_params = {
        {FreeParamKind::AmplitudePair, 0, 2, 1.0, 0, 0.0, 60.0},
        {FreeParamKind::Phase, 2, 0, 1.0, 0, 0.0, 0.0},
    };
    spec.restarts = 16;
    spec.seed = 777;
    OptimizeOutcome out = maximize_concurrence(spec);

    const double phase_err = std::abs(wrap_angle(out.best_params[1] - kPi));
    const bool ok = std::abs(out.best_value - 0.470) <= 0.02 && phase_err < 0.1;
    report(5, "double-drive optimum 0.470 +- 0.02 at opposite drive signs", ok,
           fmt("best C=%.5f at |x|=%.3f, phase off pi by %.3g rad, %.1f s", out.best_value,
               out.best_params[0], phase_err, seconds_since(start)));
}

// 6. Loss robustness: the double-drive curve falls from about 0.48 at z = 1
//    to about 0.285 at z = 1.221 (+- 0.03 at both endpoints), and the ring
//    stays above the single-link curve until the crossover window
//    z = 4.03 +- 0.3.
void criterion_loss_crossover() {
    const auto start = std::chrono::steady_clock::now();
    ZSweepResult ends = z_sweep({"config_ii"}, {1.0, 1.221}, 99, 16);
    const double c_lo = ends.points[0].concurrence;
    const double c_hi = ends.points[1].concurrence;
    const bool endpoints_ok = ends.points[0].status == "ok" && ends.points[1].status == "ok" &&
                              std::abs(c_lo - 0.48) <= 0.03 && std::abs(c_hi - 0.285) <= 0.03;

    const std::vector<double> zs = {2.0, 3.0, 3.5, 3.73, 3.9, 4.03, 4.2, 4.33, 4.6};
    ZSweepResult curves = z_sweep({"config_i", "config_iii"}, zs, 2026, 16);
    const std::size_t n = zs.size();
    double crossing = -1.0;
    bool above_before_crossing = true;
    for (std::size_t k = 0; k < n; ++k) {
        const double ci = curves.points[k].concurrence;          // single link
        const double ciii = curves.points[n + k].concurrence;    // ring
        if (crossing < 0.0 && ciii <= ci) crossing = zs[k];
        if (crossing < 0.0 && ciii <= ci + 1e-12) above_before_crossing = false;
    }
    const bool crossing_ok = crossing >= 3.73 && crossing <= 4.33;

    const bool ok = endpoints_ok && above_before_crossing && crossing_ok;
    report(6, "loss endpoints 0.48/0.285 +- 0.03; ring/single-link crossover near z=4.03", ok,
           fmt("C(z=1)=%.4f C(z=1.221)=%.4f, first crossing at z=%.3g, %.1f s", c_lo, c_hi,
               crossing, seconds_since(start)));
}

// 7. Along the phase-difference axis of the criterion-3 sweep, the
//    cross-correlation minimum lands on the concurrence maximum (within one
//    grid cell).
void criterion_correlation_dip() {
    if (!g_phase_sweep.produced) {
        report(7, "cross-correlation dip aligns with the concurrence peak", false,
               "phase sweep unavailable");
        return;
    }
    const PhaseSweepResult& r = g_phase_sweep.result;
    const std::size_t grid = r.grid;
    // Slice phi_b = 0: cells indexed ia * grid, the difference axis itself.
    std::size_t arg_cmax = 0;
    std::size_t arg_xmin = 0;
    for (std::size_t ia = 1; ia < grid; ++ia) {
        const PhaseSweepCell& cell = r.cells[ia * grid];
        if (cell.concurrence > r.cells[arg_cmax * grid].concurrence) arg_cmax = ia;
        if (cell.cross_correlation < r.cells[arg_xmin * grid].cross_correlation) arg_xmin = ia;
    }
    const long delta = std::labs(static_cast<long>(arg_cmax) - static_cast<long>(arg_xmin));
    const bool ok = delta <= 1;
    report(7, "cross-correlation dip aligns with the concurrence peak", ok,
           fmt("argmax C at cell %zu, argmin correlation at cell %zu (|delta|=%ld)", arg_cmax,
               arg_xmin, delta));
}

// 8. Joint emitter+waveguide integration against the reduced model at a point
//    with a 100x rate separation: concurrence agreement within 10% and cutoff
//    convergence below 1% when the per-link occupation cap grows from 3 to 4.
void criterion_elimination_validation() {
    const auto start = std::chrono::steady_clock::now();
    Topology raw = parse_scenario_json(read_file(scenario_path("validation_resonant.json")));
    FullModelConfig config;  // n_max = 3, deviation limit 0.10
    EliminationReport rep = validate_elimination(raw, config);

    const bool ok = rep.passed && rep.best_deviation <= 0.10 && rep.truncation_shift < 0.01 &&
                    rep.uniqueness_ok && rep.photon_ok;
    report(8, "joint model matches the reduced model within 10% (cutoff drift < 1%)", ok,
           fmt("C_joint=%.5f deviation=%.3f%% truncation=%.3g separation=%.3g, %.0f s",
               rep.concurrence_full, 1e2 * rep.best_deviation, rep.truncation_shift,
               rep.scale_separation, seconds_since(start)));
}

// 9. Cross-cutting invariants: steady states stay physical, the assembled
//    superoperator matches the direct equation of motion, the concurrence
//    passes textbook states, observables are drive-gauge invariant, and
//    repeated runs serialize byte-identically.
void criterion_invariants() {
    const auto start = std::chrono::steady_clock::now();
    std::string failing;

    // Physicality of every catalog steady state (the undriven single-link
    // scenario included: its intrinsic loss makes the ground state unique).
    const std::vector<std::string> names = {"config_i", "config_ii", "config_iii",
                                            "config_iii_optimal"};
    for (const std::string& name : names) {
        Topology t = scenario_catalog(name);
        SteadyStateResult ss = steady_state_of(t);
        const double herm = (ss.rho - ss.rho.adjoint()).max_abs();
        const double trace_err = std::abs(ss.rho.trace() - cplx(1.0, 0.0));
        if (herm > 1e-12 || trace_err > 1e-12 || ss.min_eigenvalue < -1e-8)
            failing += " physicality:" + name;
    }

    // Superoperator route vs direct right-hand side on 20 random states per
    // scenario, scaled by the generator's own magnitude.
    for (const std::string& name : names) {
        Topology t = scenario_catalog(name);
        SiteOperators ops = build_site_operators(t.node_count());
        LiouvillianMatrix l = build_liouvillian(t, ops);
        const double scale = std::max(1.0, l.matrix.max_abs());
        double worst = 0.0;
        for (uint64_t s = 0; s < 20; ++s) {
            Matrix rho = random_hermitian_unit_trace(ops.dim, 7000 + s);
            std::vector<cplx> via_matrix = matvec(l.matrix, vec_columns(rho));
            std::vector<cplx> via_rhs = vec_columns(apply_master_rhs(t, ops, rho));
            for (std::size_t k = 0; k < via_matrix.size(); ++k)
                worst = std::max(worst, std::abs(via_matrix[k] - via_rhs[k]) / scale);
        }
        if (worst > 1e-9) failing += " generator:" + name;
    }

    // Concurrence oracle states.
    {
        Matrix bell(4, 4);
        bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = cplx(0.5, 0.0);
        Matrix product(4, 4);
        product(1, 1) = cplx(1.0, 0.0);  // |01><01|
        Matrix werner(4, 4);
        const double p = 0.5;
        // p times the singlet plus (1-p)/4 times the identity.
        werner(1, 1) = werner(2, 2) = cplx(p / 2.0 + (1.0 - p) / 4.0, 0.0);
        werner(1, 2) = werner(2, 1) = cplx(-p / 2.0, 0.0);
        werner(0, 0) = werner(3, 3) = cplx((1.0 - p) / 4.0, 0.0);
        if (std::abs(concurrence(bell) - 1.0) > 1e-9 || concurrence(product) > 1e-9 ||
            std::abs(concurrence(werner) - 0.25) > 1e-9)
            failing += " concurrence-oracles";
    }

    // Global drive-phase gauge: multiplying every drive by one phase leaves
    // populations and concurrence unchanged.
    {
        Topology ring = scenario_catalog("config_iii");
        ring.links[0].x = cplx(1.67, 0.0);
        ring.links[2].x = cplx(-1.67, 0.0);
        Topology rotated = ring;
        const cplx phase = std::polar(1.0, 0.9);
        for (EffectiveLink& link : rotated.links) link.x *= phase;

        SteadyStateResult a = steady_state_of(ring);
        SteadyStateResult b = steady_state_of(rotated);
        SiteOperators ops = build_site_operators(3);
        double gauge_err = std::abs(concurrence(partial_trace_pair(a.rho, 3, 1, 2)) -
                                    concurrence(partial_trace_pair(b.rho, 3, 1, 2)));
        for (int i = 0; i < 3; ++i) {
            const std::size_t idx = static_cast<std::size_t>(i);
            gauge_err = std::max(gauge_err, std::abs((a.rho * ops.number[idx]).trace() -
                                                     (b.rho * ops.number[idx]).trace()));
        }
        if (gauge_err > 1e-10) failing += fmt(" gauge(err=%.2g)", gauge_err);
    }

    // Byte-identical serialization across repeated runs.
    {
        Topology ring = scenario_catalog("config_iii");
        const std::string csv1 = phase_sweep_csv(phase_sweep(ring, 1.67, 1.67, 5));
        const std::string csv2 = phase_sweep_csv(phase_sweep(ring, 1.67, 1.67, 5));
        OptimizeSpecData spec;
        spec.scenario = ring;
        spec.free_params = {
            {FreeParamKind::AmplitudePair, 0, 2, 1.0, 0, 0.0, 12.0},
            {FreeParamKind::Phase, 2, 0, 1.0, 0, 0.0, 0.0},
        };
        spec.restarts = 2;
        spec.seed = 11;
        const std::string opt1 =
            optimize_report_json(spec.free_params, maximize_concurrence(spec), 1, 2);
        const std::string opt2 =
            optimize_report_json(spec.free_params, maximize_concurrence(spec), 1, 2);
        const std::string z1 = z_sweep_csv(z_sweep({"config_i"}, {2.0, 4.0}, 3, 4));
        const std::string z2 = z_sweep_csv(z_sweep({"config_i"}, {2.0, 4.0}, 3, 4));
        if (csv1 != csv2 || opt1 != opt2 || z1 != z2) failing += " determinism";
    }

    report(9, "physicality, generator equivalence, oracles, gauge, determinism", failing.empty(),
           failing.empty() ? fmt("all invariant groups hold, %.1f s", seconds_since(start))
                           : ("failing:" + failing));
}

}  // namespace

int main() {
    std::printf("acceptance checks, library version %s\n", kToolVersion);
    criterion_parameter_map();
    criterion_ring_optimum();
    criterion_phase_law();
    criterion_ratio_scan();
    criterion_double_drive_optimum();
    criterion_loss_crossover();
    criterion_correlation_dip();
    criterion_elimination_validation();
    criterion_invariants();
    if (g_failures == 0) {
        std::printf("all 9 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
}
