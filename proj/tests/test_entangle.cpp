#include "doctest.h"

#include <cmath>

#include "analysis/entangle.hpp"
#include "common/rng.hpp"
#include "model/network.hpp"
#include "model/operators.hpp"
#include "solve/steady.hpp"

using namespace resonet;

namespace {

Matrix random_density(std::size_t dim, uint64_t seed) {
    SplitMix64 rng(seed);
    Matrix g(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            g(r, c) = cplx(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
    Matrix rho = g * g.adjoint();
    rho *= cplx(1.0 / rho.trace().real(), 0.0);
    return rho;
}

Matrix pure_state(const std::vector<cplx>& amps) {
    Matrix psi(amps.size(), 1);
    for (std::size_t i = 0; i < amps.size(); ++i) psi(i, 0) = amps[i];
    Matrix rho = psi * psi.adjoint();
    rho *= cplx(1.0 / rho.trace().real(), 0.0);
    return rho;
}

// Parameterized single-qubit unitary (deterministic test input).
Matrix one_qubit_unitary(double theta, double phi, double lambda) {
    Matrix u(2, 2);
    u(0, 0) = std::cos(theta / 2);
    u(0, 1) = -std::exp(cplx(0.0, lambda)) * std::sin(theta / 2);
    u(1, 0) = std::exp(cplx(0.0, phi)) * std::sin(theta / 2);
    u(1, 1) = std::exp(cplx(0.0, phi + lambda)) * std::cos(theta / 2);
    return u;
}

}  // namespace

TEST_CASE("partial trace of a product state keeps the chosen factors") {
    Matrix rho_a = random_density(2, 1);
    Matrix rho_b = random_density(2, 2);
    Matrix rho_c = random_density(2, 3);
    Matrix full = kron(rho_a, kron(rho_b, rho_c));

    Matrix bc = partial_trace_pair(full, 3, 1, 2);
    Matrix want = kron(rho_b, rho_c);
    CHECK((bc - want).max_abs() < 1e-12);

    // Swapped order transposes the tensor factors.
    Matrix cb = partial_trace_pair(full, 3, 2, 1);
    Matrix want_cb = kron(rho_c, rho_b);
    CHECK((cb - want_cb).max_abs() < 1e-12);

    Matrix only_b = partial_trace_single(full, 3, 1);
    CHECK((only_b - rho_b).max_abs() < 1e-12);
}

TEST_CASE("partial trace of the GHZ state is the classical mixture") {
    Matrix ghz = pure_state({1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0});
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
        Matrix red = partial_trace_pair(ghz, 3, i, j);
        CHECK(red(0, 0).real() == doctest::Approx(0.5));
        CHECK(red(3, 3).real() == doctest::Approx(0.5));
        CHECK(std::abs(red(0, 3)) < 1e-14);
        CHECK(concurrence(red) == 0.0);
    }
}

TEST_CASE("partial trace preserves the trace on random states") {
    for (uint64_t seed = 10; seed < 15; ++seed) {
        Matrix rho = random_density(8, seed);
        Matrix red = partial_trace_pair(rho, 3, 0, 2);
        CHECK(std::abs(red.trace() - cplx(1.0, 0.0)) < 1e-12);
    }
}

TEST_CASE("concurrence of maximally entangled and separable states") {
    Matrix singlet = pure_state({0.0, 1.0, -1.0, 0.0});
    CHECK(concurrence(singlet) == doctest::Approx(1.0).epsilon(1e-12));

    Matrix phi_plus = pure_state({1.0, 0.0, 0.0, 1.0});
    CHECK(concurrence(phi_plus) == doctest::Approx(1.0).epsilon(1e-12));

    Matrix product = kron(random_density(2, 21), random_density(2, 22));
    CHECK(concurrence(product) < 1e-8);

    Matrix ground(4, 4);
    ground(0, 0) = 1.0;
    CHECK(concurrence(ground) == 0.0);
}

TEST_CASE("concurrence of Werner states follows the closed form") {
    Matrix phi_plus = pure_state({1.0, 0.0, 0.0, 1.0});
    for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.7, 0.9, 1.0}) {
        Matrix rho = cplx(p, 0.0) * phi_plus + cplx((1.0 - p) / 4.0, 0.0) * Matrix::identity(4);
        const double want = std::max(0.0, (3.0 * p - 1.0) / 2.0);
        CHECK(std::abs(concurrence(rho) - want) < 1e-9);
    }
}

TEST_CASE("concurrence is invariant under local unitaries") {
    Matrix base = pure_state({0.3, cplx(0.7, 0.1), -0.5, cplx(0.0, 0.4)});
    const double c0 = concurrence(base);
    int k = 0;
    for (double theta : {0.4, 1.3}) {
        for (double phi : {0.0, 2.1}) {
            Matrix ua = one_qubit_unitary(theta, phi, 0.7 + k * 0.3);
            Matrix ub = one_qubit_unitary(1.9 - theta, 0.5 * phi + 0.2, 1.1);
            Matrix u = kron(ua, ub);
            Matrix rotated = u * base * u.adjoint();
            CHECK(std::abs(concurrence(rotated) - c0) < 1e-9);
            ++k;
        }
    }
}

TEST_CASE("concurrence stays within [0, 1] on random density matrices") {
    for (uint64_t seed = 100; seed < 130; ++seed) {
        double c = concurrence(random_density(4, seed));
        CHECK(c >= 0.0);
        CHECK(c <= 1.0 + 1e-12);
    }
}

TEST_CASE("cross correlation of product and anticorrelated states") {
    SiteOperators ops = build_site_operators(2);

    // Product of two partially excited sites factorizes exactly.
    Matrix site(2, 2);
    site(0, 0) = 0.7;
    site(1, 1) = 0.3;
    Matrix prod = kron(site, site);
    CHECK(cross_correlation(prod, ops, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));

    // Singlet-type superposition never doubly occupies.
    Matrix bell = pure_state({0.0, 1.0, 1.0, 0.0});
    CHECK(cross_correlation(bell, ops, 0, 1) == doctest::Approx(0.0));

    // Ground state has vanishing populations: denominator degenerates.
    Matrix ground(4, 4);
    ground(0, 0) = 1.0;
    CHECK_THROWS_AS((void)cross_correlation(ground, ops, 0, 1), Error);
    try {
        (void)cross_correlation(ground, ops, 0, 1);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateDenominator);
    }
}

TEST_CASE("cross correlation is 1 for a product steady state") {
    // Two driven nodes with no connecting link: the steady state factorizes.
    Topology t;
    t.mode = TopologyMode::Effective;
    t.nodes = {{0.0, 0.2}, {0.0, 0.2}};
    t.links = {
        {{0}, 1.0, cplx(0.9, 0.0), 0.0},
        {{1}, 1.0, cplx(0.0, 0.7), 0.0},
    };
    t.gamma_constrained.assign(2, false);
    SteadyStateResult res = steady_state_of(t);
    SiteOperators ops = build_site_operators(2);
    CHECK(cross_correlation(res.rho, ops, 0, 1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("factorization diagnostic on elementary states") {
    Matrix ground(8, 8);
    ground(0, 0) = 1.0;
    FactorizationDiagnostic g = factorization_diagnostic(ground, 3, 0);
    CHECK(g.purity == doctest::Approx(1.0));
    CHECK(g.ground_fidelity == doctest::Approx(1.0));

    // Site 1 maximally mixed, others ground.
    Matrix mixed1(2, 2);
    mixed1(0, 0) = 0.5;
    mixed1(1, 1) = 0.5;
    Matrix g2(2, 2);
    g2(0, 0) = 1.0;
    Matrix state = kron(mixed1, kron(g2, g2));
    FactorizationDiagnostic m = factorization_diagnostic(state, 3, 0);
    CHECK(m.purity == doctest::Approx(0.5));
    CHECK(m.ground_fidelity == doctest::Approx(0.5));
}

TEST_CASE("ring optimum leaves the first site almost pure and unexcited") {
    Topology t = scenario_catalog("config_iii_optimal");
    SteadyStateResult res = steady_state_of(t);
    FactorizationDiagnostic d = factorization_diagnostic(res.rho, 3, 0);
    CHECK(d.purity == doctest::Approx(0.97445).epsilon(2e-3));
    CHECK(d.ground_fidelity == doctest::Approx(0.98706).epsilon(2e-3));
    CHECK(d.purity > 0.95);
    CHECK(d.ground_fidelity > 0.95);
}
