#include "analysis/entangle.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace resonet {

namespace {

void check_density_input(const Matrix& rho, std::size_t dim, const char* who) {
    require(rho.rows() == dim && rho.cols() == dim, ErrorCode::Dimension,
            std::string(who) + ": state dimension mismatch");
    require(rho.is_finite(), ErrorCode::InvalidArgument,
            std::string(who) + ": non-finite state");
    require(std::abs(rho.trace() - cplx(1.0, 0.0)) < 1e-6, ErrorCode::UnphysicalState,
            std::string(who) + ": state trace is not 1");
}

// Bit of node i (0-based) inside basis index b, node 1 most significant.
inline int node_bit(std::size_t b, int n, int i) {
    return static_cast<int>((b >> (n - 1 - i)) & 1u);
}

inline std::size_t with_node_bit(std::size_t b, int n, int i, int bit) {
    const std::size_t mask = std::size_t{1} << (n - 1 - i);
    return bit ? (b | mask) : (b & ~mask);
}

}  // namespace

Matrix partial_trace_pair(const Matrix& rho, int n, int keep_first, int keep_second) {
    require(n >= 2 && n <= 5, ErrorCode::InvalidArgument,
            "partial_trace_pair: node count must be between 2 and 5");
    require(keep_first >= 0 && keep_first < n && keep_second >= 0 && keep_second < n &&
                keep_first != keep_second,
            ErrorCode::InvalidArgument, "partial_trace_pair: kept indices invalid");
    const std::size_t dim = std::size_t{1} << n;
    check_density_input(rho, dim, "partial_trace_pair");

    Matrix out(4, 4);
    for (int bi = 0; bi < 2; ++bi)
        for (int bj = 0; bj < 2; ++bj)
            for (int ci = 0; ci < 2; ++ci)
                for (int cj = 0; cj < 2; ++cj) {
                    cplx sum = 0.0;
                    // Sum over all assignments of the traced-out sites, which
                    // must agree between row and column index.
                    for (std::size_t rest = 0; rest < dim; ++rest) {
                        if (node_bit(rest, n, keep_first) != 0 ||
                            node_bit(rest, n, keep_second) != 0)
                            continue;
                        std::size_t row = with_node_bit(
                            with_node_bit(rest, n, keep_first, bi), n, keep_second, bj);
                        std::size_t col = with_node_bit(
                            with_node_bit(rest, n, keep_first, ci), n, keep_second, cj);
                        sum += rho(row, col);
                    }
                    out(static_cast<std::size_t>(bi * 2 + bj),
                        static_cast<std::size_t>(ci * 2 + cj)) = sum;
                }
    return out;
}

Matrix partial_trace_single(const Matrix& rho, int n, int keep) {
    require(n >= 1 && n <= 5, ErrorCode::InvalidArgument,
            "partial_trace_single: node count must be between 1 and 5");
    require(keep >= 0 && keep < n, ErrorCode::InvalidArgument,
            "partial_trace_single: kept index invalid");
    const std::size_t dim = std::size_t{1} << n;
    check_density_input(rho, dim, "partial_trace_single");

    Matrix out(2, 2);
    for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
            cplx sum = 0.0;
            for (std::size_t rest = 0; rest < dim; ++rest) {
                if (node_bit(rest, n, keep) != 0) continue;
                sum += rho(with_node_bit(rest, n, keep, b), with_node_bit(rest, n, keep, c));
            }
            out(static_cast<std::size_t>(b), static_cast<std::size_t>(c)) = sum;
        }
    return out;
}

double concurrence(const Matrix& rho4) {
    check_density_input(rho4, 4, "concurrence");
    double herm_dev = 0.0;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            herm_dev = std::max(herm_dev, std::abs(rho4(r, c) - std::conj(rho4(c, r))));
    require(herm_dev < 1e-6, ErrorCode::UnphysicalState, "concurrence: state not Hermitian");

    Matrix sy(2, 2);
    sy(0, 1) = cplx(0.0, -1.0);
    sy(1, 0) = cplx(0.0, 1.0);
    const Matrix syy = kron(sy, sy);

    const Matrix rho_tilde = syy * rho4.conjugate() * syy;
    const std::vector<cplx> ev = eigenvalues_general(rho4 * rho_tilde);

    std::vector<double> lambdas;
    lambdas.reserve(4);
    for (const cplx& v : ev) {
        double modulus = std::abs(v);
        if (modulus < 1e-14) modulus = 0.0;
        lambdas.push_back(std::sqrt(modulus));
    }
    std::sort(lambdas.begin(), lambdas.end(), std::greater<double>());
    const double c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    return c > 0.0 ? c : 0.0;
}

double cross_correlation(const Matrix& rho, const SiteOperators& ops, int i, int j) {
    require(i >= 0 && i < ops.n && j >= 0 && j < ops.n && i != j, ErrorCode::InvalidArgument,
            "cross_correlation: site indices invalid");
    check_density_input(rho, ops.dim, "cross_correlation");

    const double pop_i = (rho * ops.number[static_cast<std::size_t>(i)]).trace().real();
    const double pop_j = (rho * ops.number[static_cast<std::size_t>(j)]).trace().real();
    require(pop_i > 1e-12 && pop_j > 1e-12, ErrorCode::DegenerateDenominator,
            "cross_correlation: a site population underflows, coefficient undefined");

    const double joint = (rho * ops.number[static_cast<std::size_t>(i)] *
                          ops.number[static_cast<std::size_t>(j)])
                             .trace()
                             .real();
    return joint / (pop_i * pop_j);
}

FactorizationDiagnostic factorization_diagnostic(const Matrix& rho, int n, int third) {
    require(n == 3, ErrorCode::InvalidArgument,
            "factorization_diagnostic: defined for three-node networks");
    Matrix reduced = partial_trace_single(rho, n, third);
    FactorizationDiagnostic out;
    out.purity = (reduced * reduced).trace().real();
    out.ground_fidelity = reduced(0, 0).real();
    return out;
}

}  // namespace resonet
