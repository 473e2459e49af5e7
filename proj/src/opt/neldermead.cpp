#include "opt/neldermead.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "common/error.hpp"

namespace resonet {

namespace {

struct Vertex {
    std::vector<double> x;
    double value;
    std::size_t order;  // insertion counter, used only to break value ties
};

bool vertex_less(const Vertex& a, const Vertex& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.order < b.order;
}

void clamp_to_box(std::vector<double>& x, const std::vector<double>& lower,
                  const std::vector<double>& upper) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::min(std::max(x[i], lower[i]), upper[i]);
    }
}

}  // namespace

NelderMeadResult nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& fn,
                                      const std::vector<double>& x0,
                                      const std::vector<double>& step,
                                      const std::vector<double>& lower,
                                      const std::vector<double>& upper,
                                      const NelderMeadOptions& options) {
    const std::size_t dim = x0.size();
    require(dim > 0, ErrorCode::InvalidArgument, "nelder_mead_minimize: empty start point");
    require(step.size() == dim && lower.size() == dim && upper.size() == dim,
            ErrorCode::InvalidArgument, "nelder_mead_minimize: inconsistent argument sizes");
    for (std::size_t i = 0; i < dim; ++i) {
        require(std::isfinite(lower[i]) && std::isfinite(upper[i]) && lower[i] <= upper[i],
                ErrorCode::InvalidArgument, "nelder_mead_minimize: invalid bounds");
        require(std::isfinite(step[i]) && step[i] != 0.0, ErrorCode::InvalidArgument,
                "nelder_mead_minimize: steps must be finite and nonzero");
    }
    require(options.max_evaluations >= dim + 2, ErrorCode::InvalidArgument,
            "nelder_mead_minimize: evaluation budget too small");

    const double alpha = 1.0;  // reflection
    const double gamma = 2.0;  // expansion
    const double rho = 0.5;    // contraction
    const double sigma = 0.5;  // shrink

    std::size_t evaluations = 0;
    std::size_t order_counter = 0;
    auto evaluate = [&](std::vector<double> x) -> Vertex {
        clamp_to_box(x, lower, upper);
        double v = fn(x);
        if (!std::isfinite(v)) {
            fail(ErrorCode::Internal, "nelder_mead_minimize: objective returned non-finite value");
        }
        ++evaluations;
        return Vertex{std::move(x), v, order_counter++};
    };

    std::vector<Vertex> simplex;
    simplex.reserve(dim + 1);
    simplex.push_back(evaluate(x0));
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<double> xi = x0;
        double s = step[i];
        // Reflect the displacement inward when it would leave the box and the
        // opposite direction stays inside; degenerate vertices stall progress.
        if (xi[i] + s > upper[i] && xi[i] - s >= lower[i]) s = -s;
        xi[i] += s;
        simplex.push_back(evaluate(xi));
    }
    std::sort(simplex.begin(), simplex.end(), vertex_less);

    auto converged = [&]() {
        const std::vector<double>& best = simplex.front().x;
        double scale = 1.0;
        for (double b : best) scale = std::max(scale, std::abs(b));
        double diameter = 0.0;
        for (std::size_t v = 1; v < simplex.size(); ++v) {
            for (std::size_t i = 0; i < dim; ++i) {
                diameter = std::max(diameter, std::abs(simplex[v].x[i] - best[i]));
            }
        }
        return diameter / scale < options.relative_diameter_tol;
    };

    bool done = converged();
    while (!done && evaluations + 1 <= options.max_evaluations) {
        // Centroid of all vertices except the worst.
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t v = 0; v + 1 < simplex.size(); ++v) {
            for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v].x[i];
        }
        for (std::size_t i = 0; i < dim; ++i) centroid[i] /= static_cast<double>(dim);

        const Vertex& worst = simplex.back();
        std::vector<double> xr(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            xr[i] = centroid[i] + alpha * (centroid[i] - worst.x[i]);
        }
        Vertex reflected = evaluate(xr);

        if (vertex_less(reflected, simplex.front())) {
            if (evaluations + 1 <= options.max_evaluations) {
                std::vector<double> xe(dim);
                for (std::size_t i = 0; i < dim; ++i) {
                    xe[i] = centroid[i] + gamma * (xr[i] - centroid[i]);
                }
                Vertex expanded = evaluate(xe);
                simplex.back() = vertex_less(expanded, reflected) ? std::move(expanded)
                                                                  : std::move(reflected);
            } else {
                simplex.back() = std::move(reflected);
            }
        } else if (vertex_less(reflected, simplex[simplex.size() - 2])) {
            simplex.back() = std::move(reflected);
        } else if (evaluations + 1 <= options.max_evaluations) {
            bool outside = vertex_less(reflected, worst);
            std::vector<double> xc(dim);
            const std::vector<double>& anchor = outside ? reflected.x : worst.x;
            for (std::size_t i = 0; i < dim; ++i) {
                xc[i] = centroid[i] + rho * (anchor[i] - centroid[i]);
            }
            Vertex contracted = evaluate(xc);
            bool accept = outside ? vertex_less(contracted, reflected)
                                  : vertex_less(contracted, worst);
            if (accept) {
                simplex.back() = std::move(contracted);
            } else {
                // Shrink every vertex toward the best one.
                for (std::size_t v = 1; v < simplex.size(); ++v) {
                    if (evaluations + 1 > options.max_evaluations) break;
                    std::vector<double> xs(dim);
                    for (std::size_t i = 0; i < dim; ++i) {
                        xs[i] = simplex[0].x[i] + sigma * (simplex[v].x[i] - simplex[0].x[i]);
                    }
                    simplex[v] = evaluate(xs);
                }
            }
        } else {
            break;  // budget exhausted mid-step
        }

        std::sort(simplex.begin(), simplex.end(), vertex_less);
        done = converged();
    }

    NelderMeadResult result;
    result.x = simplex.front().x;
    result.value = simplex.front().value;
    result.evaluations = evaluations;
    result.converged = done;
    return result;
}

}  // namespace resonet
