#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace resonet {

struct NelderMeadOptions {
    // Converged when every vertex is within this relative distance of the best
    // vertex (infinity norm, scaled by max(1, |best|)).
    double relative_diameter_tol = 1e-6;
    std::size_t max_evaluations = 2000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

// Minimizes fn over a box. Evaluation points are clamped to [lower, upper]
// component-wise before calling fn, so fn never sees out-of-box input. The
// initial simplex is x0 plus one vertex per dimension displaced by step[i]
// (reflected inward when that would leave the box). Ties between vertices are
// broken by insertion order, which keeps runs bit-reproducible.
NelderMeadResult nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& fn,
                                      const std::vector<double>& x0,
                                      const std::vector<double>& step,
                                      const std::vector<double>& lower,
                                      const std::vector<double>& upper,
                                      const NelderMeadOptions& options = {});

}  // namespace resonet
