#pragma once

#include <vector>

#include "minext/measures.hpp"
#include "minext/msystem.hpp"

namespace minext {

// T_k(x) = cos(k arccos x) on [-1,1], evaluated by the three-term recurrence.
double classical_T(int k, double x);

// Extrema of T_k split by sign: plus holds the +1 level set, minus the -1
// level set; k+1 points in total.
JordanSupport extrema_sets(int k);

enum class RemezStatus { Ok, NumericalFailure };

struct RemezOptions {
    int grid_size = 20001;
    double level_ratio_tol = 1e-10;  // stop when sup|e| / |levelled h| - 1 is below this
    int max_iterations = 100;
};

struct ChebyshevResult {
    // T_k = sum coefficients[j] u_j, normalized to sup norm 1 with a positive
    // value at the right end of the interval.
    std::vector<double> coefficients;
    std::vector<double> alternation_points;  // k+1 ascending points
    double sup_norm = 0.0;
    double equioscillation_residual = 0.0;  // max | |T(x_i)| - 1 |
    double sign_at_right_end = 0.0;
    RemezStatus status = RemezStatus::NumericalFailure;
    int iterations = 0;
};

// Best sup-norm approximation of u_k from span{u_0..u_{k-1}} by multi-point
// Remez exchange on a discretized interval, with golden-section refinement of
// each extremum. On stagnation the last reference is returned in
// alternation_points with status NumericalFailure.
ChebyshevResult generalized_chebyshev(const FunctionFamily& fam, int k, const RemezOptions& opts = {});

// Alternation points of the k-th generalized Chebyshev polynomial split by
// the sign the polynomial takes there.
JordanSupport chebyshev_measure_support(const FunctionFamily& fam, int k, const RemezOptions& opts = {});

}  // namespace minext
