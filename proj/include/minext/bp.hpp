#pragma once

#include <span>
#include <utility>

#include <Eigen/Dense>

#include "minext/measures.hpp"
#include "minext/msystem.hpp"

namespace minext {

enum class SolveStatus { Optimal, Infeasible, MaxIterations, NumericalFailure };

const char* to_string(SolveStatus s);

struct SolverOptions {
    double feas_tol = 1e-8;
    double gap_tol = 1e-8;
    int max_iter = 200;
    // Grid weights at or below this magnitude are dropped when a solution is
    // converted back to a measure.
    double atom_prune_tol = 1e-6;
    // Row equilibration of [A b]; scales rows by 1/max|row| before solving.
    // The feasible set and the l1 objective are unchanged.
    bool equilibrate = true;
    // Run a revised-simplex pass when the interior-point duality gap stalls.
    bool simplex_cleanup = true;

    enum class Method { Auto, InteriorPoint, Simplex };
    Method method = Method::Auto;
};

// min ||y||_1 s.t. A y = b. Complex families are pre-split into interleaved
// (Re, Im) real row pairs before reaching this layer, so A is always real.
struct BasisPursuitProblem {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
};

struct RecoveryResult {
    Eigen::VectorXd solution;    // y, length = A.cols()
    double objective = 0.0;      // ||solution||_1
    SolveStatus status = SolveStatus::NumericalFailure;
    int iterations = 0;
    // Measured on the LP actually solved (after equilibration): duality gap
    // |c'x - b'nu| / (1 + |c'x|).
    double duality_gap = 0.0;
    // ||A y - b||_2 / (1 + ||b||_2) on the original, unscaled problem.
    double residual_norm = 0.0;
    // Dual vector for the original rows; at an optimum ||A' nu||_inf <= 1 and
    // nu' b equals the objective (strong duality).
    Eigen::VectorXd dual;
    // The solver never decides whether the minimizer is unique; with multiple
    // l1 minimizers the interior-point analytic-center limit is returned
    // as-is. Uniqueness claims come from the certificate module only.
    bool uniqueness_certified = false;
};

RecoveryResult solve_bp(const BasisPursuitProblem& prob, const SolverOptions& opts = {});

// Generalized minimal extrapolation restricted to a grid: atoms at grid
// points are in bijective isometry with weight vectors under the l1 norm, so
// matching moments on the grid is the basis-pursuit problem with the
// generalized Vandermonde matrix of the grid.
std::pair<DiscreteMeasure, RecoveryResult> solve_gme_on_grid(const MomentVector& observed,
                                                             const FunctionFamily& fam,
                                                             std::span<const double> grid,
                                                             const SolverOptions& opts = {});

}  // namespace minext
