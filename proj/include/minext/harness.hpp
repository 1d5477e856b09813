#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "minext/bp.hpp"
#include "minext/measures.hpp"
#include "minext/msystem.hpp"
#include "minext/rng.hpp"

namespace minext {

// ---- instance generation ---------------------------------------------------

struct SparseInstance {
    Eigen::VectorXd x0;        // length p, nonnegative, s nonzeros
    std::vector<int> support;  // ascending indices of the nonzeros
};

// Support uniform without replacement, weights iid chi-square(1).
SparseInstance gen_sparse_instance(int p, int s, CounterRng& rng);

// s points with pairwise separation >= delta and at least one pair exactly
// delta apart (rejection sampling plus a snap of one random adjacent pair);
// signs uniform excluding the two constant patterns.
JordanSupport gen_delta_spaced_jordan(int s, double delta, std::uint64_t seed,
                                      Interval interval = Interval{0.0, 1.0});

// ---- sweeps ----------------------------------------------------------------

struct SweepCell {
    int s = 0;
    int n = 0;
    double delta = 0.0;  // figure-2 sweeps only
    int trials = 0;
    int success_count = 0;
    double mean_l1_error = 0.0;  // recovery sweeps only
    int failures = 0;            // solver / interpolant failures
};

struct SweepReport {
    std::vector<SweepCell> cells;
    double max_err = 0.0;
    bool max_err_defined = false;
};

struct ErrSweepOptions {
    int p = 100;
    int trials = 10;  // N per sparsity level
    std::uint64_t seed = 1;
    bool parallel = true;
};

// For each s in 1..(p-1)/2: n = 2s+1, cosine family at t_k = k/(p+1),
// chi-square(1) instances; per level, the mean of ||x~ - x0||_1 / p over the trials;
// max_err is the worst level mean. Trials run in parallel with derived seeds and are
// reduced in (cell, trial) order, so the report is identical either way.
SweepReport run_err_sweep(const ErrSweepOptions& opts = {});

struct Figure2Options {
    std::uint64_t seed = 1;
    int trials = 100;
    int sparsity = 10;
    std::vector<double> deltas;  // empty selects 1/15, 1/20, ..., 1/55
    std::vector<int> degrees;    // empty selects 20, 30, ..., 100
    bool parallel = true;
};

// For each (delta, n) cell: delta-spaced signed supports on [0,1), the
// L2-minimizing sign interpolant in the cosine family of degree n, and the
// fraction of draws whose certificate verifies.
SweepReport run_figure2(const Figure2Options& opts = {});

// ---- single-recovery experiment --------------------------------------------

struct Figure1Config {
    std::uint64_t seed = 1;
    int s = 20;
    int n = 41;
    int p = 500;
};

struct Figure1Result {
    Figure1Config config;
    Eigen::VectorXd target;
    Eigen::VectorXd recovered;
    std::vector<double> grid;
    double l1_error_per_p = 0.0;
    double linf_error = 0.0;
    bool support_covered = false;  // recovered support includes every target
                                   // atom above the prune tolerance
    RecoveryResult solver;
};

Figure1Result run_figure1(const Figure1Config& cfg = {});

// ---- counterexample for non-homogeneous systems ------------------------------

// A nonnegative s-atom measure sigma, a signed measure mu on n+1 other
// points, and a positive continuous weight u0 such that under the system
// {u0, u0 u_1, ..., u0 u_n} both measures share their first n+1 generalized
// moments while ||mu||_TV < ||sigma||_TV.
struct CounterexampleResult {
    DiscreteMeasure sigma;
    DiscreteMeasure mu;
    FunctionFamily base_family;  // the homogeneous system the weight multiplies
    std::vector<std::pair<double, double>> weight_knots;  // piecewise-linear u0
    double tv_sigma = 0.0;
    double tv_mu = 0.0;
    double moment_gap = 0.0;  // relative sup difference of the two moment vectors
    int retries = 0;

    double weight_at(double x) const;  // u0(x)
};

CounterexampleResult counterexample(int s, int n, std::uint64_t seed);

// ---- emission ----------------------------------------------------------------

void write_text_file(const std::string& path, const std::string& content);

std::string figure1_json(const Figure1Result& r);
std::string figure1_csv(const Figure1Result& r);
std::string figure1_svg(const Figure1Result& r);

std::string err_sweep_json(const SweepReport& r);
std::string err_sweep_csv(const SweepReport& r);
std::string err_sweep_svg(const SweepReport& r);

std::string figure2_json(const SweepReport& r);
std::string figure2_csv(const SweepReport& r);
std::string figure2_svg(const SweepReport& r);

std::string counterexample_json(const CounterexampleResult& r);
std::string counterexample_svg(const CounterexampleResult& r);

}  // namespace minext
