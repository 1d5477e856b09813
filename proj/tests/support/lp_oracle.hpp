#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

// Test-only oracles, independent of the solver implementation paths they
// check.

namespace minext::test {

// Exhaustive basic-feasible-solution enumeration for
//   min ||y||_1  s.t.  A y = b
// via the split form min 1'x s.t. [A,-A] x = b, x >= 0. Every vertex of the
// feasible set is a basic solution, and the minimum of a bounded feasible LP
// is attained at one, so scanning all column subsets of size rank(G) is an
// exact (if exponential) solver. Only for tiny instances.
inline double bp_objective_by_enumeration(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    const Eigen::Index m = a.rows();
    const Eigen::Index p = a.cols();
    Eigen::MatrixXd g(m, 2 * p);
    g.leftCols(p) = a;
    g.rightCols(p) = -a;

    if (b.lpNorm<Eigen::Infinity>() == 0.0) return 0.0;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(g);
    qr.setThreshold(1e-12);
    const Eigen::Index r = qr.rank();

    double best = std::numeric_limits<double>::infinity();
    std::vector<Eigen::Index> comb(static_cast<std::size_t>(r));
    for (Eigen::Index i = 0; i < r; ++i) comb[static_cast<std::size_t>(i)] = i;

    const Eigen::Index ncols = 2 * p;
    while (true) {
        Eigen::MatrixXd basis(m, r);
        for (Eigen::Index i = 0; i < r; ++i) basis.col(i) = g.col(comb[static_cast<std::size_t>(i)]);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> bqr(basis);
        bqr.setThreshold(1e-12);
        if (bqr.rank() == r) {
            const Eigen::VectorXd xb = bqr.solve(b);
            if ((basis * xb - b).lpNorm<Eigen::Infinity>() <=
                    1e-9 * (1.0 + b.lpNorm<Eigen::Infinity>()) &&
                xb.minCoeff() >= -1e-9) {
                best = std::min(best, xb.cwiseMax(0.0).sum());
            }
        }
        // next combination
        Eigen::Index i = r - 1;
        while (i >= 0 && comb[static_cast<std::size_t>(i)] == ncols - r + i) --i;
        if (i < 0) break;
        ++comb[static_cast<std::size_t>(i)];
        for (Eigen::Index j = i + 1; j < r; ++j) {
            comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return best;
}

// Composite Simpson quadrature, used as the independent route for closed-form
// inner products.
template <class F>
double simpson(F&& f, double lo, double hi, int panels = 4096) {
    const double h = (hi - lo) / (2.0 * panels);
    double acc = f(lo) + f(hi);
    for (int i = 1; i < 2 * panels; ++i) {
        acc += f(lo + h * i) * ((i % 2 == 1) ? 4.0 : 2.0);
    }
    return acc * h / 3.0;
}

}  // namespace minext::test
