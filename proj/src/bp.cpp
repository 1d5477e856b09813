#include "minext/bp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace minext {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::MaxIterations: return "max_iterations";
        case SolveStatus::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Reduced {
    MatrixXd A;                   // equilibrated, independent rows only
    VectorXd b;
    std::vector<Index> kept;      // original row indices
    VectorXd scale;               // per kept row; A.row(i) = scale(i) * A_orig.row(kept(i))
    bool feasible = true;
};

// Drop zero and linearly dependent rows, equilibrate the rest, and decide
// feasibility. For basis pursuit the sign-split variable y = y+ - y- ranges
// over all of R^p, so b is attainable iff it lies in the range of A; the
// least-squares residual decides that up front.
Reduced reduce_rows(const MatrixXd& a, const VectorXd& b, bool equilibrate) {
    const Index m = a.rows();
    Reduced red;

    std::vector<Index> nonzero;
    for (Index i = 0; i < m; ++i) {
        const double norm = a.row(i).cwiseAbs().maxCoeff();
        if (norm > 0.0) {
            nonzero.push_back(i);
        } else if (std::abs(b(i)) > 1e-12) {
            red.feasible = false;
            return red;
        }
    }
    if (nonzero.empty()) {
        // A == 0; feasible iff b == 0, which the caller short-circuits.
        red.feasible = b.lpNorm<Eigen::Infinity>() <= 1e-12;
        return red;
    }

    MatrixXd az(static_cast<Index>(nonzero.size()), a.cols());
    VectorXd bz(static_cast<Index>(nonzero.size()));
    VectorXd sz(static_cast<Index>(nonzero.size()));
    for (Index i = 0; i < az.rows(); ++i) {
        const double s = equilibrate ? 1.0 / a.row(nonzero[static_cast<std::size_t>(i)]).cwiseAbs().maxCoeff() : 1.0;
        az.row(i) = s * a.row(nonzero[static_cast<std::size_t>(i)]);
        bz(i) = s * b(nonzero[static_cast<std::size_t>(i)]);
        sz(i) = s;
    }

    // b in range(A)?
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(az);
    const VectorXd y_ls = cod.solve(bz);
    const double resid = (az * y_ls - bz).lpNorm<Eigen::Infinity>();
    if (resid > 1e-9 * (1.0 + bz.lpNorm<Eigen::Infinity>())) {
        red.feasible = false;
        return red;
    }

    // Independent rows via column-pivoted QR of A^T.
    Eigen::ColPivHouseholderQR<MatrixXd> qr(az.transpose());
    qr.setThreshold(1e-12);
    const Index rank = qr.rank();
    const auto perm = qr.colsPermutation().indices();
    std::vector<Index> sel(perm.data(), perm.data() + rank);
    std::sort(sel.begin(), sel.end());

    red.A.resize(rank, a.cols());
    red.b.resize(rank);
    red.scale.resize(rank);
    red.kept.resize(static_cast<std::size_t>(rank));
    for (Index i = 0; i < rank; ++i) {
        const Index local = sel[static_cast<std::size_t>(i)];
        red.A.row(i) = az.row(local);
        red.b(i) = bz(local);
        red.scale(i) = sz(local);
        red.kept[static_cast<std::size_t>(i)] = nonzero[static_cast<std::size_t>(local)];
    }
    return red;
}

struct LpSolution {
    VectorXd x;      // split variables, length 2p
    VectorXd nu;     // dual for the reduced rows
    double gap = std::numeric_limits<double>::infinity();
    double pinf = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    bool stalled = false;
};

// Mehrotra predictor-corrector on min 1'x s.t. [A,-A] x = b, x >= 0.
// The split structure is used throughout: G D G' = A (D+ + D-) A'.
LpSolution interior_point(const MatrixXd& a, const VectorXd& b, const SolverOptions& opts) {
    const Index m = a.rows();
    const Index p = a.cols();
    const Index n2 = 2 * p;

    LpSolution out;
    auto mat_vec = [&](const VectorXd& x) -> VectorXd {
        return a * (x.head(p) - x.tail(p));
    };
    auto tr_mat_vec = [&](const VectorXd& nu) -> VectorXd {
        VectorXd g(n2);
        g.head(p) = a.transpose() * nu;
        g.tail(p) = -g.head(p);
        return g;
    };

    // Starting point: least-norm primal shifted positive; G c = 0 makes the
    // dual start nu = 0, z = 1 exactly feasible.
    VectorXd x(n2), z(n2), nu = VectorXd::Zero(m);
    {
        Eigen::LDLT<MatrixXd> gram(MatrixXd(2.0 * (a * a.transpose())));
        const VectorXd w = gram.solve(b);
        VectorXd x0(n2);
        x0.head(p) = a.transpose() * w;
        x0.tail(p) = -x0.head(p);
        const double dx = std::max(-1.5 * x0.minCoeff(), 0.0) + 0.1;
        x = x0.array() + dx;
        z = VectorXd::Ones(n2);
        if (x.allFinite() && x.minCoeff() > 0.0) {
            const double xz = x.dot(z);
            x.array() += 0.5 * xz / z.sum();
            z.array() += 0.5 * xz / x.sum();
        } else {
            x = VectorXd::Ones(n2) * std::max(1.0, b.lpNorm<Eigen::Infinity>());
        }
    }
    out.x = x;
    out.nu = nu;

    const double bnorm = 1.0 + b.lpNorm<Eigen::Infinity>();
    double mu_prev_window = std::numeric_limits<double>::infinity();
    int stall_count = 0;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        out.iterations = iter;
        if (!x.allFinite() || !z.allFinite() || !nu.allFinite()) {
            out.stalled = true;
            return out;
        }
        const VectorXd r_p = b - mat_vec(x);
        const VectorXd r_d = VectorXd::Ones(n2) - tr_mat_vec(nu) - z;
        const double mu = x.dot(z) / static_cast<double>(n2);
        const double cx = x.sum();
        const double bnu = b.dot(nu);
        const double gap = std::abs(cx - bnu) / (1.0 + std::abs(cx));
        const double pinf = r_p.lpNorm<Eigen::Infinity>() / bnorm;
        const double dinf = r_d.lpNorm<Eigen::Infinity>() / 2.0;

        out.x = x;
        out.nu = nu;
        out.gap = gap;
        out.pinf = pinf;

        if (pinf <= opts.feas_tol && dinf <= opts.feas_tol && gap <= opts.gap_tol) {
            out.converged = true;
            return out;
        }

        // Stall detection over a short window.
        if (iter > 0 && iter % 8 == 0) {
            if (mu > 0.7 * mu_prev_window) {
                ++stall_count;
                if (stall_count >= 2) {
                    out.stalled = true;
                    return out;
                }
            } else {
                stall_count = 0;
            }
            mu_prev_window = mu;
        }

        const VectorXd d = x.cwiseQuotient(z);
        MatrixXd normal = a * (d.head(p) + d.tail(p)).asDiagonal() * a.transpose();

        Eigen::LLT<MatrixXd> chol;
        double ridge = 0.0;
        for (int attempt = 0; attempt < 6; ++attempt) {
            chol.compute(normal + ridge * MatrixXd::Identity(m, m));
            if (chol.info() == Eigen::Success) break;
            ridge = (ridge == 0.0) ? 1e-12 * normal.trace() / static_cast<double>(m) : ridge * 100.0;
        }
        if (chol.info() != Eigen::Success) {
            out.stalled = true;
            return out;
        }

        auto solve_step = [&](const VectorXd& r_xz, VectorXd& dx, VectorXd& dnu, VectorXd& dz) {
            const VectorXd t = r_xz.cwiseQuotient(z);
            const VectorXd rhs = r_p - mat_vec(t) + mat_vec(d.cwiseProduct(r_d));
            dnu = chol.solve(rhs);
            dz = r_d - tr_mat_vec(dnu);
            dx = t - d.cwiseProduct(dz);
        };

        auto max_step = [&](const VectorXd& v, const VectorXd& dv) {
            double alpha = 1.0;
            for (Index i = 0; i < v.size(); ++i) {
                if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
            }
            return alpha;
        };

        // Predictor.
        VectorXd dx_a, dnu_a, dz_a;
        solve_step(-x.cwiseProduct(z), dx_a, dnu_a, dz_a);
        const double ap_a = max_step(x, dx_a);
        const double ad_a = max_step(z, dz_a);
        const double mu_aff = (x + ap_a * dx_a).dot(z + ad_a * dz_a) / static_cast<double>(n2);
        const double sigma = std::pow(mu_aff / mu, 3);

        // Corrector.
        VectorXd dx, dnu, dz;
        const VectorXd r_xz = (-x.array() * z.array() - dx_a.array() * dz_a.array() + sigma * mu).matrix();
        solve_step(r_xz, dx, dnu, dz);

        const double tau = 0.99995;
        const double ap = std::min(1.0, tau * max_step(x, dx));
        const double ad = std::min(1.0, tau * max_step(z, dz));
        if (ap < 1e-10 && ad < 1e-10) {
            out.stalled = true;
            return out;
        }

        x += ap * dx;
        nu += ad * dnu;
        z += ad * dz;
    }
    return out;  // hit max_iter; best iterate is in out
}

// Dense revised simplex with an explicit basis inverse, two phases and
// Bland's rule after degenerate stretches. Sizes here are small (rows in the
// low hundreds), so an explicit inverse with periodic refactorization is the
// simple and adequate choice. The scalar type is a template parameter:
// recovery instances can have distinct vertices separated by ~1e-12 in
// objective (a spike splitting onto its grid neighbours costs almost no l1
// mass), so the production path prices in long double.
struct SimplexOutcome {
    VectorXd x;
    VectorXd nu;
    double objective = 0.0;
    SolveStatus status = SolveStatus::NumericalFailure;
    int iterations = 0;
};

template <class Scalar>
class RevisedSimplex {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    static constexpr Scalar kEps = Eigen::NumTraits<Scalar>::epsilon();

public:
    RevisedSimplex(Mat g, Vec b, Vec cost)
        : g_(std::move(g)), b_(std::move(b)), cost_(std::move(cost)), m_(g_.rows()), n_(g_.cols()) {}

    SimplexOutcome run(int max_iter) {
        SimplexOutcome out;

        // Phase I: flip rows to b >= 0, start from the artificial basis.
        Mat g = g_;
        Vec b = b_;
        for (Index i = 0; i < m_; ++i) {
            if (b(i) < Scalar(0)) {
                b(i) = -b(i);
                g.row(i) = -g.row(i);
            }
        }
        work_ = Mat(m_, n_ + m_);
        work_.leftCols(n_) = g;
        work_.rightCols(m_) = Mat::Identity(m_, m_);
        rhs_ = b;

        basis_.resize(static_cast<std::size_t>(m_));
        for (Index i = 0; i < m_; ++i) basis_[static_cast<std::size_t>(i)] = n_ + i;
        binv_ = Mat::Identity(m_, m_);
        xb_ = rhs_;

        Vec phase1_cost = Vec::Zero(n_ + m_);
        phase1_cost.tail(m_).setOnes();
        int used = 0;
        if (!iterate(phase1_cost, /*allow_artificial_entering=*/false, max_iter, used)) {
            out.iterations = used;
            return out;
        }
        out.iterations = used;
        const Scalar phase1_obj = objective_of(phase1_cost);
        if (phase1_obj > Scalar(1e-7) * (Scalar(1) + b.template lpNorm<Eigen::Infinity>())) {
            out.status = SolveStatus::Infeasible;
            return out;
        }
        drive_out_artificials();

        // Phase II.
        Vec phase2_cost = Vec::Zero(n_ + m_);
        phase2_cost.head(n_) = cost_;
        int used2 = 0;
        if (!iterate(phase2_cost, false, max_iter, used2)) {
            out.iterations += used2;
            return out;
        }
        out.iterations += used2;

        refactorize();
        if (broken_) return out;
        Vec x = Vec::Zero(n_);
        for (Index i = 0; i < m_; ++i) {
            const Index j = basis_[static_cast<std::size_t>(i)];
            if (j < n_) x(j) = std::max(xb_(i), Scalar(0));
        }
        Vec nu = accurate_prices(phase2_cost);
        // Undo the phase-I row flips in the dual.
        for (Index i = 0; i < m_; ++i) {
            if (b_(i) < Scalar(0)) nu(i) = -nu(i);
        }
        if (!x.allFinite() || !nu.allFinite()) return out;
        out.x = x.template cast<double>();
        out.nu = nu.template cast<double>();
        out.objective = static_cast<double>(cost_.dot(x));
        out.status = SolveStatus::Optimal;
        return out;
    }

private:
    Scalar objective_of(const Vec& cost) const {
        Scalar obj = 0;
        for (Index i = 0; i < m_; ++i) obj += cost(basis_[static_cast<std::size_t>(i)]) * xb_(i);
        return obj;
    }

    // The explicit eta-updated inverse drives pricing speed; the LU of the
    // current basis backs the accuracy-critical solves (candidate-optimality
    // pricing, final primal/dual extraction), each with one refinement step.
    void refactorize() {
        Mat basis_mat(m_, m_);
        for (Index i = 0; i < m_; ++i) basis_mat.col(i) = work_.col(basis_[static_cast<std::size_t>(i)]);
        lu_.compute(basis_mat);
        basis_lu_ = basis_mat;
        binv_ = lu_.inverse();
        xb_ = lu_.solve(rhs_);
        if (!binv_.allFinite() || !xb_.allFinite()) {
            broken_ = true;  // numerically singular basis
            return;
        }
        const Vec correction = lu_.solve(rhs_ - basis_lu_ * xb_);
        xb_ += correction;
    }

    // Solve B' y = c_B against the fresh factorization.
    Vec accurate_prices(const Vec& cost) {
        Vec cb(m_);
        for (Index i = 0; i < m_; ++i) cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
        Vec y = lu_.transpose().solve(cb);
        const Vec correction = lu_.transpose().solve(cb - basis_lu_.transpose() * y);
        y += correction;
        return y;
    }

    bool in_basis(Index j) const {
        return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
    }

    void drive_out_artificials() {
        for (Index i = 0; i < m_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < n_) continue;
            for (Index j = 0; j < n_; ++j) {
                if (in_basis(j)) continue;
                const Scalar piv = binv_.row(i) * work_.col(j);
                if (std::abs(piv) > Scalar(1e-7)) {
                    pivot(i, j, binv_ * work_.col(j));
                    break;
                }
            }
            // A row with no usable pivot is dependent; the artificial stays
            // basic at zero and never re-enters with positive value.
        }
        refactorize();
    }

    void pivot(Index row, Index entering, const Vec& w) {
        const Scalar piv = w(row);
        binv_.row(row) /= piv;
        xb_(row) /= piv;
        for (Index i = 0; i < m_; ++i) {
            if (i == row) continue;
            const Scalar f = w(i);
            if (f != Scalar(0)) {
                binv_.row(i) -= f * binv_.row(row);
                xb_(i) -= f * xb_(row);
            }
        }
        basis_[static_cast<std::size_t>(row)] = entering;
    }

    Index find_entering(const Vec& cost, const Vec& y, bool allow_artificial_entering,
                        bool bland, Scalar rc_tol) const {
        Index entering = -1;
        Scalar best = -rc_tol;
        const Index limit = allow_artificial_entering ? n_ + m_ : n_;
        for (Index j = 0; j < limit; ++j) {
            if (in_basis(j)) continue;
            const Scalar rc = cost(j) - y.dot(work_.col(j));
            if (bland) {
                if (rc < -rc_tol) return j;
            } else if (rc < best) {
                best = rc;
                entering = j;
            }
        }
        return entering;
    }

    bool iterate(const Vec& cost, bool allow_artificial_entering, int max_iter, int& used) {
        // Fast pricing against the eta-updated inverse uses a loose
        // tolerance; candidate optima are re-priced against a fresh
        // factorization at close to working precision before being believed.
        const Scalar rc_tol_fast = Scalar(1e7) * kEps;
        int degenerate_run = 0;
        for (used = 0; used < max_iter; ++used) {
            if (used > 0 && used % 32 == 0) refactorize();
            if (broken_) return false;

            Vec cb(m_);
            for (Index i = 0; i < m_; ++i) cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
            const Vec y = binv_.transpose() * cb;
            if (!y.allFinite()) {
                broken_ = true;
                return false;
            }

            const bool bland = degenerate_run > 50;
            Index entering = find_entering(cost, y, allow_artificial_entering, bland, rc_tol_fast);
            if (entering < 0) {
                refactorize();
                if (broken_) return false;
                const Vec y_acc = accurate_prices(cost);
                const Scalar rc_tol_exact =
                    Scalar(1e4) * kEps * (Scalar(1) + y_acc.template lpNorm<Eigen::Infinity>());
                entering = find_entering(cost, y_acc, allow_artificial_entering, bland, rc_tol_exact);
                if (entering < 0) return true;  // optimal
            }

            const Vec w = binv_ * work_.col(entering);
            Index leaving = -1;
            Scalar min_ratio = std::numeric_limits<Scalar>::infinity();
            const Scalar piv_tol = Scalar(1e5) * kEps;
            const Scalar tie_tol = Scalar(1e4) * kEps;
            for (Index i = 0; i < m_; ++i) {
                if (w(i) > piv_tol) {
                    const Scalar ratio = xb_(i) / w(i);
                    if (ratio < min_ratio - tie_tol ||
                        (ratio < min_ratio + tie_tol && leaving >= 0 &&
                         basis_[static_cast<std::size_t>(i)] > basis_[static_cast<std::size_t>(leaving)])) {
                        min_ratio = ratio;
                        leaving = i;
                    }
                }
            }
            if (leaving < 0) return false;  // unbounded; cannot happen for l1 objectives

            degenerate_run = (min_ratio < tie_tol) ? degenerate_run + 1 : 0;
            pivot(leaving, entering, w);
        }
        return false;  // iteration cap
    }

    Mat g_;
    Vec b_;
    Vec cost_;
    Index m_;
    Index n_;
    Mat work_;
    Vec rhs_;
    std::vector<Index> basis_;
    Mat binv_;
    Vec xb_;
    Eigen::PartialPivLU<Mat> lu_;
    Mat basis_lu_;          // matrix behind lu_, for refinement residuals
    bool broken_ = false;   // set when a basis turns numerically singular
};

SimplexOutcome run_simplex(const MatrixXd& a, const VectorXd& b, int max_iter) {
    using Ld = long double;
    using MatLd = Eigen::Matrix<Ld, Eigen::Dynamic, Eigen::Dynamic>;
    using VecLd = Eigen::Matrix<Ld, Eigen::Dynamic, 1>;
    const Index p = a.cols();
    MatLd g(a.rows(), 2 * p);
    g.leftCols(p) = a.cast<Ld>();
    g.rightCols(p) = -a.cast<Ld>();
    RevisedSimplex<Ld> simplex(std::move(g), b.cast<Ld>(), VecLd::Ones(2 * p));
    return simplex.run(max_iter);
}

}  // namespace

RecoveryResult solve_bp(const BasisPursuitProblem& prob, const SolverOptions& opts) {
    const Index m = prob.A.rows();
    const Index p = prob.A.cols();
    if (m < 1 || p < 1) throw std::invalid_argument("solve_bp: empty problem");
    if (prob.b.size() != m) throw std::invalid_argument("solve_bp: A/b size mismatch");
    if (!prob.A.allFinite() || !prob.b.allFinite()) {
        throw std::invalid_argument("solve_bp: non-finite input");
    }

    RecoveryResult result;
    result.solution = VectorXd::Zero(p);
    result.dual = VectorXd::Zero(m);

    // The zero observation short-circuits: zero is feasible and l1-minimal.
    if (prob.b.lpNorm<Eigen::Infinity>() == 0.0) {
        result.status = SolveStatus::Optimal;
        return result;
    }

    const Reduced red = reduce_rows(prob.A, prob.b, opts.equilibrate);
    if (!red.feasible) {
        result.status = SolveStatus::Infeasible;
        result.residual_norm = 1.0;
        return result;
    }

    auto finish = [&](const VectorXd& split_x, const VectorXd& nu_reduced, int iterations,
                      double gap, bool gap_ok) {
        const VectorXd y = split_x.head(p) - split_x.tail(p);
        result.solution = y;
        result.objective = y.lpNorm<1>();
        result.iterations = iterations;
        result.duality_gap = gap;
        result.residual_norm = (prob.A * y - prob.b).norm() / (1.0 + prob.b.norm());
        result.dual = VectorXd::Zero(m);
        for (std::size_t i = 0; i < red.kept.size(); ++i) {
            result.dual(red.kept[i]) = red.scale(static_cast<Index>(i)) * nu_reduced(static_cast<Index>(i));
        }
        const bool feas_ok = result.residual_norm <= opts.feas_tol;
        result.status = (feas_ok && gap_ok) ? SolveStatus::Optimal : SolveStatus::MaxIterations;
    };

    // A vertex basis can be far worse conditioned than the support columns
    // alone (it pads the support with degenerate zero columns), so once the
    // simplex has identified the support, the weights are re-solved by least
    // squares on the rectangular support submatrix. The solve runs against
    // the raw rows with unit-scaled columns: row equilibration balances the
    // LP, but the raw least-squares system conditions better here.
    auto polish_support = [&](VectorXd y) -> VectorXd {
        const double ymax = y.cwiseAbs().maxCoeff();
        std::vector<Index> support;
        for (Index j = 0; j < p; ++j) {
            if (std::abs(y(j)) > std::max(1e-10, 1e-9 * ymax)) support.push_back(j);
        }
        if (support.empty() || static_cast<Index>(support.size()) > prob.A.rows()) return y;
        MatrixXd as(prob.A.rows(), static_cast<Index>(support.size()));
        VectorXd col_scale(static_cast<Index>(support.size()));
        for (std::size_t c = 0; c < support.size(); ++c) {
            const double norm = prob.A.col(support[c]).norm();
            if (norm == 0.0) return y;
            col_scale(static_cast<Index>(c)) = norm;
            as.col(static_cast<Index>(c)) = prob.A.col(support[c]) / norm;
        }
        const auto cod = as.completeOrthogonalDecomposition();
        VectorXd z = cod.solve(prob.b);
        const VectorXd correction = cod.solve(prob.b - as * z);
        z += correction;
        if ((as * z - prob.b).lpNorm<Eigen::Infinity>() >
            1e-10 * (1.0 + prob.b.lpNorm<Eigen::Infinity>())) {
            return y;
        }
        VectorXd polished = VectorXd::Zero(p);
        for (std::size_t c = 0; c < support.size(); ++c) {
            polished(support[c]) = z(static_cast<Index>(c)) / col_scale(static_cast<Index>(c));
        }
        // Rows with small magnitudes matter as much as the dominant ones;
        // re-check the residual against the equilibrated system.
        if ((red.A * polished - red.b).lpNorm<Eigen::Infinity>() >
            1e-9 * (1.0 + red.b.lpNorm<Eigen::Infinity>())) {
            return y;
        }
        const double drift = (polished - y).lpNorm<Eigen::Infinity>();
        if (polished.lpNorm<1>() > y.lpNorm<1>() + 1e-9 * (1.0 + ymax) || drift > 1e-3 * (1.0 + ymax)) {
            return y;
        }
        return polished;
    };

    auto finish_simplex = [&](const SimplexOutcome& sx, int extra_iterations) {
        const VectorXd y = polish_support(sx.x.head(p) - sx.x.tail(p));
        VectorXd split(2 * p);
        split.head(p) = y.cwiseMax(0.0);
        split.tail(p) = (-y).cwiseMax(0.0);
        const double objective = y.lpNorm<1>();
        const double gap = std::abs(objective - red.b.dot(sx.nu)) / (1.0 + std::abs(objective));
        finish(split, sx.nu, extra_iterations + sx.iterations, gap, gap <= 1e-6);
    };
    const int simplex_cap = 60 * static_cast<int>(red.A.rows() + p);

    const bool want_ip = opts.method != SolverOptions::Method::Simplex;
    if (want_ip) {
        const LpSolution ip = interior_point(red.A, red.b, opts);
        // The interior point stops at gap_tol; the simplex pass lands on an
        // exact vertex, which sharpens both the objective and the sparsity
        // pattern and covers stalled runs.
        const bool cleanup = opts.method == SolverOptions::Method::Auto && opts.simplex_cleanup;
        if (cleanup) {
            const SimplexOutcome sx = run_simplex(red.A, red.b, simplex_cap);
            if (sx.status == SolveStatus::Optimal && sx.x.allFinite() &&
                (!ip.converged || sx.objective <= ip.x.sum() + 1e-6 * (1.0 + sx.objective))) {
                finish_simplex(sx, ip.iterations);
                return result;
            }
        }
        finish(ip.x, ip.nu, ip.iterations, ip.gap, ip.gap <= opts.gap_tol);
        if (result.status != SolveStatus::Optimal) {
            result.status = ip.stalled ? SolveStatus::NumericalFailure : SolveStatus::MaxIterations;
        }
        return result;
    }

    const SimplexOutcome sx = run_simplex(red.A, red.b, simplex_cap);
    if (sx.status == SolveStatus::Optimal) {
        finish_simplex(sx, 0);
        return result;
    }
    result.status = sx.status;
    result.iterations = sx.iterations;
    return result;
}

std::pair<DiscreteMeasure, RecoveryResult> solve_gme_on_grid(const MomentVector& observed,
                                                             const FunctionFamily& fam,
                                                             std::span<const double> grid,
                                                             const SolverOptions& opts) {
    if (!observed.family_id().empty() && observed.family_id() != fam.id()) {
        throw std::invalid_argument("solve_gme_on_grid: moment vector was generated by a different family");
    }
    const int n = static_cast<int>(observed.size()) - 1;
    const VandermondeMatrix v = vandermonde(fam, grid, n);

    BasisPursuitProblem prob;
    prob.A = v.stacked_real();
    const std::vector<double> b = observed.stacked_real();
    prob.b = Eigen::Map<const VectorXd>(b.data(), static_cast<Index>(b.size()));

    RecoveryResult result = solve_bp(prob, opts);

    std::vector<Atom> atoms;
    if (result.status == SolveStatus::Optimal || result.status == SolveStatus::MaxIterations) {
        for (Index j = 0; j < result.solution.size(); ++j) {
            if (std::abs(result.solution(j)) > opts.atom_prune_tol) {
                atoms.push_back(Atom{grid[static_cast<std::size_t>(j)], result.solution(j)});
            }
        }
    }
    return {DiscreteMeasure(std::move(atoms), fam.interval()), std::move(result)};
}

}  // namespace minext
