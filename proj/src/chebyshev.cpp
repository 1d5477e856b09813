#include "minext/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace minext {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kPi = std::numbers::pi;

// Maximize f over [lo, hi] by golden-section search, comparing against both
// bracket endpoints. f is unimodal on a refined extremum bracket.
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    double best_x = (f1 > f2) ? x1 : x2;
    double best_f = std::max(f1, f2);
    for (double e : {lo, hi}) {
        const double fe = f(e);
        if (fe > best_f) {
            best_f = fe;
            best_x = e;
        }
    }
    return {best_x, best_f};
}

}  // namespace

double classical_T(int k, double x) {
    if (k < 0) throw std::invalid_argument("classical_T: negative degree");
    if (x < -1.0 - 1e-12 || x > 1.0 + 1e-12) {
        throw std::domain_error("classical_T: argument outside [-1,1]");
    }
    x = std::clamp(x, -1.0, 1.0);
    if (k == 0) return 1.0;
    double prev = 1.0, cur = x;
    for (int i = 2; i <= k; ++i) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

JordanSupport extrema_sets(int k) {
    if (k < 1) throw std::invalid_argument("extrema_sets: k must be >= 1");
    JordanSupport j;
    for (int i = 0; i <= k; ++i) {
        const double x = std::cos(static_cast<double>(i) * kPi / static_cast<double>(k));
        (i % 2 == 0 ? j.plus : j.minus).push_back(x);  // T_k(cos(i pi / k)) = (-1)^i
    }
    std::sort(j.plus.begin(), j.plus.end());
    std::sort(j.minus.begin(), j.minus.end());
    return j;
}

ChebyshevResult generalized_chebyshev(const FunctionFamily& fam, int k, const RemezOptions& opts) {
    if (fam.is_complex_valued()) {
        throw std::invalid_argument("generalized_chebyshev: complex-valued families are not supported");
    }
    if (k < 1 || k > fam.max_order()) {
        throw std::invalid_argument("generalized_chebyshev: k out of range");
    }
    const Interval iv = fam.interval();

    ChebyshevResult result;

    // Reference: extrema of classical T_k mapped affinely onto the interval.
    std::vector<double> ref(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) {
        const double z = std::cos(static_cast<double>(k - i) * kPi / static_cast<double>(k));
        ref[static_cast<std::size_t>(i)] = iv.lo + 0.5 * (z + 1.0) * iv.length();
    }

    const int grid_n = opts.grid_size;
    std::vector<double> grid(static_cast<std::size_t>(grid_n));
    for (int i = 0; i < grid_n; ++i) {
        grid[static_cast<std::size_t>(i)] =
            (i + 1 == grid_n) ? iv.hi : iv.lo + iv.length() * static_cast<double>(i) / (grid_n - 1);
    }

    VectorXd approx_coeffs = VectorXd::Zero(k);  // a_0..a_{k-1}
    double levelled = 0.0;

    auto error_at = [&](double x) {
        double e = fam.evaluate_real(k, x);
        for (int j = 0; j < k; ++j) e -= approx_coeffs(j) * fam.evaluate_real(j, x);
        return e;
    };

    // Levelled interpolation on a reference; one refinement step keeps the
    // coefficients accurate when the alternation system is ill-conditioned.
    auto solve_levelled = [&](const std::vector<double>& points) -> bool {
        MatrixXd sys(k + 1, k + 1);
        VectorXd rhs(k + 1);
        for (int i = 0; i <= k; ++i) {
            const double x = points[static_cast<std::size_t>(i)];
            for (int j = 0; j < k; ++j) sys(i, j) = fam.evaluate_real(j, x);
            sys(i, k) = (i % 2 == 0) ? 1.0 : -1.0;
            rhs(i) = fam.evaluate_real(k, x);
        }
        Eigen::FullPivLU<MatrixXd> lu(sys);
        if (!lu.isInvertible()) return false;
        VectorXd sol = lu.solve(rhs);
        const VectorXd correction = lu.solve(rhs - sys * sol);
        sol += correction;
        approx_coeffs = sol.head(k);
        levelled = sol(k);
        return true;
    };

    // When the best error is tiny relative to the coefficient scale, rounding
    // noise in the error evaluation caps the reachable levelled ratio; accept
    // the best reference once the exchange stops improving inside that floor.
    double best_ratio = std::numeric_limits<double>::infinity();
    std::vector<double> best_ref = ref;
    int stagnation = 0;

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        result.iterations = iter + 1;

        if (!solve_levelled(ref)) {
            result.status = RemezStatus::NumericalFailure;
            result.alternation_points = ref;
            return result;
        }

        // Sign runs of the error over the grid; one extremum per run.
        struct Extremum {
            double x;
            double value;
        };
        std::vector<Extremum> extrema;
        int run_sign = 0;
        std::size_t run_arg = 0;
        double run_best = 0.0;
        std::vector<double> evals(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) evals[i] = error_at(grid[i]);
        auto flush_run = [&](std::size_t end_index) {
            if (run_sign == 0) return;
            const double lo_b = (run_arg == 0) ? grid.front() : grid[run_arg - 1];
            const double hi_b = (run_arg + 1 >= grid.size()) ? grid.back() : grid[run_arg + 1];
            const int s = run_sign;
            auto [x, v] = golden_max([&](double t) { return s * error_at(t); }, lo_b, hi_b);
            (void)end_index;
            extrema.push_back({x, s * v});
        };
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const int s = (evals[i] > 0.0) ? 1 : (evals[i] < 0.0 ? -1 : 0);
            if (s == 0) continue;
            if (s != run_sign) {
                flush_run(i);
                run_sign = s;
                run_arg = i;
                run_best = std::abs(evals[i]);
            } else if (std::abs(evals[i]) > run_best) {
                run_best = std::abs(evals[i]);
                run_arg = i;
            }
        }
        flush_run(grid.size());

        if (extrema.size() < static_cast<std::size_t>(k) + 1) {
            result.status = RemezStatus::NumericalFailure;
            result.alternation_points = ref;
            return result;
        }
        while (extrema.size() > static_cast<std::size_t>(k) + 1) {
            if (std::abs(extrema.front().value) <= std::abs(extrema.back().value)) {
                extrema.erase(extrema.begin());
            } else {
                extrema.pop_back();
            }
        }
        for (std::size_t i = 1; i < extrema.size(); ++i) {
            if ((extrema[i].value > 0) == (extrema[i - 1].value > 0)) {
                result.status = RemezStatus::NumericalFailure;
                result.alternation_points = ref;
                return result;
            }
        }

        double sup = 0.0;
        for (const Extremum& e : extrema) sup = std::max(sup, std::abs(e.value));
        for (std::size_t i = 0; i < extrema.size(); ++i) ref[i] = extrema[i].x;

        if (std::abs(levelled) == 0.0) {
            result.status = RemezStatus::NumericalFailure;
            result.alternation_points = ref;
            return result;
        }
        const double ratio = sup / std::abs(levelled) - 1.0;
        if (ratio <= opts.level_ratio_tol) break;
        if (ratio < best_ratio) {
            if (ratio < 0.5 * best_ratio) stagnation = 0;
            best_ratio = ratio;
            best_ref = ref;
        } else {
            ++stagnation;
        }
        if (stagnation >= 8 && best_ratio <= 1e-6) {
            ref = best_ref;
            break;
        }
        if (iter + 1 == opts.max_iterations) {
            result.status = RemezStatus::NumericalFailure;
            result.alternation_points = ref;
            return result;
        }
    }

    // Re-solve on the converged reference so the coefficients correspond to
    // the reported alternation points, then normalize: unit sup norm,
    // positive value at the right end.
    if (!solve_levelled(ref)) {
        result.status = RemezStatus::NumericalFailure;
        result.alternation_points = ref;
        return result;
    }
    double sup = 0.0;
    for (double x : ref) sup = std::max(sup, std::abs(error_at(x)));
    const double end_value = error_at(iv.hi);
    if (std::abs(end_value) < 1e-12 * sup || sup == 0.0) {
        result.status = RemezStatus::NumericalFailure;
        result.alternation_points = ref;
        return result;
    }
    const double scale = (end_value > 0.0 ? 1.0 : -1.0) / sup;

    result.coefficients.assign(static_cast<std::size_t>(k) + 1, 0.0);
    for (int j = 0; j < k; ++j) result.coefficients[static_cast<std::size_t>(j)] = -scale * approx_coeffs(j);
    result.coefficients[static_cast<std::size_t>(k)] = scale;
    result.alternation_points = ref;
    result.sup_norm = 1.0;
    result.sign_at_right_end = end_value > 0.0 ? 1.0 : -1.0;
    double resid = 0.0;
    for (double x : ref) resid = std::max(resid, std::abs(std::abs(scale * error_at(x)) - 1.0));
    result.equioscillation_residual = resid;
    result.status = RemezStatus::Ok;
    return result;
}

JordanSupport chebyshev_measure_support(const FunctionFamily& fam, int k, const RemezOptions& opts) {
    const ChebyshevResult r = generalized_chebyshev(fam, k, opts);
    if (r.status != RemezStatus::Ok) {
        throw std::runtime_error("chebyshev_measure_support: Remez exchange did not converge");
    }
    JordanSupport j;
    for (double x : r.alternation_points) {
        const double v = fam.evaluate_polynomial(r.coefficients, x);
        (v > 0.0 ? j.plus : j.minus).push_back(x);
    }
    return j;
}

}  // namespace minext
