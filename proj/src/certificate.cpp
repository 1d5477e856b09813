#include "minext/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "minext/parallel.hpp"

namespace minext {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Margin left between the scaled vanishing polynomial and 1, so the built
// dual polynomial stays strictly inside the unit band away from its support.
constexpr double kConstructionMargin = 1e-2;

std::vector<double> sorted_support(std::span<const double> support, const Interval& iv) {
    std::vector<double> pts(support.begin(), support.end());
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!iv.contains(pts[i])) throw std::domain_error("certificate: support point outside domain");
        if (i > 0 && pts[i] == pts[i - 1]) {
            throw std::invalid_argument("certificate: duplicate support points");
        }
    }
    return pts;
}

double pick_exclusion_radius(const VerifyOptions& opts, std::span<const double> support,
                             const Interval& iv) {
    if (opts.exclusion_radius > 0.0) return opts.exclusion_radius;
    if (support.size() < 2) return iv.length() / 20.0;
    std::vector<double> pts(support.begin(), support.end());
    std::sort(pts.begin(), pts.end());
    double min_sep = iv.length();
    for (std::size_t i = 1; i < pts.size(); ++i) min_sep = std::min(min_sep, pts[i] - pts[i - 1]);
    return 0.5 * min_sep;
}

template <bool Parallel>
GridScanResult scan_impl(const FunctionFamily& fam, std::span<const double> coeffs,
                         std::span<const double> centers, double radius, int grid_size) {
    if (grid_size < 2) throw std::invalid_argument("grid scan: need at least two points");
    const Interval iv = fam.interval();
    const double step = iv.length() / static_cast<double>(grid_size - 1);

    // Fixed chunking; each chunk records its own maxima and the chunks are
    // folded in index order, so thread count cannot change the result.
    const std::size_t chunk = 2048;
    const std::size_t n_chunks = (static_cast<std::size_t>(grid_size) + chunk - 1) / chunk;
    std::vector<GridScanResult> partial(n_chunks);

    auto run_chunk = [&](std::size_t ci) {
        const std::size_t begin = ci * chunk;
        const std::size_t end = std::min(begin + chunk, static_cast<std::size_t>(grid_size));
        GridScanResult local;
        for (std::size_t i = begin; i < end; ++i) {
            const double x = (i + 1 == static_cast<std::size_t>(grid_size))
                                 ? iv.hi
                                 : iv.lo + step * static_cast<double>(i);
            const double v = std::abs(fam.evaluate_polynomial(coeffs, x));
            local.sup_all = std::max(local.sup_all, v);
            bool excluded = false;
            for (double c : centers) {
                if (std::abs(x - c) <= radius) {
                    excluded = true;
                    break;
                }
            }
            if (!excluded) local.sup_off = std::max(local.sup_off, v);
        }
        partial[ci] = local;
    };

    if constexpr (Parallel) par::for_index(n_chunks, run_chunk);
    else par::for_index_serial(n_chunks, run_chunk);

    GridScanResult out;
    for (const GridScanResult& r : partial) {
        out.sup_all = std::max(out.sup_all, r.sup_all);
        out.sup_off = std::max(out.sup_off, r.sup_off);
    }
    return out;
}

// ---- closed-form vanishing polynomials -----------------------------------
//
// Power, cosine and Laplace systems are all polynomial systems in a strictly
// monotone coordinate t(x) (identity, cos(pi x), exp(-x)), so a nonnegative
// generalized polynomial vanishing exactly at the support is a product of
// squared linear factors at interior points plus simple sign-safe factors at
// interval endpoints, expanded in the t-monomial basis.

std::vector<double> poly_multiply(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// Monomial coefficients in y to Chebyshev-T coefficients:
// y^m = 2^{1-m} sum'_{j = m, m-2, ...} C(m, (m-j)/2) T_j(y), j = 0 term halved.
std::vector<double> monomial_to_chebyshev(const std::vector<double>& mono) {
    std::vector<double> cheb(mono.size(), 0.0);
    for (std::size_t m = 0; m < mono.size(); ++m) {
        const double bm = mono[m];
        if (bm == 0.0) continue;
        const double base = std::ldexp(1.0, 1 - static_cast<int>(m));  // 2^{1-m}
        for (int j = static_cast<int>(m); j >= 0; j -= 2) {
            double w = base * binomial(static_cast<int>(m), (static_cast<int>(m) - j) / 2);
            if (j == 0) w *= 0.5;
            cheb[static_cast<std::size_t>(j)] += bm * w;
        }
    }
    return cheb;
}

struct MonotoneMap {
    double t_lo;  // image of interval.lo
    double t_hi;  // image of interval.hi
    double (*map)(double);
};

// Vanishing polynomial in family-basis coefficients, for the closed-form
// families. Interior support points contribute squared factors, endpoint
// points a single factor oriented to stay nonnegative over the image of I.
std::vector<double> vanishing_poly_coeffs(const FunctionFamily& fam,
                                          const std::vector<double>& support) {
    const Interval iv = fam.interval();
    MonotoneMap mm{};
    switch (fam.kind()) {
        case FamilyKind::Power:
            mm = {iv.lo, iv.hi, [](double x) { return x; }};
            break;
        case FamilyKind::Cosine:
            mm = {1.0, -1.0, [](double x) { return std::cos(std::numbers::pi * x); }};
            break;
        case FamilyKind::Laplace:
            mm = {std::exp(-iv.lo), std::exp(-iv.hi), [](double x) { return std::exp(-x); }};
            break;
        default:
            throw std::logic_error("vanishing_poly_coeffs: not a closed-form family");
    }
    const double t_min = std::min(mm.t_lo, mm.t_hi);
    const double t_max = std::max(mm.t_lo, mm.t_hi);

    std::vector<double> q{1.0};
    for (double x : support) {
        const double t = mm.map(x);
        if (iv.is_interior(x)) {
            q = poly_multiply(q, poly_multiply({-t, 1.0}, {-t, 1.0}));
        } else if (t == t_min) {
            q = poly_multiply(q, {-t_min, 1.0});  // (t - t_min) >= 0
        } else {
            q = poly_multiply(q, {t_max, -1.0});  // (t_max - t) >= 0
        }
    }
    if (fam.kind() == FamilyKind::Cosine) q = monomial_to_chebyshev(q);
    return q;
}

// ---- closed-form Gram matrices --------------------------------------------

MatrixXd gram_matrix(const FunctionFamily& fam, int n) {
    MatrixXd g(n + 1, n + 1);
    switch (fam.kind()) {
        case FamilyKind::Cosine:
            g.setZero();
            g(0, 0) = 1.0;
            for (int k = 1; k <= n; ++k) g(k, k) = 0.5;
            return g;
        case FamilyKind::Power:
            for (int j = 0; j <= n; ++j) {
                for (int k = 0; k <= n; ++k) {
                    g(j, k) = ((j + k) % 2 == 0) ? 2.0 / static_cast<double>(j + k + 1) : 0.0;
                }
            }
            return g;
        case FamilyKind::Laplace:
            for (int j = 0; j <= n; ++j) {
                for (int k = 0; k <= n; ++k) {
                    const int s = j + k;
                    g(j, k) = (s == 0) ? 2.0 : (std::exp(s) - std::exp(-s)) / static_cast<double>(s);
                }
            }
            return g;
        default:
            throw std::invalid_argument("l2 interpolant: no closed-form Gram matrix for this family");
    }
}

VectorXd kernel_least_gram(const MatrixXd& c, const VectorXd& d, const MatrixXd& gram,
                           bool capacity_exceeded) {
    // Min-norm feasible point and kernel of the constraint matrix.
    Eigen::JacobiSVD<MatrixXd> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    const double tol = std::max(1e-13 * smax, 1e-300);
    Index rank = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) > tol) ++rank;
    }
    VectorXd a_p = VectorXd::Zero(c.cols());
    {
        const VectorXd utd = svd.matrixU().transpose() * d;
        for (Index i = 0; i < rank; ++i) {
            a_p += (utd(i) / svd.singularValues()(i)) * svd.matrixV().col(i);
        }
    }
    const double resid = (c * a_p - d).lpNorm<Eigen::Infinity>();
    if (resid > 1e-8 * (1.0 + d.lpNorm<Eigen::Infinity>())) {
        if (capacity_exceeded) {
            throw std::invalid_argument("l2 interpolant: constraint count exceeds capacity n+1");
        }
        throw std::runtime_error("l2 interpolant: singular constraint system");
    }

    const Index kdim = c.cols() - rank;
    if (kdim == 0) return a_p;
    const MatrixXd nbasis = svd.matrixV().rightCols(kdim);

    const MatrixXd reduced = nbasis.transpose() * gram * nbasis;
    const VectorXd rhs = -nbasis.transpose() * (gram * a_p);
    Eigen::LDLT<MatrixXd> ldlt(reduced);
    if (ldlt.info() != Eigen::Success) {
        throw std::runtime_error("l2 interpolant: singular reduced system");
    }
    const VectorXd z = ldlt.solve(rhs);
    if (!z.allFinite()) throw std::runtime_error("l2 interpolant: singular reduced system");
    return a_p + nbasis * z;
}

}  // namespace

GridScanResult scan_certificate_grid(const FunctionFamily& fam, std::span<const double> coefficients,
                                     std::span<const double> exclusion_centers, double exclusion_radius,
                                     int grid_size) {
    return scan_impl<true>(fam, coefficients, exclusion_centers, exclusion_radius, grid_size);
}

GridScanResult scan_certificate_grid_serial(const FunctionFamily& fam,
                                            std::span<const double> coefficients,
                                            std::span<const double> exclusion_centers,
                                            double exclusion_radius, int grid_size) {
    return scan_impl<false>(fam, coefficients, exclusion_centers, exclusion_radius, grid_size);
}

DualCertificate verify_dual_polynomial(std::span<const double> coefficients,
                                       const FunctionFamily& fam,
                                       std::span<const SupportSign> support,
                                       const VerifyOptions& opts) {
    if (fam.is_complex_valued()) {
        throw std::invalid_argument("verify_dual_polynomial: complex-valued families are not certified");
    }
    if (coefficients.empty() || coefficients.size() > fam.size()) {
        throw std::invalid_argument("verify_dual_polynomial: coefficient count out of range");
    }

    DualCertificate cert;
    cert.coefficients.assign(coefficients.begin(), coefficients.end());
    cert.family_id = fam.id();
    cert.support.assign(support.begin(), support.end());
    std::sort(cert.support.begin(), cert.support.end(),
              [](const SupportSign& a, const SupportSign& b) { return a.location < b.location; });

    std::vector<double> locations;
    locations.reserve(cert.support.size());
    for (const SupportSign& s : cert.support) {
        if (s.sign != 1 && s.sign != -1) {
            throw std::invalid_argument("verify_dual_polynomial: signs must be +1 or -1");
        }
        if (!fam.interval().contains(s.location)) {
            throw std::domain_error("verify_dual_polynomial: support point outside domain");
        }
        if (!locations.empty() && locations.back() == s.location) {
            throw std::invalid_argument("verify_dual_polynomial: duplicate support points");
        }
        locations.push_back(s.location);
    }

    double interp = 0.0;
    for (const SupportSign& s : cert.support) {
        const double v = fam.evaluate_polynomial(coefficients, s.location);
        interp = std::max(interp, std::abs(v - static_cast<double>(s.sign)));
    }
    cert.report.max_interp_residual = interp;

    const double radius = pick_exclusion_radius(opts, locations, fam.interval());
    const GridScanResult scan =
        scan_certificate_grid(fam, coefficients, locations, radius, opts.grid_size);
    cert.report.grid_sup_norm = scan.sup_all;
    cert.report.off_support_margin = 1.0 - scan.sup_off;

    const int n = static_cast<int>(coefficients.size()) - 1;
    cert.report.vandermonde_full_rank =
        locations.empty() || has_full_column_rank(vandermonde(fam, locations, n));

    cert.report.verified = interp <= opts.interp_tol &&
                           scan.sup_all <= 1.0 + opts.sup_tol &&
                           cert.report.off_support_margin >= opts.margin_tol &&
                           cert.report.vandermonde_full_rank;
    return cert;
}

DualCertificate build_nonnegative_dual(const FunctionFamily& fam, std::span<const double> support,
                                       int n, const VerifyOptions& opts) {
    if (fam.is_complex_valued()) {
        throw std::invalid_argument("build_nonnegative_dual: complex-valued families are not certified");
    }
    if (support.empty()) {
        throw std::invalid_argument("build_nonnegative_dual: empty support");
    }
    if (n < 0 || static_cast<std::size_t>(n) + 1 > fam.size()) {
        throw std::invalid_argument("build_nonnegative_dual: n exceeds family size");
    }
    const std::vector<double> pts = sorted_support(support, fam.interval());
    if (index_of(pts, fam.interval()) > n) {
        throw std::invalid_argument("build_nonnegative_dual: index of support exceeds n");
    }

    std::vector<double> q;
    const bool closed_form = fam.kind() == FamilyKind::Power || fam.kind() == FamilyKind::Cosine ||
                             fam.kind() == FamilyKind::Laplace;
    if (closed_form) {
        q = vanishing_poly_coeffs(fam, pts);
        q.resize(static_cast<std::size_t>(n) + 1, 0.0);
    } else {
        // Least-squares fit of the squared-factor profile under homogeneous
        // vanishing constraints; the fit only proposes, verification decides.
        const Interval iv = fam.interval();
        const int fit_size = 2001;
        auto profile = [&](double x) {
            double g = 1.0;
            for (double s : pts) {
                if (iv.is_interior(s)) {
                    g *= (x - s) * (x - s);
                } else if (s == iv.lo) {
                    g *= (x - iv.lo);
                } else {
                    g *= (iv.hi - x);
                }
            }
            return g;
        };
        MatrixXd f(fit_size, n + 1);
        VectorXd g(fit_size);
        for (int i = 0; i < fit_size; ++i) {
            const double x = iv.lo + iv.length() * static_cast<double>(i) / (fit_size - 1);
            for (int k = 0; k <= n; ++k) f(i, k) = fam.evaluate_real(k, x);
            g(i) = profile(x);
        }
        g /= g.cwiseAbs().maxCoeff();

        std::vector<Index> interior;
        MatrixXd cons(0, n + 1);
        std::vector<Eigen::RowVectorXd> rows;
        for (double s : pts) {
            Eigen::RowVectorXd row(n + 1);
            for (int k = 0; k <= n; ++k) row(k) = fam.evaluate_real(k, s);
            rows.push_back(row);
            if (iv.is_interior(s)) {
                Eigen::RowVectorXd drow(n + 1);
                for (int k = 0; k <= n; ++k) drow(k) = fam.derivative_real(k, s);
                rows.push_back(drow);
            }
        }
        MatrixXd e(static_cast<Index>(rows.size()), n + 1);
        for (std::size_t i = 0; i < rows.size(); ++i) e.row(static_cast<Index>(i)) = rows[i];

        // Constraints are homogeneous, so the feasible set is ker(e); fit g
        // inside that kernel.
        Eigen::JacobiSVD<MatrixXd> svd(e, Eigen::ComputeFullV);
        const double smax = svd.singularValues()(0);
        Index rank = 0;
        for (Index i = 0; i < svd.singularValues().size(); ++i) {
            if (svd.singularValues()(i) > 1e-12 * smax) ++rank;
        }
        const Index kdim = (n + 1) - rank;
        DualCertificate failed;
        failed.family_id = fam.id();
        for (double s : pts) failed.support.push_back(SupportSign{s, 1});
        if (kdim == 0) return failed;  // no vanishing polynomial in the span

        const MatrixXd nbasis = svd.matrixV().rightCols(kdim);
        const VectorXd z = (f * nbasis).colPivHouseholderQr().solve(g);
        VectorXd qv = nbasis * z;
        const double qmin = (f * qv).minCoeff();
        const double qmax = (f * qv).cwiseAbs().maxCoeff();
        if (qmax <= 0.0 || qmin < -1e-10 * qmax) {
            // Try the flipped orientation before giving up.
            qv = -qv;
            const double qmin2 = (f * qv).minCoeff();
            if (qmin2 < -1e-10 * qmax) return failed;
        }
        q.assign(qv.data(), qv.data() + qv.size());
    }

    std::vector<double> no_exclusion;
    const double qmax =
        scan_certificate_grid(fam, q, no_exclusion, 0.0, opts.grid_size).sup_all;
    if (!(qmax > 0.0)) {
        throw std::runtime_error("build_nonnegative_dual: degenerate vanishing polynomial");
    }
    const double c = (1.0 - kConstructionMargin) / qmax;

    std::vector<double> p(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) p[k] = -c * q[k];
    p[0] += 1.0;

    std::vector<SupportSign> signs;
    signs.reserve(pts.size());
    for (double s : pts) signs.push_back(SupportSign{s, 1});
    return verify_dual_polynomial(p, fam, signs, opts);
}

DualCertificate build_l2_sign_interpolant(const FunctionFamily& fam, const JordanSupport& jordan,
                                          int n, const VerifyOptions& opts) {
    if (fam.is_complex_valued()) {
        throw std::invalid_argument("build_l2_sign_interpolant: complex-valued families are not certified");
    }
    if (n < 0 || static_cast<std::size_t>(n) + 1 > fam.size()) {
        throw std::invalid_argument("build_l2_sign_interpolant: n exceeds family size");
    }
    const std::vector<double> pts = jordan.united();
    const std::vector<int> signs = jordan.signs();
    if (pts.empty()) throw std::invalid_argument("build_l2_sign_interpolant: empty support");
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i] == pts[i - 1]) {
            throw std::invalid_argument("build_l2_sign_interpolant: plus/minus sets overlap");
        }
    }
    const Interval iv = fam.interval();
    for (double x : pts) {
        if (!iv.contains(x)) throw std::domain_error("build_l2_sign_interpolant: point outside domain");
    }

    std::size_t n_rows = pts.size();
    for (double x : pts) {
        if (iv.is_interior(x)) ++n_rows;
    }
    const bool capacity_exceeded = n_rows > static_cast<std::size_t>(n) + 1;

    MatrixXd c(static_cast<Index>(n_rows), n + 1);
    VectorXd d(static_cast<Index>(n_rows));
    Index row = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (int k = 0; k <= n; ++k) c(row, k) = fam.evaluate_real(k, pts[i]);
        d(row) = static_cast<double>(signs[i]);
        ++row;
    }
    for (double x : pts) {
        if (!iv.is_interior(x)) continue;  // endpoint extrema need no vanishing derivative
        for (int k = 0; k <= n; ++k) c(row, k) = fam.derivative_real(k, x);
        d(row) = 0.0;
        ++row;
    }

    const MatrixXd gram = gram_matrix(fam, n);
    const VectorXd a = kernel_least_gram(c, d, gram, capacity_exceeded);

    std::vector<double> coeffs(a.data(), a.data() + a.size());
    std::vector<SupportSign> ss;
    ss.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) ss.push_back(SupportSign{pts[i], signs[i]});
    return verify_dual_polynomial(coeffs, fam, ss, opts);
}

bool check_weak_nullspace_instance(const FunctionFamily& fam, int n, const JordanSupport& jordan) {
    try {
        return build_l2_sign_interpolant(fam, jordan, n).report.verified;
    } catch (const std::exception&) {
        return false;
    }
}

double delta_degree_bound(double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta_degree_bound: delta must be positive");
    if (delta > 2.0) throw std::invalid_argument("delta_degree_bound: delta exceeds the interval length");
    const double base = std::sqrt(std::numbers::e) / delta;
    const double expo = 2.5 + 1.0 / delta;
    return (2.0 / std::sqrt(std::numbers::pi)) * std::pow(base, expo);
}

}  // namespace minext
