#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "minext/bp.hpp"
#include "minext/certificate.hpp"
#include "minext/harness.hpp"
#include "minext/rng.hpp"
#include "support/lp_oracle.hpp"

using namespace minext;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("cos(3 pi x) certifies its own extrema pattern") {
    const FunctionFamily fam = FunctionFamily::cosine(3);
    const std::vector<double> coeffs{0.0, 0.0, 0.0, 1.0};
    const std::vector<SupportSign> support{
        {0.0, 1}, {1.0 / 3.0, -1}, {2.0 / 3.0, 1}, {1.0, -1}};
    const DualCertificate cert = verify_dual_polynomial(coeffs, fam, support);
    CHECK(cert.report.max_interp_residual <= 1e-12);
    CHECK(cert.report.grid_sup_norm <= 1.0 + 1e-12);
    CHECK(cert.report.off_support_margin > 1e-9);
    CHECK(cert.report.vandermonde_full_rank);
    CHECK(cert.report.verified);
}

TEST_CASE("a constant 1/2 fails the interpolation condition") {
    const FunctionFamily fam = FunctionFamily::cosine(3);
    const std::vector<double> coeffs{0.5, 0.0, 0.0, 0.0};
    const std::vector<SupportSign> support{{0.25, 1}};
    const DualCertificate cert = verify_dual_polynomial(coeffs, fam, support);
    CHECK_FALSE(cert.report.verified);
    CHECK(cert.report.max_interp_residual == doctest::Approx(0.5));
}

TEST_CASE("scaled quartic verifies after computing its grid maximum") {
    // P = 1 - c (x-0.3)^2 (x+0.4)^2 expanded in monomials; c chosen from the
    // grid maximum of the quartic, then the whole pipeline re-verifies it.
    const FunctionFamily fam = FunctionFamily::power(4);
    // (x-0.3)^2 (x+0.4)^2 = ((x-0.3)(x+0.4))^2 = (x^2 + 0.1x - 0.12)^2
    // = x^4 + 0.2 x^3 - 0.23 x^2 - 0.024 x + 0.0144
    const std::vector<double> quartic{0.0144, -0.024, -0.23, 0.2, 1.0};
    double qmax = 0.0;
    for (int i = 0; i < 10001; ++i) {
        const double x = -1.0 + 2.0 * i / 10000.0;
        qmax = std::max(qmax, fam.evaluate_polynomial(quartic, x));
    }
    const double c = 0.9 / qmax;
    std::vector<double> p(quartic.size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = -c * quartic[k];
    p[0] += 1.0;

    const std::vector<SupportSign> support{{-0.4, 1}, {0.3, 1}};
    const DualCertificate cert = verify_dual_polynomial(p, fam, support);
    CHECK(cert.report.verified);
}

TEST_CASE("nonnegative dual for the power family at +-1/sqrt(2)") {
    const FunctionFamily fam = FunctionFamily::power(4);
    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<double> support{-r, r};
    const DualCertificate cert = build_nonnegative_dual(fam, support, 4);
    REQUIRE(cert.report.verified);
    CHECK(cert.report.max_interp_residual <= 1e-10);

    // Structure check: P = 1 - c (x^2 - 1/2)^2 means coefficients
    // (1 - c/4, 0, c, 0, -c).
    const double c = -cert.coefficients[4];
    CHECK(c > 0.0);
    CHECK(cert.coefficients[0] == doctest::Approx(1.0 - c / 4.0).epsilon(1e-10));
    CHECK(std::abs(cert.coefficients[1]) <= 1e-12);
    CHECK(cert.coefficients[2] == doctest::Approx(c).epsilon(1e-10));
    CHECK(std::abs(cert.coefficients[3]) <= 1e-12);

    CHECK(fam.evaluate_polynomial(cert.coefficients, r) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fam.evaluate_polynomial(cert.coefficients, -r) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empty support is a capacity error") {
    CHECK_THROWS_AS(build_nonnegative_dual(FunctionFamily::power(4), std::vector<double>{}, 4),
                    std::invalid_argument);
}

TEST_CASE("index above n is a capacity error") {
    const std::vector<double> two{0.3, 0.6};
    CHECK_THROWS_AS(build_nonnegative_dual(FunctionFamily::cosine(3), two, 3),
                    std::invalid_argument);
}

TEST_CASE("nonnegative dual for a single interior cosine point at n = 2") {
    const std::vector<double> support{0.5};
    const DualCertificate cert = build_nonnegative_dual(FunctionFamily::cosine(2), support, 2);
    CHECK(cert.report.verified);
}

TEST_CASE("nonnegative dual handles interval endpoints with simple factors") {
    // index({0, 2/3, 1}) = 1 + 2 + 1 = 4 <= n.
    const std::vector<double> support{0.0, 2.0 / 3.0, 1.0};
    const DualCertificate cert = build_nonnegative_dual(FunctionFamily::cosine(4), support, 4);
    CHECK(cert.report.verified);

    const std::vector<double> psupport{-1.0, 0.2, 1.0};
    const DualCertificate pcert = build_nonnegative_dual(FunctionFamily::power(4), psupport, 4);
    CHECK(pcert.report.verified);
}

TEST_CASE("nonnegative dual for the laplace family") {
    const std::vector<double> support{-0.5, 0.5};
    const DualCertificate cert = build_nonnegative_dual(FunctionFamily::laplace(4), support, 4);
    CHECK(cert.report.verified);
}

TEST_CASE("nonnegative dual via constrained least squares for stieltjes and muntz") {
    const FunctionFamily st = FunctionFamily::stieltjes(
        {{2.0, 0.0}, {3.0, 0.0}, {-2.0, 0.0}, {4.0, 0.0}, {-3.0, 0.0}, {5.0, 0.0}});
    const std::vector<double> s1{-0.3, 0.4};
    CHECK(build_nonnegative_dual(st, s1, 6).report.verified);

    const FunctionFamily mz = FunctionFamily::muntz({0.5, 1.0, 2.0, 2.5, 3.0});
    const std::vector<double> s2{0.3, 0.7};
    CHECK(build_nonnegative_dual(mz, s2, 5).report.verified);
}

TEST_CASE("l2 sign interpolant for one cosine point matches the hand-solved system") {
    // min integral P^2 with P(1/2) = 1, P'(1/2) = 0 over degree-4 cosine
    // polynomials has the closed-form solution 0.2 - 0.4 cos(2 pi x)
    // + 0.4 cos(4 pi x) (eliminate the odd modes, then one Lagrange step).
    JordanSupport jordan;
    jordan.plus = {0.5};
    const DualCertificate cert = build_l2_sign_interpolant(FunctionFamily::cosine(4), jordan, 4);
    REQUIRE(cert.report.verified);
    REQUIRE(cert.coefficients.size() == 5);
    CHECK(cert.coefficients[0] == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(std::abs(cert.coefficients[1]) <= 1e-10);
    CHECK(cert.coefficients[2] == doctest::Approx(-0.4).epsilon(1e-10));
    CHECK(std::abs(cert.coefficients[3]) <= 1e-10);
    CHECK(cert.coefficients[4] == doctest::Approx(0.4).epsilon(1e-10));

    const FunctionFamily fam = FunctionFamily::cosine(4);
    CHECK(fam.evaluate_polynomial(cert.coefficients, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(fam.evaluate_polynomial_derivative(cert.coefficients, 0.5)) <= 1e-9);
}

TEST_CASE("l2 interpolant reproduces an equioscillating pattern it can reach") {
    // The extrema pattern of cos(3 pi x) is feasible from n = 3 on even though
    // the constraint count exceeds n+1 there; the system is consistent.
    JordanSupport jordan;
    jordan.plus = {0.0, 2.0 / 3.0};
    jordan.minus = {1.0 / 3.0, 1.0};
    for (int n : {3, 4, 6}) {
        const DualCertificate cert =
            build_l2_sign_interpolant(FunctionFamily::cosine(n), jordan, n);
        CHECK(cert.report.verified);
    }
}

TEST_CASE("l2 interpolant capacity error for infeasible overdetermined patterns") {
    JordanSupport jordan;
    jordan.plus = {0.21, 0.55};
    jordan.minus = {0.83};
    CHECK_THROWS_AS(build_l2_sign_interpolant(FunctionFamily::cosine(1), jordan, 1),
                    std::invalid_argument);
}

TEST_CASE("weak nullspace instance checks") {
    // Chebyshev extrema patterns in the power family are certified.
    JordanSupport jordan;
    for (int i = 0; i <= 4; ++i) {
        const double x = std::cos(i * std::numbers::pi / 4.0);
        (i % 2 == 0 ? jordan.plus : jordan.minus).push_back(x);
    }
    CHECK(check_weak_nullspace_instance(FunctionFamily::power(8), 8, jordan));

    // Capacity shortfalls report false instead of throwing.
    JordanSupport wide;
    wide.plus = {0.1, 0.35, 0.6};
    wide.minus = {0.22, 0.48, 0.85};
    CHECK_FALSE(check_weak_nullspace_instance(FunctionFamily::cosine(2), 2, wide));
}

TEST_CASE("closed-form gram matrices match quadrature") {
    struct Case {
        FunctionFamily fam;
        int n;
    };
    const std::vector<Case> cases{{FunctionFamily::cosine(6), 6},
                                  {FunctionFamily::power(6), 6},
                                  {FunctionFamily::laplace(4), 4}};
    for (const Case& c : cases) {
        JordanSupport probe;
        probe.plus = {c.fam.interval().lo + 0.43 * c.fam.interval().length()};
        const DualCertificate cert = build_l2_sign_interpolant(c.fam, probe, c.n);
        // Independent route: the optimality conditions of the quadratic
        // program say G a must lie in the row space of the constraints; with
        // one interpolation point x0 and one derivative constraint,
        // G a = alpha u(x0) + beta u'(x0). Verify with quadrature-computed G.
        MatrixXd g(c.n + 1, c.n + 1);
        for (int j = 0; j <= c.n; ++j) {
            for (int k = 0; k <= c.n; ++k) {
                g(j, k) = test::simpson(
                    [&](double x) {
                        return c.fam.evaluate_real(j, x) * c.fam.evaluate_real(k, x);
                    },
                    c.fam.interval().lo, c.fam.interval().hi);
            }
        }
        const VectorXd a =
            Eigen::Map<const VectorXd>(cert.coefficients.data(),
                                       static_cast<Eigen::Index>(cert.coefficients.size()));
        const VectorXd ga = g * a;
        MatrixXd basis(c.n + 1, 2);
        const double x0 = probe.plus[0];
        for (int k = 0; k <= c.n; ++k) {
            basis(k, 0) = c.fam.evaluate_real(k, x0);
            basis(k, 1) = c.fam.derivative_real(k, x0);
        }
        const VectorXd resid = ga - basis * basis.colPivHouseholderQr().solve(ga);
        CHECK(resid.lpNorm<Eigen::Infinity>() <= 1e-7 * (1.0 + ga.lpNorm<Eigen::Infinity>()));
    }
}

TEST_CASE("delta degree bound values and monotonicity") {
    // Base of the power equals one at delta = sqrt(e).
    CHECK(delta_degree_bound(std::sqrt(std::numbers::e)) ==
          doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-12));

    // High-precision oracle for delta = 1/2.
    const long double expected =
        (2.0L / std::sqrt((long double)std::numbers::pi)) *
        std::pow(std::sqrt((long double)std::numbers::e) * 2.0L, 2.5L + 2.0L);
    CHECK(delta_degree_bound(0.5) ==
          doctest::Approx(static_cast<double>(expected)).epsilon(1e-12));
    CHECK(delta_degree_bound(0.5) == doctest::Approx(242.2440).epsilon(1e-5));

    CHECK(delta_degree_bound(1.0 / 15.0) >= 1e19);

    CHECK_THROWS_AS(delta_degree_bound(0.0), std::invalid_argument);
    CHECK_THROWS_AS(delta_degree_bound(-1.0), std::invalid_argument);

    double prev = std::numeric_limits<double>::infinity();
    for (double d = 0.05; d <= std::sqrt(std::numbers::e); d += 0.05) {
        const double v = delta_degree_bound(d);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("property: certified supports are orthogonal to moment-feasible differences") {
    const FunctionFamily fam = FunctionFamily::cosine(5);
    const std::vector<double> coeffs{0.0, 0.0, 0.0, 1.0, 0.0, 0.0};  // cos(3 pi x)
    std::vector<double> grid;
    for (int k = 1; k <= 40; ++k) grid.push_back(k / 41.0);
    const MatrixXd a = vandermonde(fam, grid, 5).real();

    Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeFullV);
    const Eigen::Index kdim = a.cols() - svd.rank();
    REQUIRE(kdim > 0);
    const MatrixXd kernel = svd.matrixV().rightCols(kdim);

    CounterRng rng(15);
    for (int rep = 0; rep < 20; ++rep) {
        VectorXd z(kdim);
        for (Eigen::Index i = 0; i < kdim; ++i) z(i) = rng.next_normal();
        const VectorXd nu = kernel * z;  // difference of two equal-moment grid measures
        double inner = 0.0;
        for (Eigen::Index j = 0; j < nu.size(); ++j) {
            inner += fam.evaluate_polynomial(coeffs, grid[static_cast<std::size_t>(j)]) * nu(j);
        }
        CHECK(std::abs(inner) <= 1e-9 * nu.lpNorm<1>());
    }
}

TEST_CASE("property: verified certificates imply recovery of their cone (sampled)") {
    const FunctionFamily fam = FunctionFamily::power(4);
    const std::vector<double> support{-0.4, 0.3};
    const DualCertificate cert = build_nonnegative_dual(fam, support, 4);
    REQUIRE(cert.report.verified);

    std::vector<double> grid;
    for (int k = 1; k <= 39; ++k) grid.push_back(-1.0 + 2.0 * k / 40.0);
    grid.insert(grid.end(), support.begin(), support.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    CounterRng rng(99);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<Atom> atoms;
        for (const SupportSign& s : cert.support) {
            if (rep > 0 && rng.next_below(4) == 0) continue;  // cone includes sub-supports
            atoms.push_back(Atom{s.location, s.sign * (0.2 + rng.next_chi2_1())});
        }
        if (atoms.empty()) continue;
        const DiscreteMeasure target(atoms, fam.interval());
        const MomentVector obs = moments(target, fam, 4);
        const auto [rec, res] = solve_gme_on_grid(obs, fam, grid);
        REQUIRE(res.status == SolveStatus::Optimal);
        for (const Atom& atomic : target.atoms()) {
            bool matched = false;
            for (const Atom& r : rec.atoms()) {
                if (r.location == atomic.location &&
                    std::abs(r.weight - atomic.weight) <= 1e-5) {
                    matched = true;
                }
            }
            CHECK(matched);
        }
        CHECK(tv_norm(rec) == doctest::Approx(tv_norm(target)).epsilon(1e-5));
    }
}

TEST_CASE("property: nonnegative duals stay below one and interpolate exactly") {
    CounterRng rng(321);
    const std::vector<FunctionFamily> fams{FunctionFamily::power(8), FunctionFamily::cosine(8),
                                           FunctionFamily::laplace(8)};
    for (const FunctionFamily& fam : fams) {
        for (int rep = 0; rep < 10; ++rep) {
            const int s = 1 + static_cast<int>(rng.next_below(4));
            std::vector<double> support;
            while (static_cast<int>(support.size()) < s) {
                const double margin = 0.05 * fam.interval().length();
                const double x =
                    rng.next_uniform(fam.interval().lo + margin, fam.interval().hi - margin);
                bool clear = true;
                for (double y : support) {
                    if (std::abs(x - y) < 0.08 * fam.interval().length()) clear = false;
                }
                if (clear) support.push_back(x);
            }
            const DualCertificate cert = build_nonnegative_dual(fam, support, 8);
            CHECK(cert.report.verified);
            CHECK(cert.report.max_interp_residual <= 1e-10);
            CHECK(cert.report.grid_sup_norm <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("grid scan kernel flags points inside exclusion balls") {
    const FunctionFamily fam = FunctionFamily::cosine(3);
    const std::vector<double> coeffs{0.0, 0.0, 0.0, 1.0};
    const std::vector<double> centers{0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
    const GridScanResult r = scan_certificate_grid(fam, coeffs, centers, 1.0 / 12.0, 10001);
    CHECK(r.sup_all == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.sup_off < 1.0);
    // Just outside an exclusion ball the polynomial reaches cos(pi/4).
    CHECK(r.sup_off == doctest::Approx(std::cos(std::numbers::pi / 4.0)).epsilon(1e-3));

    // Radius 1/6 makes the balls tile the whole interval.
    const GridScanResult full = scan_certificate_grid(fam, coeffs, centers, 1.0 / 6.0, 10001);
    CHECK(full.sup_off == 0.0);
}
