#pragma once

#include <span>
#include <string>
#include <vector>

#include "minext/measures.hpp"
#include "minext/msystem.hpp"

namespace minext {

struct SupportSign {
    double location = 0.0;
    int sign = 1;  // +1 or -1
};

struct CertificateReport {
    double max_interp_residual = 0.0;  // max_i |P(x_i) - eps_i|
    double grid_sup_norm = 0.0;        // max |P| over the whole grid
    double off_support_margin = 0.0;   // 1 - max |P| outside the exclusion balls
    bool vandermonde_full_rank = false;
    bool verified = false;
};

// Coefficients of P = sum a_k u_k together with the sign pattern it
// interpolates and the verification report. A verified certificate is the
// sufficient condition for unique recovery of every measure carried by this
// support with these signs.
struct DualCertificate {
    std::vector<double> coefficients;
    std::string family_id;
    std::vector<SupportSign> support;
    CertificateReport report;
};

struct VerifyOptions {
    int grid_size = 10001;
    double interp_tol = 1e-8;
    double sup_tol = 1e-9;     // slack on ||P||_inf <= 1 at support points
    double margin_tol = 1e-9;  // required strict margin off the support
    // Radius of the balls removed around support points for the strict
    // inequality check; <= 0 selects half the minimal support separation.
    double exclusion_radius = -1.0;
};

// Evaluates P on a uniform grid and fills the report. Failed verification is
// a report, not an error. Real-valued families only.
DualCertificate verify_dual_polynomial(std::span<const double> coefficients,
                                       const FunctionFamily& fam,
                                       std::span<const SupportSign> support,
                                       const VerifyOptions& opts = {});

// P = 1 - c Q with Q a nonnegative generalized polynomial vanishing exactly
// on the support. Power, cosine and Laplace families expand the squared
// factors in closed form; other families fit the squared-factor profile by
// constrained least squares and must survive verification.
DualCertificate build_nonnegative_dual(const FunctionFamily& fam,
                                       std::span<const double> support,
                                       int n,
                                       const VerifyOptions& opts = {});

// Minimizes the L2 norm of P subject to P(x_i) = eps_i and P'(x_i) = 0 at
// interior support points, using the closed-form Gram matrix of the family.
// The result may fail verification; that is the measured outcome.
DualCertificate build_l2_sign_interpolant(const FunctionFamily& fam,
                                          const JordanSupport& jordan,
                                          int n,
                                          const VerifyOptions& opts = {});

// True iff a verified sign interpolant exists for this Jordan support.
bool check_weak_nullspace_instance(const FunctionFamily& fam, int n, const JordanSupport& jordan);

// (2/sqrt(pi)) * (sqrt(e)/delta)^(5/2 + 1/delta): degree sufficient for a
// unit-sup-norm polynomial interpolating any sign pattern on a delta-spaced
// support.
double delta_degree_bound(double delta);

// Grid scan kernel behind verification: sup |P| over the grid, and over the
// grid with exclusion balls removed. Parallel over grid chunks; the serial
// variant is the reference for the kernel-equivalence tests. Max reductions
// are exact, so both variants return identical values.
struct GridScanResult {
    double sup_all = 0.0;
    double sup_off = 0.0;
};
GridScanResult scan_certificate_grid(const FunctionFamily& fam,
                                     std::span<const double> coefficients,
                                     std::span<const double> exclusion_centers,
                                     double exclusion_radius,
                                     int grid_size);
GridScanResult scan_certificate_grid_serial(const FunctionFamily& fam,
                                            std::span<const double> coefficients,
                                            std::span<const double> exclusion_centers,
                                            double exclusion_radius,
                                            int grid_size);

}  // namespace minext
