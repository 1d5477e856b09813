#pragma once

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "minext/measures.hpp"

namespace minext {

enum class FamilyKind { Power, Cosine, ComplexExponential, Laplace, Stieltjes, Muntz };

// An ordered system {u_0, ..., u_n} of continuous functions on an interval.
// Every catalog family is homogeneous (u_0 is a constant function); the
// Stieltjes family is stored in its normalized homogeneous form with a
// leading 1. All instances are immutable and safe to share across threads.
class FunctionFamily {
public:
    static FunctionFamily power(int n);                                    // {1, x, ..., x^n} on [-1,1]
    static FunctionFamily cosine(int n);                                   // {1, cos(pi x), ...} on [0,1]
    static FunctionFamily complex_exponential(int n);                      // {1, e^{i pi x}, ...} on [-1,1)
    static FunctionFamily complex_exponential(int n, Interval interval);   // variant domain, e.g. [0,2)
    static FunctionFamily laplace(int n);                                  // {1, e^{-x}, e^{-2x}, ...} on [-1,1]
    static FunctionFamily stieltjes(std::vector<std::complex<double>> poles);  // {1, 1/(z_1-x), ...} on [-1,1]
    static FunctionFamily muntz(std::vector<double> exponents, double upper = 1.0);  // {1, x^{a_1}, ...} on [0,upper]

    FamilyKind kind() const { return kind_; }
    const Interval& interval() const { return interval_; }
    int max_order() const { return max_order_; }           // n
    std::size_t size() const { return static_cast<std::size_t>(max_order_) + 1; }
    bool is_homogeneous() const { return true; }
    bool is_complex_valued() const { return complex_valued_; }
    const std::vector<std::complex<double>>& poles() const { return poles_; }
    const std::vector<double>& exponents() const { return exponents_; }
    std::string id() const;

    // u_k(x). Domain-checked; real families return a value with zero
    // imaginary part.
    std::complex<double> evaluate(int k, double x) const;
    double evaluate_real(int k, double x) const;
    std::complex<double> derivative(int k, double x) const;
    double derivative_real(int k, double x) const;

    // P(x) = sum coeffs[k] u_k(x) via the per-family fast path (Clenshaw for
    // the cosine family, Horner for power/Laplace). This is the inner loop of
    // certificate grid scans.
    double evaluate_polynomial(std::span<const double> coeffs, double x) const;
    double evaluate_polynomial_derivative(std::span<const double> coeffs, double x) const;

    std::string to_json() const;
    static FunctionFamily from_json(const std::string& text);

private:
    FunctionFamily(FamilyKind kind, Interval interval, int max_order, bool complex_valued)
        : kind_(kind), interval_(interval), max_order_(max_order), complex_valued_(complex_valued) {}

    void check_args(int k, double x) const;

    FamilyKind kind_;
    Interval interval_;
    int max_order_;
    bool complex_valued_;
    std::vector<std::complex<double>> poles_;   // Stieltjes
    std::vector<double> exponents_;             // Muntz
};

// entries(k, j) = u_k(nodes[j]); (n+1) x m, real or complex per family.
struct VandermondeMatrix {
    std::variant<Eigen::MatrixXd, Eigen::MatrixXcd> entries;
    std::vector<double> nodes;
    std::string family_id;

    bool is_complex() const { return std::holds_alternative<Eigen::MatrixXcd>(entries); }
    const Eigen::MatrixXd& real() const { return std::get<Eigen::MatrixXd>(entries); }
    const Eigen::MatrixXcd& cplx() const { return std::get<Eigen::MatrixXcd>(entries); }
    Eigen::Index rows() const;
    Eigen::Index cols() const;

    // Real view for the LP layer: complex rows are split into interleaved
    // (Re, Im) row pairs; real matrices pass through.
    Eigen::MatrixXd stacked_real() const;
};

// Columns are independent, so assembly is parallel over columns; the serial
// variant is the reference used by the kernel-equivalence tests.
VandermondeMatrix vandermonde(const FunctionFamily& fam, std::span<const double> nodes, int n);
VandermondeMatrix vandermonde_serial(const FunctionFamily& fam, std::span<const double> nodes, int n);

// True iff the smallest singular value exceeds tol times the largest. More
// columns than rows is reported false, not an error.
bool has_full_column_rank(const VandermondeMatrix& v, double tol = 1e-10);

// Index of a zero set: 2 per interior point, 1 per endpoint. Governs the
// capacity needed by a nonnegative generalized polynomial vanishing there.
int index_of(std::span<const double> locations, const Interval& interval);

}  // namespace minext
