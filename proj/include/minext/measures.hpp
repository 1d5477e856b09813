#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace minext {

struct Interval {
    double lo = -1.0;
    double hi = 1.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool is_interior(double x) const { return x > lo && x < hi; }
};

struct Atom {
    double location = 0.0;
    double weight = 0.0;
};

// Sets of locations carrying positive / negative mass. Disjoint by
// construction wherever this library produces one.
struct JordanSupport {
    std::vector<double> plus;
    std::vector<double> minus;

    std::size_t size() const { return plus.size() + minus.size(); }
    // Sorted union of both sets.
    std::vector<double> united() const;
    // Sign (+1/-1) for each point of united(), in the same order.
    std::vector<int> signs() const;
};

// Finitely supported signed measure on an interval. Atoms are stored in
// strictly increasing location order with nonzero weights; weights below
// 1e-14 in magnitude are rejected at construction rather than dropped, so
// pruning is always an explicit caller decision.
class DiscreteMeasure {
public:
    static constexpr double kMinWeight = 1e-14;

    DiscreteMeasure() = default;
    DiscreteMeasure(std::vector<Atom> atoms, Interval interval);

    static DiscreteMeasure zero(Interval interval) { return DiscreteMeasure({}, interval); }

    const std::vector<Atom>& atoms() const { return atoms_; }
    const Interval& interval() const { return interval_; }
    std::size_t support_size() const { return atoms_.size(); }
    bool is_zero() const { return atoms_.empty(); }

    std::string to_json() const;
    static DiscreteMeasure from_json(const std::string& text);

private:
    std::vector<Atom> atoms_;
    Interval interval_{};
};

// Observation vector of n+1 generalized moments. Real for real-valued
// families, complex otherwise (tagged union; the measure itself is always
// real-weighted).
class MomentVector {
public:
    MomentVector() = default;

    static MomentVector real(std::vector<double> values, std::string family_id);
    static MomentVector complex(std::vector<std::complex<double>> values, std::string family_id);

    bool is_complex() const { return std::holds_alternative<std::vector<std::complex<double>>>(values_); }
    std::size_t size() const;
    const std::string& family_id() const { return family_id_; }

    const std::vector<double>& real_values() const;
    const std::vector<std::complex<double>>& complex_values() const;

    // Real view used by the LP layer: real vectors pass through; complex
    // vectors are interleaved as (Re c_0, Im c_0, Re c_1, Im c_1, ...).
    std::vector<double> stacked_real() const;

    MomentVector scaled(double factor) const;
    static MomentVector add(const MomentVector& a, const MomentVector& b);

private:
    std::variant<std::vector<double>, std::vector<std::complex<double>>> values_;
    std::string family_id_;
};

double tv_norm(const DiscreteMeasure& m);
JordanSupport jordan_decompose(const DiscreteMeasure& m);

// Restrictions to the positive / negative part of the support.
DiscreteMeasure positive_part(const DiscreteMeasure& m);
DiscreteMeasure negative_part(const DiscreteMeasure& m);

class FunctionFamily;

// values[k] = sum_i weight_i * u_k(x_i) for k = 0..n.
MomentVector moments(const DiscreteMeasure& m, const FunctionFamily& fam, int n);

}  // namespace minext
