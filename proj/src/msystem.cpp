#include "minext/msystem.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "minext/parallel.hpp"

namespace minext {

namespace {

constexpr double kDomainSlack = 1e-12;
constexpr double kPi = std::numbers::pi;

double clamp_to(const Interval& iv, double x) {
    return std::min(std::max(x, iv.lo), iv.hi);
}

}  // namespace

FunctionFamily FunctionFamily::power(int n) {
    if (n < 0) throw std::invalid_argument("power family: n must be >= 0");
    return FunctionFamily(FamilyKind::Power, Interval{-1.0, 1.0}, n, false);
}

FunctionFamily FunctionFamily::cosine(int n) {
    if (n < 0) throw std::invalid_argument("cosine family: n must be >= 0");
    return FunctionFamily(FamilyKind::Cosine, Interval{0.0, 1.0}, n, false);
}

FunctionFamily FunctionFamily::complex_exponential(int n) {
    return complex_exponential(n, Interval{-1.0, 1.0});
}

FunctionFamily FunctionFamily::complex_exponential(int n, Interval interval) {
    if (n < 0) throw std::invalid_argument("exponential family: n must be >= 0");
    return FunctionFamily(FamilyKind::ComplexExponential, interval, n, true);
}

FunctionFamily FunctionFamily::laplace(int n) {
    if (n < 0) throw std::invalid_argument("laplace family: n must be >= 0");
    return FunctionFamily(FamilyKind::Laplace, Interval{-1.0, 1.0}, n, false);
}

FunctionFamily FunctionFamily::stieltjes(std::vector<std::complex<double>> poles) {
    if (poles.empty()) throw std::invalid_argument("stieltjes family: needs at least one pole");
    bool complex_valued = false;
    for (const auto& z : poles) {
        if (z.imag() == 0.0 && z.real() >= -1.0 && z.real() <= 1.0) {
            throw std::invalid_argument("stieltjes family: pole inside [-1,1]");
        }
        if (z.imag() != 0.0) complex_valued = true;
    }
    FunctionFamily f(FamilyKind::Stieltjes, Interval{-1.0, 1.0},
                     static_cast<int>(poles.size()), complex_valued);
    f.poles_ = std::move(poles);
    return f;
}

FunctionFamily FunctionFamily::muntz(std::vector<double> exponents, double upper) {
    if (exponents.empty()) throw std::invalid_argument("muntz family: needs at least one exponent");
    if (!(upper > 0.0)) throw std::invalid_argument("muntz family: upper endpoint must be positive");
    double prev = 0.0;
    for (double a : exponents) {
        if (!(a > prev)) throw std::invalid_argument("muntz family: exponents must be strictly increasing positive");
        prev = a;
    }
    FunctionFamily f(FamilyKind::Muntz, Interval{0.0, upper},
                     static_cast<int>(exponents.size()), false);
    f.exponents_ = std::move(exponents);
    return f;
}

std::string FunctionFamily::id() const {
    std::ostringstream os;
    switch (kind_) {
        case FamilyKind::Power: os << "power:n=" << max_order_; break;
        case FamilyKind::Cosine: os << "cosine:n=" << max_order_; break;
        case FamilyKind::ComplexExponential:
            os << "cexp:n=" << max_order_ << ":I=[" << interval_.lo << "," << interval_.hi << ")";
            break;
        case FamilyKind::Laplace: os << "laplace:n=" << max_order_; break;
        case FamilyKind::Stieltjes:
            os << "stieltjes:p=" << poles_.size();
            break;
        case FamilyKind::Muntz:
            os << "muntz:k=" << exponents_.size() << ":B=" << interval_.hi;
            break;
    }
    return os.str();
}

void FunctionFamily::check_args(int k, double x) const {
    if (k < 0 || k > max_order_) throw std::invalid_argument("family: order k out of range");
    if (x < interval_.lo - kDomainSlack || x > interval_.hi + kDomainSlack) {
        throw std::domain_error("family: evaluation point outside domain");
    }
}

std::complex<double> FunctionFamily::evaluate(int k, double x) const {
    check_args(k, x);
    x = clamp_to(interval_, x);
    switch (kind_) {
        case FamilyKind::Power:
            return std::pow(x, k);
        case FamilyKind::Cosine:
            return std::cos(k * kPi * x);
        case FamilyKind::ComplexExponential:
            return std::complex<double>(std::cos(k * kPi * x), std::sin(k * kPi * x));
        case FamilyKind::Laplace:
            return std::exp(-static_cast<double>(k) * x);
        case FamilyKind::Stieltjes:
            if (k == 0) return 1.0;
            return 1.0 / (poles_[static_cast<std::size_t>(k) - 1] - x);
        case FamilyKind::Muntz:
            if (k == 0) return 1.0;
            return std::pow(x, exponents_[static_cast<std::size_t>(k) - 1]);
    }
    throw std::logic_error("family: unknown kind");
}

double FunctionFamily::evaluate_real(int k, double x) const {
    if (complex_valued_) throw std::logic_error("family: complex-valued, use evaluate()");
    return evaluate(k, x).real();
}

std::complex<double> FunctionFamily::derivative(int k, double x) const {
    check_args(k, x);
    x = clamp_to(interval_, x);
    switch (kind_) {
        case FamilyKind::Power:
            return k == 0 ? 0.0 : k * std::pow(x, k - 1);
        case FamilyKind::Cosine:
            return -k * kPi * std::sin(k * kPi * x);
        case FamilyKind::ComplexExponential: {
            const std::complex<double> i_kpi(0.0, k * kPi);
            return i_kpi * evaluate(k, x);
        }
        case FamilyKind::Laplace:
            return -static_cast<double>(k) * std::exp(-static_cast<double>(k) * x);
        case FamilyKind::Stieltjes: {
            if (k == 0) return 0.0;
            const auto d = poles_[static_cast<std::size_t>(k) - 1] - x;
            return 1.0 / (d * d);
        }
        case FamilyKind::Muntz: {
            if (k == 0) return 0.0;
            const double a = exponents_[static_cast<std::size_t>(k) - 1];
            return a * std::pow(x, a - 1.0);
        }
    }
    throw std::logic_error("family: unknown kind");
}

double FunctionFamily::derivative_real(int k, double x) const {
    if (complex_valued_) throw std::logic_error("family: complex-valued, use derivative()");
    return derivative(k, x).real();
}

double FunctionFamily::evaluate_polynomial(std::span<const double> coeffs, double x) const {
    if (complex_valued_) throw std::logic_error("family: complex-valued, no real polynomial evaluation");
    if (coeffs.empty()) return 0.0;
    if (coeffs.size() > size()) throw std::invalid_argument("family: more coefficients than family elements");
    check_args(static_cast<int>(coeffs.size()) - 1, x);
    x = clamp_to(interval_, x);
    switch (kind_) {
        case FamilyKind::Power: {
            double acc = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
            return acc;
        }
        case FamilyKind::Cosine: {
            // cos(k pi x) = T_k(cos(pi x)); Clenshaw on the Chebyshev basis.
            const double y = std::cos(kPi * x);
            double b1 = 0.0, b2 = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 1;) {
                const double b0 = 2.0 * y * b1 - b2 + coeffs[k];
                b2 = b1;
                b1 = b0;
            }
            return coeffs[0] + y * b1 - b2;
        }
        case FamilyKind::Laplace: {
            const double t = std::exp(-x);
            double acc = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
            return acc;
        }
        case FamilyKind::Stieltjes: {
            double acc = coeffs[0];
            for (std::size_t k = 1; k < coeffs.size(); ++k) {
                acc += coeffs[k] / (poles_[k - 1].real() - x);
            }
            return acc;
        }
        case FamilyKind::Muntz: {
            double acc = coeffs[0];
            for (std::size_t k = 1; k < coeffs.size(); ++k) {
                acc += coeffs[k] * std::pow(x, exponents_[k - 1]);
            }
            return acc;
        }
        case FamilyKind::ComplexExponential:
            break;
    }
    throw std::logic_error("family: unknown kind");
}

double FunctionFamily::evaluate_polynomial_derivative(std::span<const double> coeffs, double x) const {
    if (complex_valued_) throw std::logic_error("family: complex-valued, no real polynomial evaluation");
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        acc += coeffs[k] * derivative_real(static_cast<int>(k), x);
    }
    return acc;
}

std::string FunctionFamily::to_json() const {
    nlohmann::json j;
    switch (kind_) {
        case FamilyKind::Power: j["kind"] = "power"; j["n"] = max_order_; break;
        case FamilyKind::Cosine: j["kind"] = "cosine"; j["n"] = max_order_; break;
        case FamilyKind::ComplexExponential:
            j["kind"] = "cexp";
            j["n"] = max_order_;
            j["interval"] = {interval_.lo, interval_.hi};
            break;
        case FamilyKind::Laplace: j["kind"] = "laplace"; j["n"] = max_order_; break;
        case FamilyKind::Stieltjes: {
            j["kind"] = "stieltjes";
            auto arr = nlohmann::json::array();
            for (const auto& z : poles_) arr.push_back({z.real(), z.imag()});
            j["poles"] = std::move(arr);
            break;
        }
        case FamilyKind::Muntz:
            j["kind"] = "muntz";
            j["exponents"] = exponents_;
            j["upper"] = interval_.hi;
            break;
    }
    return j.dump();
}

FunctionFamily FunctionFamily::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power") return power(j.at("n").get<int>());
    if (kind == "cosine") return cosine(j.at("n").get<int>());
    if (kind == "cexp") {
        Interval iv{-1.0, 1.0};
        if (j.contains("interval")) {
            iv = Interval{j["interval"].at(0).get<double>(), j["interval"].at(1).get<double>()};
        }
        return complex_exponential(j.at("n").get<int>(), iv);
    }
    if (kind == "laplace") return laplace(j.at("n").get<int>());
    if (kind == "stieltjes") {
        std::vector<std::complex<double>> poles;
        for (const auto& p : j.at("poles")) {
            poles.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        }
        return stieltjes(std::move(poles));
    }
    if (kind == "muntz") {
        const double upper = j.contains("upper") ? j["upper"].get<double>() : 1.0;
        return muntz(j.at("exponents").get<std::vector<double>>(), upper);
    }
    throw std::invalid_argument("family: unknown kind '" + kind + "'");
}

Eigen::Index VandermondeMatrix::rows() const {
    return is_complex() ? cplx().rows() : real().rows();
}

Eigen::Index VandermondeMatrix::cols() const {
    return is_complex() ? cplx().cols() : real().cols();
}

Eigen::MatrixXd VandermondeMatrix::stacked_real() const {
    if (!is_complex()) return real();
    const Eigen::MatrixXcd& m = cplx();
    Eigen::MatrixXd out(2 * m.rows(), m.cols());
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        out.row(2 * k) = m.row(k).real();
        out.row(2 * k + 1) = m.row(k).imag();
    }
    return out;
}

namespace {

void validate_nodes(const FunctionFamily& fam, std::span<const double> nodes) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (!fam.interval().contains(nodes[j])) {
            throw std::domain_error("vandermonde: node outside family domain");
        }
        for (std::size_t i = 0; i < j; ++i) {
            if (nodes[i] == nodes[j]) {
                throw std::invalid_argument("vandermonde: duplicate nodes");
            }
        }
    }
}

template <bool Parallel>
VandermondeMatrix build_vandermonde(const FunctionFamily& fam, std::span<const double> nodes, int n) {
    if (n < 0 || static_cast<std::size_t>(n) + 1 > fam.size()) {
        throw std::invalid_argument("vandermonde: order exceeds family size");
    }
    validate_nodes(fam, nodes);
    const auto m = static_cast<Eigen::Index>(nodes.size());
    VandermondeMatrix v;
    v.nodes.assign(nodes.begin(), nodes.end());
    v.family_id = fam.id();
    if (fam.is_complex_valued()) {
        Eigen::MatrixXcd a(n + 1, m);
        auto fill = [&](std::size_t j) {
            for (int k = 0; k <= n; ++k) a(k, static_cast<Eigen::Index>(j)) = fam.evaluate(k, nodes[j]);
        };
        if constexpr (Parallel) par::for_index(nodes.size(), fill);
        else par::for_index_serial(nodes.size(), fill);
        v.entries = std::move(a);
    } else {
        Eigen::MatrixXd a(n + 1, m);
        auto fill = [&](std::size_t j) {
            for (int k = 0; k <= n; ++k) a(k, static_cast<Eigen::Index>(j)) = fam.evaluate_real(k, nodes[j]);
        };
        if constexpr (Parallel) par::for_index(nodes.size(), fill);
        else par::for_index_serial(nodes.size(), fill);
        v.entries = std::move(a);
    }
    return v;
}

}  // namespace

VandermondeMatrix vandermonde(const FunctionFamily& fam, std::span<const double> nodes, int n) {
    return build_vandermonde<true>(fam, nodes, n);
}

VandermondeMatrix vandermonde_serial(const FunctionFamily& fam, std::span<const double> nodes, int n) {
    return build_vandermonde<false>(fam, nodes, n);
}

bool has_full_column_rank(const VandermondeMatrix& v, double tol) {
    if (v.cols() == 0) return true;
    if (v.cols() > v.rows()) return false;
    Eigen::VectorXd sv;
    if (v.is_complex()) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v.cplx());
        sv = svd.singularValues();
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(v.real());
        sv = svd.singularValues();
    }
    if (sv.size() == 0) return false;
    return sv(sv.size() - 1) > tol * sv(0);
}

int index_of(std::span<const double> locations, const Interval& interval) {
    int total = 0;
    for (std::size_t j = 0; j < locations.size(); ++j) {
        const double t = locations[j];
        if (!interval.contains(t)) throw std::domain_error("index_of: point outside interval");
        for (std::size_t i = 0; i < j; ++i) {
            if (locations[i] == t) throw std::invalid_argument("index_of: duplicate points");
        }
        total += interval.is_interior(t) ? 2 : 1;
    }
    return total;
}

}  // namespace minext
