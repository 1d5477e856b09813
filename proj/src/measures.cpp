#include "minext/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "minext/msystem.hpp"

namespace minext {

std::vector<double> JordanSupport::united() const {
    std::vector<double> all;
    all.reserve(size());
    all.insert(all.end(), plus.begin(), plus.end());
    all.insert(all.end(), minus.begin(), minus.end());
    std::sort(all.begin(), all.end());
    return all;
}

std::vector<int> JordanSupport::signs() const {
    const auto all = united();
    std::vector<int> s;
    s.reserve(all.size());
    for (double x : all) {
        const bool pos = std::find(plus.begin(), plus.end(), x) != plus.end();
        s.push_back(pos ? 1 : -1);
    }
    return s;
}

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms, Interval interval)
    : atoms_(std::move(atoms)), interval_(interval) {
    if (!(interval_.lo < interval_.hi)) {
        throw std::invalid_argument("DiscreteMeasure: empty interval");
    }
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& a = atoms_[i];
        if (!std::isfinite(a.location) || !std::isfinite(a.weight)) {
            throw std::invalid_argument("DiscreteMeasure: non-finite atom");
        }
        if (!interval_.contains(a.location)) {
            throw std::domain_error("DiscreteMeasure: atom location outside interval");
        }
        if (std::abs(a.weight) < kMinWeight) {
            throw std::invalid_argument("DiscreteMeasure: atom weight below 1e-14; prune explicitly");
        }
        if (i > 0 && !(atoms_[i - 1].location < a.location)) {
            throw std::invalid_argument("DiscreteMeasure: duplicate atom locations");
        }
    }
}

std::string DiscreteMeasure::to_json() const {
    nlohmann::json j;
    j["interval"] = {interval_.lo, interval_.hi};
    auto arr = nlohmann::json::array();
    for (const Atom& a : atoms_) arr.push_back({a.location, a.weight});
    j["atoms"] = std::move(arr);
    return j.dump();
}

DiscreteMeasure DiscreteMeasure::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Interval iv{j.at("interval").at(0).get<double>(), j.at("interval").at(1).get<double>()};
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) {
        atoms.push_back(Atom{a.at(0).get<double>(), a.at(1).get<double>()});
    }
    return DiscreteMeasure(std::move(atoms), iv);
}

MomentVector MomentVector::real(std::vector<double> values, std::string family_id) {
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("MomentVector: non-finite entry");
    }
    MomentVector m;
    m.values_ = std::move(values);
    m.family_id_ = std::move(family_id);
    return m;
}

MomentVector MomentVector::complex(std::vector<std::complex<double>> values, std::string family_id) {
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("MomentVector: non-finite entry");
        }
    }
    MomentVector m;
    m.values_ = std::move(values);
    m.family_id_ = std::move(family_id);
    return m;
}

std::size_t MomentVector::size() const {
    if (is_complex()) return std::get<std::vector<std::complex<double>>>(values_).size();
    return std::get<std::vector<double>>(values_).size();
}

const std::vector<double>& MomentVector::real_values() const {
    if (is_complex()) throw std::logic_error("MomentVector: complex-valued, use complex_values()");
    return std::get<std::vector<double>>(values_);
}

const std::vector<std::complex<double>>& MomentVector::complex_values() const {
    if (!is_complex()) throw std::logic_error("MomentVector: real-valued, use real_values()");
    return std::get<std::vector<std::complex<double>>>(values_);
}

std::vector<double> MomentVector::stacked_real() const {
    if (!is_complex()) return real_values();
    const auto& cs = complex_values();
    std::vector<double> out;
    out.reserve(2 * cs.size());
    for (const auto& c : cs) {
        out.push_back(c.real());
        out.push_back(c.imag());
    }
    return out;
}

MomentVector MomentVector::scaled(double factor) const {
    MomentVector m = *this;
    if (is_complex()) {
        for (auto& v : std::get<std::vector<std::complex<double>>>(m.values_)) v *= factor;
    } else {
        for (auto& v : std::get<std::vector<double>>(m.values_)) v *= factor;
    }
    return m;
}

MomentVector MomentVector::add(const MomentVector& a, const MomentVector& b) {
    if (a.size() != b.size() || a.is_complex() != b.is_complex()) {
        throw std::invalid_argument("MomentVector::add: shape mismatch");
    }
    MomentVector m = a;
    if (a.is_complex()) {
        auto& out = std::get<std::vector<std::complex<double>>>(m.values_);
        const auto& other = b.complex_values();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += other[i];
    } else {
        auto& out = std::get<std::vector<double>>(m.values_);
        const auto& other = b.real_values();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += other[i];
    }
    return m;
}

double tv_norm(const DiscreteMeasure& m) {
    double s = 0.0;
    for (const Atom& a : m.atoms()) s += std::abs(a.weight);
    return s;
}

JordanSupport jordan_decompose(const DiscreteMeasure& m) {
    JordanSupport j;
    for (const Atom& a : m.atoms()) {
        (a.weight > 0 ? j.plus : j.minus).push_back(a.location);
    }
    return j;
}

DiscreteMeasure positive_part(const DiscreteMeasure& m) {
    std::vector<Atom> atoms;
    for (const Atom& a : m.atoms()) {
        if (a.weight > 0) atoms.push_back(a);
    }
    return DiscreteMeasure(std::move(atoms), m.interval());
}

DiscreteMeasure negative_part(const DiscreteMeasure& m) {
    std::vector<Atom> atoms;
    for (const Atom& a : m.atoms()) {
        if (a.weight < 0) atoms.push_back(Atom{a.location, -a.weight});
    }
    return DiscreteMeasure(std::move(atoms), m.interval());
}

MomentVector moments(const DiscreteMeasure& m, const FunctionFamily& fam, int n) {
    if (n < 0 || static_cast<std::size_t>(n) + 1 > fam.size()) {
        throw std::invalid_argument("moments: order exceeds family size");
    }
    for (const Atom& a : m.atoms()) {
        if (!fam.interval().contains(a.location)) {
            throw std::domain_error("moments: atom outside family domain");
        }
    }
    if (fam.is_complex_valued()) {
        std::vector<std::complex<double>> vals(static_cast<std::size_t>(n) + 1, 0.0);
        for (const Atom& a : m.atoms()) {
            for (int k = 0; k <= n; ++k) vals[k] += a.weight * fam.evaluate(k, a.location);
        }
        return MomentVector::complex(std::move(vals), fam.id());
    }
    std::vector<double> vals(static_cast<std::size_t>(n) + 1, 0.0);
    for (const Atom& a : m.atoms()) {
        for (int k = 0; k <= n; ++k) vals[k] += a.weight * fam.evaluate_real(k, a.location);
    }
    return MomentVector::real(std::move(vals), fam.id());
}

}  // namespace minext
