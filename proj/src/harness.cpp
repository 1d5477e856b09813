#include "minext/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "minext/certificate.hpp"
#include "minext/parallel.hpp"
#include "minext/svg.hpp"

namespace minext {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<double> interior_grid(int p, const Interval& iv) {
    std::vector<double> grid(static_cast<std::size_t>(p));
    for (int k = 1; k <= p; ++k) {
        grid[static_cast<std::size_t>(k - 1)] = iv.lo + iv.length() * static_cast<double>(k) / (p + 1);
    }
    return grid;
}

constexpr double kExactRecoveryTol = 1e-5;

}  // namespace

SparseInstance gen_sparse_instance(int p, int s, CounterRng& rng) {
    if (p < 0 || s < 0 || s > p) throw std::invalid_argument("gen_sparse_instance: need 0 <= s <= p");
    SparseInstance inst;
    inst.x0 = VectorXd::Zero(p);

    // Partial Fisher-Yates over index slots.
    std::vector<int> idx(static_cast<std::size_t>(p));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < s; ++i) {
        const auto j = static_cast<std::size_t>(i) +
                       static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(p - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
    }
    inst.support.assign(idx.begin(), idx.begin() + s);
    std::sort(inst.support.begin(), inst.support.end());
    for (int j : inst.support) inst.x0(j) = rng.next_chi2_1();
    return inst;
}

JordanSupport gen_delta_spaced_jordan(int s, double delta, std::uint64_t seed, Interval interval) {
    if (s < 2) throw std::invalid_argument("gen_delta_spaced_jordan: need s >= 2");
    if (!(delta > 0.0)) throw std::invalid_argument("gen_delta_spaced_jordan: delta must be positive");
    if (static_cast<double>(s) * delta > interval.length()) {
        throw std::invalid_argument("gen_delta_spaced_jordan: cannot pack s points with separation delta");
    }
    CounterRng rng(seed);

    std::vector<double> pts(static_cast<std::size_t>(s));
    const int max_attempts = 2000000;
    int attempt = 0;
    for (;; ++attempt) {
        if (attempt >= max_attempts) {
            throw std::runtime_error("gen_delta_spaced_jordan: rejection sampling did not terminate");
        }
        for (double& x : pts) x = rng.next_uniform(interval.lo, interval.hi);
        std::sort(pts.begin(), pts.end());
        bool ok = true;
        for (int i = 1; i < s; ++i) {
            if (pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(i - 1)] < delta) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        // Snap one random adjacent pair to exactly delta; the pair's right
        // neighbour gap only grows, so all separations stay >= delta.
        const auto j = static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(s - 1)));
        pts[j + 1] = pts[j] + delta;
        ok = true;
        for (int i = 1; i < s; ++i) {
            if (pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(i - 1)] <
                delta * (1.0 - 1e-12)) {
                ok = false;
                break;
            }
        }
        if (ok && pts.back() < interval.hi) break;
    }

    std::vector<int> signs(static_cast<std::size_t>(s));
    for (;;) {
        for (int& sg : signs) sg = rng.next_sign();
        const bool all_same = std::all_of(signs.begin(), signs.end(),
                                          [&](int v) { return v == signs.front(); });
        if (!all_same) break;  // true signed measures only
    }

    JordanSupport jordan;
    for (int i = 0; i < s; ++i) {
        (signs[static_cast<std::size_t>(i)] > 0 ? jordan.plus : jordan.minus)
            .push_back(pts[static_cast<std::size_t>(i)]);
    }
    return jordan;
}

SweepReport run_err_sweep(const ErrSweepOptions& opts) {
    if (opts.p < 3) throw std::invalid_argument("run_err_sweep: p too small");
    const int smax = (opts.p - 1) / 2;
    const int n_trials = opts.trials;

    struct TrialOut {
        double l1 = 0.0;
        double linf = 0.0;
        bool optimal = false;
    };
    std::vector<TrialOut> outs(static_cast<std::size_t>(smax) * std::max(n_trials, 0));

    auto run_trial = [&](std::size_t task) {
        const int s = static_cast<int>(task) / std::max(n_trials, 1) + 1;
        const int t = static_cast<int>(task) % std::max(n_trials, 1);
        const int n = 2 * s + 1;
        CounterRng rng(CounterRng::derive(opts.seed, static_cast<std::uint64_t>(s),
                                          static_cast<std::uint64_t>(t)));
        const FunctionFamily fam = FunctionFamily::cosine(n);
        const std::vector<double> grid = interior_grid(opts.p, fam.interval());
        const SparseInstance inst = gen_sparse_instance(opts.p, s, rng);

        BasisPursuitProblem prob;
        prob.A = vandermonde_serial(fam, grid, n).real();
        prob.b = prob.A * inst.x0;
        const RecoveryResult res = solve_bp(prob);

        TrialOut out;
        out.l1 = (res.solution - inst.x0).lpNorm<1>() / static_cast<double>(opts.p);
        out.linf = (res.solution - inst.x0).lpNorm<Eigen::Infinity>();
        out.optimal = res.status == SolveStatus::Optimal;
        outs[task] = out;
    };

    if (n_trials > 0) {
        if (opts.parallel) par::for_index(outs.size(), run_trial);
        else par::for_index_serial(outs.size(), run_trial);
    }

    SweepReport report;
    for (int s = 1; s <= smax; ++s) {
        SweepCell cell;
        cell.s = s;
        cell.n = 2 * s + 1;
        cell.trials = std::max(n_trials, 0);
        double sum = 0.0;
        for (int t = 0; t < n_trials; ++t) {
            const TrialOut& out = outs[static_cast<std::size_t>(s - 1) * n_trials + t];
            sum += out.l1;
            if (out.linf <= kExactRecoveryTol) ++cell.success_count;
            if (!out.optimal) ++cell.failures;
        }
        cell.mean_l1_error = n_trials > 0 ? sum / n_trials : 0.0;
        report.cells.push_back(cell);
        if (n_trials > 0) {
            report.max_err = std::max(report.max_err, cell.mean_l1_error);
            report.max_err_defined = true;
        }
    }
    return report;
}

SweepReport run_figure2(const Figure2Options& opts) {
    std::vector<double> deltas = opts.deltas;
    if (deltas.empty()) {
        for (int d = 15; d <= 55; d += 5) deltas.push_back(1.0 / static_cast<double>(d));
    }
    std::vector<int> degrees = opts.degrees;
    if (degrees.empty()) {
        for (int n = 20; n <= 100; n += 10) degrees.push_back(n);
    }

    struct TrialOut {
        bool verified = false;
        bool failed = false;
    };
    const std::size_t n_cells = deltas.size() * degrees.size();
    const std::size_t n_tasks = n_cells * static_cast<std::size_t>(std::max(opts.trials, 0));
    std::vector<TrialOut> outs(n_tasks);

    auto run_trial = [&](std::size_t task) {
        const std::size_t cell = task / static_cast<std::size_t>(opts.trials);
        const std::size_t trial = task % static_cast<std::size_t>(opts.trials);
        const double delta = deltas[cell / degrees.size()];
        const int n = degrees[cell % degrees.size()];
        const std::uint64_t trial_seed = CounterRng::derive(opts.seed, cell, trial);
        TrialOut out;
        try {
            const JordanSupport jordan =
                gen_delta_spaced_jordan(opts.sparsity, delta, trial_seed, Interval{0.0, 1.0});
            const FunctionFamily fam = FunctionFamily::cosine(n);
            out.verified = build_l2_sign_interpolant(fam, jordan, n).report.verified;
        } catch (const std::exception&) {
            out.failed = true;
        }
        outs[task] = out;
    };

    if (opts.trials > 0) {
        if (opts.parallel) par::for_index(n_tasks, run_trial);
        else par::for_index_serial(n_tasks, run_trial);
    }

    SweepReport report;
    std::size_t cell_idx = 0;
    for (double delta : deltas) {
        for (int n : degrees) {
            SweepCell cell;
            cell.s = opts.sparsity;
            cell.n = n;
            cell.delta = delta;
            cell.trials = std::max(opts.trials, 0);
            for (int t = 0; t < opts.trials; ++t) {
                const TrialOut& out = outs[cell_idx * static_cast<std::size_t>(opts.trials) +
                                           static_cast<std::size_t>(t)];
                if (out.verified) ++cell.success_count;
                if (out.failed) ++cell.failures;
            }
            report.cells.push_back(cell);
            ++cell_idx;
        }
    }
    return report;
}

Figure1Result run_figure1(const Figure1Config& cfg) {
    if (cfg.s > std::min(cfg.n / 2, cfg.p)) {
        throw std::invalid_argument("run_figure1: requires s <= min(n/2, p)");
    }
    CounterRng rng(cfg.seed);
    const FunctionFamily fam = FunctionFamily::cosine(cfg.n);

    Figure1Result result;
    result.config = cfg;
    result.grid = interior_grid(cfg.p, fam.interval());
    const SparseInstance inst = gen_sparse_instance(cfg.p, cfg.s, rng);
    result.target = inst.x0;

    BasisPursuitProblem prob;
    prob.A = vandermonde_serial(fam, result.grid, cfg.n).real();
    prob.b = prob.A * inst.x0;

    SolverOptions sopts;
    result.solver = solve_bp(prob, sopts);
    result.recovered = result.solver.solution;
    result.l1_error_per_p = (result.recovered - result.target).lpNorm<1>() / cfg.p;
    result.linf_error = (result.recovered - result.target).lpNorm<Eigen::Infinity>();

    result.support_covered = true;
    for (int j : inst.support) {
        if (result.target(j) > sopts.atom_prune_tol &&
            std::abs(result.recovered(j)) <= sopts.atom_prune_tol) {
            result.support_covered = false;
            break;
        }
    }
    return result;
}

double CounterexampleResult::weight_at(double x) const {
    const auto& k = weight_knots;
    if (k.empty()) return 1.0;
    if (x <= k.front().first) return k.front().second;
    if (x >= k.back().first) return k.back().second;
    for (std::size_t i = 1; i < k.size(); ++i) {
        if (x <= k[i].first) {
            const double t = (x - k[i - 1].first) / (k[i].first - k[i - 1].first);
            return k[i - 1].second + t * (k[i].second - k[i - 1].second);
        }
    }
    return k.back().second;
}

CounterexampleResult counterexample(int s, int n, std::uint64_t seed) {
    if (s < 1) throw std::invalid_argument("counterexample: need s >= 1");
    if (n < 2 * s) throw std::invalid_argument("counterexample: need n >= 2s");
    CounterRng rng(seed);
    const FunctionFamily base = FunctionFamily::power(n);

    const int max_attempts = 50;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        // Nonnegative target measure with comfortably separated support.
        std::vector<double> xs(static_cast<std::size_t>(s));
        const double min_sep = 1.0 / (2.0 * s + 2.0);
        bool ok = true;
        for (int tries = 0;; ++tries) {
            if (tries > 10000) {
                ok = false;
                break;
            }
            for (double& x : xs) x = rng.next_uniform(-0.95, 0.95);
            std::sort(xs.begin(), xs.end());
            bool sep = true;
            for (int i = 1; i < s; ++i) {
                if (xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(i - 1)] < min_sep) {
                    sep = false;
                    break;
                }
            }
            if (sep) break;
        }
        if (!ok) continue;

        std::vector<Atom> sigma_atoms;
        for (double x : xs) sigma_atoms.push_back(Atom{x, 0.1 + rng.next_chi2_1()});
        const DiscreteMeasure sigma(sigma_atoms, base.interval());

        // n+1 fresh points, Chebyshev-spread with jitter, away from supp(sigma).
        std::vector<double> ts(static_cast<std::size_t>(n) + 1);
        bool nodes_ok = true;
        for (int i = 0; i <= n; ++i) {
            double t = 0.0;
            bool found = false;
            for (int tries = 0; tries < 200; ++tries) {
                const double cheb = std::cos((2.0 * i + 1.0) * std::numbers::pi / (2.0 * (n + 1)));
                t = cheb + rng.next_uniform(-0.2, 0.2) / (n + 1);
                if (t <= -1.0 || t >= 1.0) continue;
                bool clear = true;
                for (double x : xs) {
                    if (std::abs(t - x) < 1e-3) {
                        clear = false;
                        break;
                    }
                }
                for (int j = 0; j < i; ++j) {
                    if (std::abs(t - ts[static_cast<std::size_t>(j)]) < 1e-6) {
                        clear = false;
                        break;
                    }
                }
                if (clear) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                nodes_ok = false;
                break;
            }
            ts[static_cast<std::size_t>(i)] = t;
        }
        if (!nodes_ok) continue;
        std::sort(ts.begin(), ts.end());

        // Match the homogeneous moments of sigma on the fresh points.
        const MatrixXd v = vandermonde_serial(base, ts, n).real();
        const std::vector<double> mom = moments(sigma, base, n).real_values();
        const VectorXd rhs = Eigen::Map<const VectorXd>(mom.data(), static_cast<Index>(mom.size()));
        Eigen::FullPivLU<MatrixXd> lu(v);
        if (!lu.isInvertible()) continue;
        VectorXd nu = lu.solve(rhs);
        for (int refine = 0; refine < 2; ++refine) {
            nu += lu.solve(rhs - v * nu);
        }
        const double resid =
            (v * nu - rhs).lpNorm<Eigen::Infinity>() / (1.0 + rhs.lpNorm<Eigen::Infinity>());
        if (resid > 1e-11) continue;

        const double tv_sigma = tv_norm(sigma);
        const double nu_l1 = nu.lpNorm<1>();
        const double r = tv_sigma / (nu_l1 + 1.0);
        if (std::abs(r - 1.0) < 1e-6) continue;  // weight must be nonconstant

        std::vector<Atom> mu_atoms;
        for (Index i = 0; i < nu.size(); ++i) {
            const double w = r * nu(i);
            if (std::abs(w) >= DiscreteMeasure::kMinWeight) {
                mu_atoms.push_back(Atom{ts[static_cast<std::size_t>(i)], w});
            }
        }
        const DiscreteMeasure mu(mu_atoms, base.interval());

        // Piecewise-linear positive weight: r on supp(sigma), 1 on supp(mu)
        // and at the endpoints.
        std::vector<std::pair<double, double>> knots;
        knots.emplace_back(-1.0, 1.0);
        knots.emplace_back(1.0, 1.0);
        for (double x : xs) knots.emplace_back(x, r);
        for (double t : ts) knots.emplace_back(t, 1.0);
        std::sort(knots.begin(), knots.end());

        CounterexampleResult result{sigma, mu, base, std::move(knots), tv_sigma, tv_norm(mu), 0.0,
                                    attempt};

        // Both moment vectors under the weighted (non-homogeneous) system,
        // evaluated directly.
        double gap = 0.0, scale = 1.0;
        for (int k = 0; k <= n; ++k) {
            double ms = 0.0, mm = 0.0;
            for (const Atom& a : sigma.atoms()) {
                ms += a.weight * result.weight_at(a.location) * base.evaluate_real(k, a.location);
            }
            for (const Atom& a : mu.atoms()) {
                mm += a.weight * result.weight_at(a.location) * base.evaluate_real(k, a.location);
            }
            gap = std::max(gap, std::abs(ms - mm));
            scale = std::max(scale, std::abs(ms));
        }
        result.moment_gap = gap / scale;
        if (result.moment_gap > 1e-9) continue;
        if (!(result.tv_mu < result.tv_sigma)) continue;
        return result;
    }
    throw std::runtime_error("counterexample: construction failed after bounded retries");
}

// ---- emission ----------------------------------------------------------------

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

nlohmann::json cells_to_json(const SweepReport& r, bool figure2) {
    auto arr = nlohmann::json::array();
    for (const SweepCell& c : r.cells) {
        nlohmann::json jc;
        jc["s"] = c.s;
        jc["n"] = c.n;
        if (figure2) jc["delta"] = c.delta;
        jc["trials"] = c.trials;
        jc["success_count"] = c.success_count;
        if (!figure2) jc["mean_l1_error"] = c.mean_l1_error;
        jc["failures"] = c.failures;
        arr.push_back(std::move(jc));
    }
    return arr;
}

}  // namespace

std::string figure1_json(const Figure1Result& r) {
    nlohmann::json j;
    j["experiment"] = "figure1";
    j["seed"] = r.config.seed;
    j["s"] = r.config.s;
    j["n"] = r.config.n;
    j["p"] = r.config.p;
    j["l1_error_per_p"] = r.l1_error_per_p;
    j["linf_error"] = r.linf_error;
    j["support_covered"] = r.support_covered;
    j["solver"] = {{"status", to_string(r.solver.status)},
                   {"iterations", r.solver.iterations},
                   {"objective", r.solver.objective},
                   {"duality_gap", r.solver.duality_gap},
                   {"residual_norm", r.solver.residual_norm}};
    auto coords = nlohmann::json::array();
    for (Index i = 0; i < r.target.size(); ++i) {
        if (r.target(i) != 0.0 || std::abs(r.recovered(i)) > 1e-12) {
            coords.push_back({{"index", i},
                              {"t", r.grid[static_cast<std::size_t>(i)]},
                              {"target", r.target(i)},
                              {"recovered", r.recovered(i)},
                              {"abs_error", std::abs(r.recovered(i) - r.target(i))}});
        }
    }
    j["coordinates"] = std::move(coords);
    return j.dump(2);
}

std::string figure1_csv(const Figure1Result& r) {
    std::ostringstream os;
    os << "index,t,target,recovered,abs_error\n";
    os.precision(17);
    for (Index i = 0; i < r.target.size(); ++i) {
        os << i << ',' << r.grid[static_cast<std::size_t>(i)] << ',' << r.target(i) << ','
           << r.recovered(i) << ',' << std::abs(r.recovered(i) - r.target(i)) << '\n';
    }
    return os.str();
}

std::string figure1_svg(const Figure1Result& r) {
    const double w = 860, h = 430, ml = 60, mr = 20, mt = 25, mb = 50;
    svg::Document doc(w, h);
    double ymax = 1e-9;
    ymax = std::max(ymax, r.target.maxCoeff());
    ymax = std::max(ymax, r.recovered.maxCoeff());
    ymax *= 1.1;
    auto px = [&](double t) { return ml + t * (w - ml - mr); };
    auto py = [&](double v) { return h - mb - (v / ymax) * (h - mt - mb); };

    doc.line(ml, h - mb, w - mr, h - mb, "black");
    doc.line(ml, mt, ml, h - mb, "black");
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        doc.line(px(t), h - mb, px(t), h - mb + 5, "black");
        std::ostringstream lbl;
        lbl << t;
        doc.text(px(t), h - mb + 20, lbl.str(), 11, "middle");
    }
    {
        std::ostringstream lbl;
        lbl.precision(3);
        lbl << ymax;
        doc.text(ml - 8, mt + 4, lbl.str(), 11, "end");
        doc.text(ml - 8, h - mb + 4, "0", 11, "end");
    }
    std::ostringstream title;
    title << "recovery: s=" << r.config.s << " n=" << r.config.n << " p=" << r.config.p
          << "  l1/p=" << r.l1_error_per_p;
    doc.text(ml, mt - 8, title.str(), 12);

    for (Index i = 0; i < r.target.size(); ++i) {
        const double t = r.grid[static_cast<std::size_t>(i)];
        if (r.target(i) > 0.0) {
            doc.line(px(t), py(0), px(t), py(r.target(i)), "#9ecff5");
            doc.circle(px(t), py(r.target(i)), 4, "#1f77b4");
        }
        if (std::abs(r.recovered(i)) > 1e-8) {
            doc.cross(px(t), py(r.recovered(i)), 3.2, "black");
        }
    }
    return doc.str();
}

std::string err_sweep_json(const SweepReport& r) {
    nlohmann::json j;
    j["experiment"] = "err-sweep";
    j["cells"] = cells_to_json(r, false);
    j["max_err"] = r.max_err;
    j["max_err_defined"] = r.max_err_defined;
    return j.dump(2);
}

std::string err_sweep_csv(const SweepReport& r) {
    std::ostringstream os;
    os << "s,n,trials,success_count,mean_l1_error,failures\n";
    os.precision(17);
    for (const SweepCell& c : r.cells) {
        os << c.s << ',' << c.n << ',' << c.trials << ',' << c.success_count << ','
           << c.mean_l1_error << ',' << c.failures << '\n';
    }
    return os.str();
}

std::string err_sweep_svg(const SweepReport& r) {
    const double w = 760, h = 420, ml = 70, mr = 20, mt = 25, mb = 50;
    svg::Document doc(w, h);
    const double ylo = -16.0, yhi = 0.0;  // log10(Err)
    int smax = 1;
    for (const SweepCell& c : r.cells) smax = std::max(smax, c.s);
    auto px = [&](double s) { return ml + (s - 1.0) / std::max(smax - 1, 1) * (w - ml - mr); };
    auto py = [&](double v) {
        const double lg = std::clamp(std::log10(std::max(v, 1e-16)), ylo, yhi);
        return h - mb - (lg - ylo) / (yhi - ylo) * (h - mt - mb);
    };
    doc.line(ml, h - mb, w - mr, h - mb, "black");
    doc.line(ml, mt, ml, h - mb, "black");
    for (int e = 0; e >= -16; e -= 4) {
        const double y = py(std::pow(10.0, e));
        doc.line(ml - 4, y, ml, y, "black");
        std::ostringstream lbl;
        lbl << "1e" << e;
        doc.text(ml - 8, y + 4, lbl.str(), 10, "end");
    }
    doc.text((ml + w - mr) / 2, h - 12, "sparsity s", 12, "middle");
    doc.text(ml, mt - 8, "mean l1 error / p (log scale), threshold 0.05 dashed", 12);

    doc.line(ml, py(0.05), w - mr, py(0.05), "#d62728");
    std::ostringstream pts;
    for (const SweepCell& c : r.cells) {
        pts << px(c.s) << ',' << py(c.mean_l1_error) << ' ';
        doc.circle(px(c.s), py(c.mean_l1_error), 2.2, "#1f77b4", "#1f77b4");
    }
    doc.polyline(pts.str(), "#1f77b4", 1.2);
    return doc.str();
}

std::string figure2_json(const SweepReport& r) {
    nlohmann::json j;
    j["experiment"] = "figure2";
    j["cells"] = cells_to_json(r, true);
    return j.dump(2);
}

std::string figure2_csv(const SweepReport& r) {
    std::ostringstream os;
    os << "delta,n,trials,success_count,failures,success_rate\n";
    os.precision(17);
    for (const SweepCell& c : r.cells) {
        const double rate = c.trials > 0 ? static_cast<double>(c.success_count) / c.trials : 0.0;
        os << c.delta << ',' << c.n << ',' << c.trials << ',' << c.success_count << ','
           << c.failures << ',' << rate << '\n';
    }
    return os.str();
}

std::string figure2_svg(const SweepReport& r) {
    std::vector<double> deltas;
    std::vector<int> degrees;
    for (const SweepCell& c : r.cells) {
        if (std::find(deltas.begin(), deltas.end(), c.delta) == deltas.end()) deltas.push_back(c.delta);
        if (std::find(degrees.begin(), degrees.end(), c.n) == degrees.end()) degrees.push_back(c.n);
    }
    std::sort(deltas.begin(), deltas.end(), std::greater<>());  // abscissa is 1/delta
    std::sort(degrees.begin(), degrees.end());

    const double cell = 42, ml = 70, mb = 55, mt = 30, mr = 20;
    const double w = ml + mr + cell * static_cast<double>(deltas.size());
    const double h = mt + mb + cell * static_cast<double>(degrees.size());
    svg::Document doc(w, h);
    doc.text(ml, mt - 10, "certificate success rate (white = 100%)", 12);

    for (const SweepCell& c : r.cells) {
        const auto ci = static_cast<double>(
            std::find(deltas.begin(), deltas.end(), c.delta) - deltas.begin());
        const auto ri = static_cast<double>(
            std::find(degrees.begin(), degrees.end(), c.n) - degrees.begin());
        const double rate = c.trials > 0 ? static_cast<double>(c.success_count) / c.trials : 0.0;
        const double x = ml + ci * cell;
        const double y = h - mb - (ri + 1.0) * cell;
        doc.rect(x, y, cell, cell, svg::gray(rate), "#888888");
    }
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        std::ostringstream lbl;
        lbl << std::lround(1.0 / deltas[i]);
        doc.text(ml + (static_cast<double>(i) + 0.5) * cell, h - mb + 18, lbl.str(), 11, "middle");
    }
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        std::ostringstream lbl;
        lbl << degrees[i];
        doc.text(ml - 8, h - mb - (static_cast<double>(i) + 0.5) * cell + 4, lbl.str(), 11, "end");
    }
    doc.text((ml + w - mr) / 2, h - 14, "1/delta", 12, "middle");
    doc.text(18, mt + (h - mt - mb) / 2, "n", 12, "middle");
    return doc.str();
}

std::string counterexample_svg(const CounterexampleResult& r) {
    const double w = 760, h = 400, ml = 60, mr = 20, mt = 30, mb = 45;
    svg::Document doc(w, h);
    double ymax = 1e-9, ymin = 0.0;
    for (const Atom& a : r.sigma.atoms()) ymax = std::max(ymax, a.weight);
    for (const Atom& a : r.mu.atoms()) {
        ymax = std::max(ymax, a.weight);
        ymin = std::min(ymin, a.weight);
    }
    ymax *= 1.15;
    ymin = ymin * 1.15 - 0.05 * ymax;
    auto px = [&](double t) { return ml + (t + 1.0) / 2.0 * (w - ml - mr); };
    auto py = [&](double v) { return h - mb - (v - ymin) / (ymax - ymin) * (h - mt - mb); };

    doc.line(ml, py(0.0), w - mr, py(0.0), "black");
    doc.line(ml, mt, ml, h - mb, "black");
    for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        doc.line(px(t), py(0.0), px(t), py(0.0) + 4, "black");
        std::ostringstream lbl;
        lbl << t;
        doc.text(px(t), h - mb + 24, lbl.str(), 11, "middle");
    }
    std::ostringstream title;
    title.precision(6);
    title << "equal moments under the weighted system: tv(circles) = " << r.tv_sigma
          << " > tv(crosses) = " << r.tv_mu;
    doc.text(ml, mt - 10, title.str(), 12);

    for (const Atom& a : r.sigma.atoms()) {
        doc.line(px(a.location), py(0.0), px(a.location), py(a.weight), "#9ecff5");
        doc.circle(px(a.location), py(a.weight), 4, "#1f77b4");
    }
    for (const Atom& a : r.mu.atoms()) {
        doc.line(px(a.location), py(0.0), px(a.location), py(a.weight), "#dddddd");
        doc.cross(px(a.location), py(a.weight), 3.2, "black");
    }
    return doc.str();
}

std::string counterexample_json(const CounterexampleResult& r) {
    nlohmann::json j;
    j["experiment"] = "counterexample";
    j["sigma"] = nlohmann::json::parse(r.sigma.to_json());
    j["mu"] = nlohmann::json::parse(r.mu.to_json());
    j["base_family"] = nlohmann::json::parse(r.base_family.to_json());
    auto knots = nlohmann::json::array();
    for (const auto& [x, v] : r.weight_knots) knots.push_back({x, v});
    j["weight_knots"] = std::move(knots);
    j["tv_sigma"] = r.tv_sigma;
    j["tv_mu"] = r.tv_mu;
    j["moment_gap"] = r.moment_gap;
    j["retries"] = r.retries;
    return j.dump(2);
}

}  // namespace minext
