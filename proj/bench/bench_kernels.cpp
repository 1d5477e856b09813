// Compares the OpenMP kernels against their serial reference implementations
// on realistic workloads and checks that both produce identical results.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "minext/certificate.hpp"
#include "minext/harness.hpp"
#include "minext/msystem.hpp"
#include "minext/parallel.hpp"
#include "minext/rng.hpp"

using namespace minext;

namespace {

double time_ms(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool equal) {
    std::printf("%-34s serial %9.2f ms   openmp %9.2f ms   speedup %5.2fx   results %s\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms, equal ? "identical" : "DIFFER");
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", par::max_threads());

    {
        // Certificate grid scan: the inner loop of every verification.
        const FunctionFamily fam = FunctionFamily::cosine(100);
        CounterRng rng(1);
        std::vector<double> coeffs(fam.size());
        for (double& c : coeffs) c = rng.next_normal();
        std::vector<double> centers{0.11, 0.37, 0.52, 0.78, 0.93};
        const int grid = 2000001;

        GridScanResult serial_result, parallel_result;
        const double ts = time_ms([&] {
            serial_result = scan_certificate_grid_serial(fam, coeffs, centers, 0.01, grid);
        });
        const double tp = time_ms([&] {
            parallel_result = scan_certificate_grid(fam, coeffs, centers, 0.01, grid);
        });
        report("certificate grid scan (2M points)", ts, tp,
               serial_result.sup_all == parallel_result.sup_all &&
                   serial_result.sup_off == parallel_result.sup_off);
    }

    {
        // Generalized Vandermonde assembly.
        const FunctionFamily fam = FunctionFamily::cosine(301);
        std::vector<double> nodes;
        for (int k = 1; k <= 4000; ++k) nodes.push_back(k / 4001.0);

        VandermondeMatrix vs, vp;
        const double ts = time_ms([&] { vs = vandermonde_serial(fam, nodes, 301); });
        const double tp = time_ms([&] { vp = vandermonde(fam, nodes, 301); });
        report("vandermonde assembly (302x4000)", ts, tp,
               (vs.real() - vp.real()).cwiseAbs().maxCoeff() == 0.0);
    }

    {
        // Recovery sweep: independent LP solves across (cell, trial) pairs.
        ErrSweepOptions opts;
        opts.p = 60;
        opts.trials = 4;
        opts.seed = 9;

        SweepReport rs, rp;
        opts.parallel = false;
        const double ts = time_ms([&] { rs = run_err_sweep(opts); }, 1);
        opts.parallel = true;
        const double tp = time_ms([&] { rp = run_err_sweep(opts); }, 1);
        bool equal = rs.max_err == rp.max_err && rs.cells.size() == rp.cells.size();
        for (std::size_t i = 0; equal && i < rs.cells.size(); ++i) {
            equal = rs.cells[i].mean_l1_error == rp.cells[i].mean_l1_error;
        }
        report("recovery sweep (116 solves)", ts, tp, equal);
    }

    {
        // Interpolant sweep: independent certificate builds per trial.
        Figure2Options opts;
        opts.seed = 4;
        opts.trials = 12;
        opts.deltas = {1.0 / 15.0, 1.0 / 35.0, 1.0 / 55.0};
        opts.degrees = {60, 80};

        SweepReport rs, rp;
        opts.parallel = false;
        const double ts = time_ms([&] { rs = run_figure2(opts); }, 1);
        opts.parallel = true;
        const double tp = time_ms([&] { rp = run_figure2(opts); }, 1);
        bool equal = rs.cells.size() == rp.cells.size();
        for (std::size_t i = 0; equal && i < rs.cells.size(); ++i) {
            equal = rs.cells[i].success_count == rp.cells[i].success_count;
        }
        report("interpolant sweep (72 certificates)", ts, tp, equal);
    }

    return 0;
}
