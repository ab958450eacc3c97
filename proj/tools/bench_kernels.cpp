// Micro-benchmark for the kernel backends: ns/op for each kernel at solver
// sizes, scalar vs SIMD. Build product, not installed.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "fracport/kernels.hpp"

using namespace fracport::kernels;
using clock_type = std::chrono::steady_clock;

namespace {

volatile double g_sink; // defeat dead-code elimination

template <typename F>
double ns_per_call(F&& f, std::size_t iters) {
    f(); // warm
    const auto t0 = clock_type::now();
    for (std::size_t i = 0; i < iters; ++i) f();
    const auto dt = std::chrono::duration<double, std::nano>(clock_type::now() - t0);
    return dt.count() / static_cast<double>(iters);
}

} // namespace

int main() {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> dist(0.0, 1.0);

    const std::size_t t = 120, n = 100, iters = 20000;
    std::vector<double> m(t * n), x(n), xt(t), y(n > t ? n : t), out(n);
    for (auto& v : m) v = dist(rng);
    for (auto& v : x) v = dist(rng);
    for (auto& v : xt) v = dist(rng);

    std::printf("kernel timings, T=%zu n=%zu (%zu iters)\n", t, n, iters);
    std::printf("%-16s %12s %12s %8s\n", "kernel", "scalar ns", "simd ns", "speedup");

    struct Row {
        const char* name;
        double scalar_ns;
        double simd_ns;
    };
    std::vector<Row> rows;

    for (Backend b : {Backend::Scalar, Backend::Avx2}) {
        if (!supported(b)) continue;
        const Ops& k = ops_for(b);
        const bool scalar = b == Backend::Scalar;
        auto record = [&](const char* name, double ns) {
            if (scalar) {
                rows.push_back({name, ns, 0.0});
            } else {
                for (auto& r : rows)
                    if (std::string_view(r.name) == name) r.simd_ns = ns;
            }
        };

        record("dot", ns_per_call([&] { g_sink = k.dot(x.data(), x.data(), n); }, iters));
        record("sum_squares",
               ns_per_call([&] { g_sink = k.sum_squares(m.data(), t * n); }, iters / 10));
        record("penalty_sum",
               ns_per_call([&] { g_sink = k.penalty_sum(1.0, x.data(), n); }, iters));
        record("abs_max", ns_per_call([&] { g_sink = k.abs_max(x.data(), n); }, iters));
        record("matvec", ns_per_call(
                             [&] {
                                 k.matvec(m.data(), t, n, x.data(), y.data());
                                 g_sink = y[0];
                             },
                             iters / 10));
        record("matvec_t", ns_per_call(
                               [&] {
                                   k.matvec_t(m.data(), t, n, xt.data(), y.data());
                                   g_sink = y[0];
                               },
                               iters / 10));
        record("project_nonneg", ns_per_call(
                                     [&] {
                                         k.project_nonneg(x.data(), out.data(), n);
                                         g_sink = out[0];
                                     },
                                     iters));
        // dense: most entries above threshold, transcendental-bound;
        // sparse: the solver regime, where nearly everything zeroes out
        record("threshold dense", ns_per_call(
                                      [&] {
                                          k.threshold_apply(1.0, 0.05, 0.4, x.data(),
                                                            out.data(), n);
                                          g_sink = out[0];
                                      },
                                      iters));
        record("threshold sparse", ns_per_call(
                                       [&] {
                                           k.threshold_apply(1.0, 8.0, 2.8, x.data(),
                                                             out.data(), n);
                                           g_sink = out[0];
                                       },
                                       iters));
    }

    for (const auto& r : rows) {
        if (r.simd_ns > 0.0)
            std::printf("%-16s %12.1f %12.1f %7.2fx\n", r.name, r.scalar_ns, r.simd_ns,
                        r.scalar_ns / r.simd_ns);
        else
            std::printf("%-16s %12.1f %12s %8s\n", r.name, r.scalar_ns, "-", "-");
    }
    return 0;
}
