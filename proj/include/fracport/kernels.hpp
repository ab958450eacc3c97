#ifndef FRACPORT_KERNELS_HPP
#define FRACPORT_KERNELS_HPP

#include <cstddef>
#include <span>

namespace fracport::kernels {

/// Instruction-set backend for the arithmetic inner loops. `Scalar` is the
/// portable reference; `Avx2` is selected automatically at startup on CPUs
/// that support it. The environment variable FRACPORT_KERNEL=scalar|avx2
/// overrides the automatic choice.
enum class Backend { Scalar, Avx2 };

/// Function table for one backend. All matrices are dense row-major.
struct Ops {
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum_squares)(const double* x, std::size_t n);
    double (*abs_max)(const double* x, std::size_t n);
    /// sum_i a|x_i| / (a|x_i| + 1)
    double (*penalty_sum)(double a, const double* x, std::size_t n);
    /// out_i = max(0, v_i); negative zero maps to +0.
    void (*project_nonneg)(const double* v, double* out, std::size_t n);
    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    /// y = M x  (M rows x cols, y has length rows)
    void (*matvec)(const double* m, std::size_t rows, std::size_t cols,
                   const double* x, double* y);
    /// y = M^T x  (y has length cols)
    void (*matvec_t)(const double* m, std::size_t rows, std::size_t cols,
                     const double* x, double* y);
    /// Fraction-penalty thresholding: out_i = 0 where |v_i| <= t_star,
    /// otherwise the closed-form scalar prox g_{a,lam}(v_i). Entries that
    /// survive the threshold are evaluated with the shared scalar routine in
    /// every backend, so survivor values are bit-identical across backends.
    void (*threshold_apply)(double a, double lam, double t_star,
                            const double* v, double* out, std::size_t n);
};

/// Backend chosen at startup (or forced via set_backend / environment).
Backend active_backend();

/// Force a backend. Returns false (and leaves the selection unchanged) if
/// the requested backend is not supported on this CPU/build.
bool set_backend(Backend b);

bool supported(Backend b);
const char* name(Backend b);

/// Table for the active backend.
const Ops& ops();

/// Table for an explicit backend (throws ConfigError if unsupported).
/// Used by the scalar/SIMD equivalence tests.
const Ops& ops_for(Backend b);

/// Closed-form scalar minimizer of (beta - gamma)^2 + lam * a|beta|/(a|beta|+1)
/// on the branch where the minimizer is nonzero. Shared by all backends and
/// by the prox module. Throws NumericError if the arccos argument leaves
/// [-1, 1] by more than 1e-12; smaller excursions are clamped.
double fraction_prox_g(double a, double lam, double gamma);

} // namespace fracport::kernels

#endif
