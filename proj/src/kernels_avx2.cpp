#include "fracport/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <cmath>
#include <immintrin.h>

// AVX2 variants of the inner-loop kernels. Reductions use four-lane
// accumulators, so their rounding differs from the scalar reference by
// association only; the equivalence tests compare against scalar with a
// relative tolerance. Elementwise kernels (project_nonneg, the threshold
// mask) are exact matches of the scalar semantics.

namespace fracport::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline __m256d abs_pd(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

} // namespace

double dot(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i),
                                               _mm256_loadu_pd(y + i)));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sum_squares(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

double abs_max(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
    }
    double lanes[4];
    _mm256_storeu_pd(lanes, acc);
    double m = lanes[0];
    for (int k = 1; k < 4; ++k) m = lanes[k] > m ? lanes[k] : m;
    for (; i < n; ++i) {
        const double a = std::fabs(x[i]);
        if (a > m) m = a;
    }
    return m;
}

double penalty_sum(double a, const double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d at = _mm256_mul_pd(va, abs_pd(_mm256_loadu_pd(x + i)));
        acc = _mm256_add_pd(acc, _mm256_div_pd(at, _mm256_add_pd(at, one)));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double at = a * std::fabs(x[i]);
        s += at / (at + 1.0);
    }
    return s;
}

void project_nonneg(const double* v, double* out, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(v + i);
        // keep x where x > 0, exact +0.0 elsewhere (matches scalar branch)
        const __m256d mask = _mm256_cmp_pd(x, zero, _CMP_GT_OQ);
        _mm256_storeu_pd(out + i, _mm256_and_pd(x, mask));
    }
    for (; i < n; ++i) out[i] = v[i] > 0.0 ? v[i] : 0.0;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d yi = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i,
                         _mm256_add_pd(yi, _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec(const double* m, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot(m + r * cols, x, cols);
}

void matvec_t(const double* m, std::size_t rows, std::size_t cols,
              const double* x, double* y) {
    for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) axpy(x[r], m + r * cols, y, cols);
}

void threshold_apply(double a, double lam, double t_star,
                     const double* v, double* out, std::size_t n) {
    const __m256d vt = _mm256_set1_pd(t_star);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(v + i);
        const __m256d survive = _mm256_cmp_pd(abs_pd(x), vt, _CMP_GT_OQ);
        const int bits = _mm256_movemask_pd(survive);
        if (bits == 0) {
            _mm256_storeu_pd(out + i, _mm256_setzero_pd());
            continue;
        }
        // Survivors take the transcendental path; shared scalar routine
        // keeps values identical to the reference backend.
        for (int lane = 0; lane < 4; ++lane) {
            out[i + lane] = (bits & (1 << lane))
                                ? fraction_prox_g(a, lam, v[i + lane])
                                : 0.0;
        }
    }
    for (; i < n; ++i) {
        out[i] = std::fabs(v[i]) <= t_star ? 0.0 : fraction_prox_g(a, lam, v[i]);
    }
}

extern const Ops table;
const Ops table = {dot,     sum_squares,    abs_max, penalty_sum,
                   project_nonneg, axpy,    matvec,  matvec_t,
                   threshold_apply};

} // namespace fracport::kernels::avx2

#endif // x86_64
