#include "fracport/kernels.hpp"

#include <cmath>

// Reference kernels. Plain loops, no blocking: problem sizes here are
// n <= a few hundred assets and T <= a few hundred months.

namespace fracport::kernels::scalar {

double dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_squares(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double abs_max(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::fabs(x[i]);
        if (a > m) m = a;
    }
    return m;
}

double penalty_sum(double a, const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double at = a * std::fabs(x[i]);
        acc += at / (at + 1.0);
    }
    return acc;
}

void project_nonneg(const double* v, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = v[i] > 0.0 ? v[i] : 0.0;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void matvec(const double* m, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = m + r * cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void matvec_t(const double* m, std::size_t rows, std::size_t cols,
              const double* x, double* y) {
    for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = m + r * cols;
        const double xr = x[r];
        for (std::size_t c = 0; c < cols; ++c) y[c] += xr * row[c];
    }
}

void threshold_apply(double a, double lam, double t_star,
                     const double* v, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::fabs(v[i]) <= t_star ? 0.0 : fraction_prox_g(a, lam, v[i]);
    }
}

extern const Ops table;
const Ops table = {dot,     sum_squares,    abs_max, penalty_sum,
                   project_nonneg, axpy,    matvec,  matvec_t,
                   threshold_apply};

} // namespace fracport::kernels::scalar
