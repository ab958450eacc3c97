#include "fracport/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fracport/errors.hpp"
#include "fracport/kernels.hpp"

namespace fracport {

Matrix::Matrix(std::size_t r, std::size_t c, std::initializer_list<double> values)
    : rows(r), cols(c), data(values) {
    if (data.size() != r * c) throw DimensionError("matrix initializer size mismatch");
}

double Matrix::col_norm(std::size_t c) const {
    double acc = 0.0;
    for (std::size_t r = 0; r < rows; ++r) acc += (*this)(r, c) * (*this)(r, c);
    return std::sqrt(acc);
}

bool Matrix::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

std::vector<double> lu_solve(Matrix a, std::vector<double> b) {
    if (a.rows != a.cols) throw DimensionError("lu_solve: matrix not square");
    if (b.size() != a.rows) throw DimensionError("lu_solve: rhs size mismatch");
    const std::size_t n = a.rows;

    double umax = 0.0, umin = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::fabs(a(k, k));
        for (std::size_t r = k + 1; r < n; ++r) {
            const double v = std::fabs(a(r, k));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
            std::swap(b[k], b[piv]);
        }
        const double pivot = a(k, k);
        const double ap = std::fabs(pivot);
        umax = k == 0 ? ap : std::max(umax, ap);
        umin = k == 0 ? ap : std::min(umin, ap);
        if (ap < 1e-300 || (umax > 0.0 && ap < 1e-14 * umax)) {
            std::ostringstream msg;
            msg << "singular linear system: pivot " << pivot << " at step " << k
                << ", |U_ii| spread " << (ap > 0.0 ? umax / ap : std::numeric_limits<double>::infinity());
            throw SolverError(msg.str());
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            const double f = a(r, k) / pivot;
            a(r, k) = f;
            for (std::size_t c = k + 1; c < n; ++c) a(r, c) -= f * a(k, c);
            b[r] -= f * b[k];
        }
    }
    // back substitution
    std::vector<double> x(n);
    for (std::size_t ri = n; ri-- > 0;) {
        double acc = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) acc -= a(ri, c) * x[c];
        x[ri] = acc / a(ri, ri);
    }
    return x;
}

double spectral_norm(const Matrix& m, double tol, int max_iters) {
    if (m.rows == 0 || m.cols == 0) return 0.0;
    const auto& k = kernels::ops();

    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    std::vector<double> v(m.cols), mv(m.rows), u(m.cols);
    for (double& vi : v) vi = unif(rng);

    double norm = std::sqrt(k.sum_squares(v.data(), v.size()));
    for (double& vi : v) vi /= norm;

    double eig = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        k.matvec(m.data.data(), m.rows, m.cols, v.data(), mv.data());
        k.matvec_t(m.data.data(), m.rows, m.cols, mv.data(), u.data());
        const double unorm = std::sqrt(k.sum_squares(u.data(), u.size()));
        if (unorm == 0.0) return 0.0; // v in the null space and M^T M v = 0
        const double prev = eig;
        eig = k.dot(u.data(), v.data(), v.size()); // Rayleigh quotient, ||v|| = 1
        for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] / unorm;
        if (it > 0 && std::fabs(eig - prev) <= tol * std::max(1.0, std::fabs(eig))) break;
    }
    return std::sqrt(std::max(eig, 0.0));
}

} // namespace fracport
