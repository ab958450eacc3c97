#ifndef FRACPORT_LINALG_HPP
#define FRACPORT_LINALG_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fracport {

/// Dense row-major matrix of doubles. Small helper, not a linear algebra
/// library: just what the solvers and baselines need.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}
    Matrix(std::size_t r, std::size_t c, std::initializer_list<double> values);

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }

    /// Euclidean norm of column c.
    double col_norm(std::size_t c) const;

    bool all_finite() const;
};

/// Solve A x = b by LU with partial pivoting. A is consumed by value.
/// Throws SolverError on (numerical) singularity; the message carries the
/// ratio max|U_ii|/min|U_ii| as a rough conditioning diagnostic.
std::vector<double> lu_solve(Matrix a, std::vector<double> b);

/// Largest singular value of M, via power iteration on the Gram operator
/// v -> M^T(Mv). Deterministic seeded start vector.
double spectral_norm(const Matrix& m, double tol = 1e-10, int max_iters = 10000);

} // namespace fracport

#endif
