#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "h2net/settings.hpp"

namespace h2net {

// Dense real matrix, row-major.  Construction from explicit entries
// rejects NaN/Inf; results of arithmetic are not re-validated.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);   // zero-filled
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix zeros(std::size_t rows, std::size_t cols);
    static DenseMatrix diagonal(const std::vector<double>& d);
    static DenseMatrix column(const std::vector<double>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<double>& entries() const { return data_; }

    DenseMatrix transposed() const;
    double trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    DenseMatrix block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const;
    void set_block(std::size_t i0, std::size_t j0, const DenseMatrix& m);

    DenseMatrix& operator+=(const DenseMatrix& rhs);
    DenseMatrix& operator-=(const DenseMatrix& rhs);
    DenseMatrix& operator*=(double s);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs);
DenseMatrix operator*(double s, DenseMatrix m);
DenseMatrix operator*(DenseMatrix m, double s);
DenseMatrix operator-(DenseMatrix m);

// (A + A^T) / 2
DenseMatrix symmetrize(const DenseMatrix& a);

// ||A - B||_F
double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b);

// Kronecker product: (A (x) B)[i*p+k, j*q+l] = A[i,j] * B[k,l].
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);

// Solve A X = B by LU with partial pivoting.  Throws SingularMatrix when a
// pivot falls below the relative floor.
DenseMatrix lu_solve(const DenseMatrix& a, const DenseMatrix& b,
                     const NumericSettings& ns = NumericSettings::global());

struct SymEig {
    std::vector<double> values; // ascending
    DenseMatrix vectors;        // orthogonal, columns are eigenvectors
};

// Symmetric eigendecomposition by cyclic Jacobi sweeps; the input is
// symmetrized internally.  Throws NoConvergence after the sweep budget.
SymEig sym_eig(const DenseMatrix& s,
               const NumericSettings& ns = NumericSettings::global());

// exp(A t) via scaling-and-squaring with a diagonal Pade(6,6) approximant.
// Throws ExpmOverflow when ||A t||_F exceeds the configured limit.
DenseMatrix expm(const DenseMatrix& a, double t,
                 const NumericSettings& ns = NumericSettings::global());

// Lower-triangular L with L L^T = S, or nullopt when S is not positive
// definite (three-valued outcome, not an error).
std::optional<DenseMatrix> cholesky_pd(const DenseMatrix& s,
                                       const NumericSettings& ns = NumericSettings::global());

} // namespace h2net
