#include "h2net/matkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "h2net/errors.hpp"

namespace h2net {

namespace {

void check_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw InvalidInput("matrix entry is not finite");
        }
    }
}

void check_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidInput(std::string("shape mismatch in ") + op);
    }
}

} // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw InvalidInput("entry count does not match matrix shape");
    }
    check_finite(data_);
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw InvalidInput("ragged initializer for matrix");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
    check_finite(data_);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::zeros(std::size_t rows, std::size_t cols) {
    return DenseMatrix(rows, cols);
}

DenseMatrix DenseMatrix::diagonal(const std::vector<double>& d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

DenseMatrix DenseMatrix::column(const std::vector<double>& v) {
    return DenseMatrix(v.size(), 1, v);
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

double DenseMatrix::trace() const {
    if (!is_square()) throw InvalidInput("trace of non-square matrix");
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
    return s;
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

DenseMatrix DenseMatrix::block(std::size_t i0, std::size_t j0,
                               std::size_t r, std::size_t c) const {
    if (i0 + r > rows_ || j0 + c > cols_) throw InvalidInput("block out of range");
    DenseMatrix b(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            b(i, j) = (*this)(i0 + i, j0 + j);
        }
    }
    return b;
}

void DenseMatrix::set_block(std::size_t i0, std::size_t j0, const DenseMatrix& m) {
    if (i0 + m.rows() > rows_ || j0 + m.cols() > cols_) {
        throw InvalidInput("block out of range");
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            (*this)(i0 + i, j0 + j) = m(i, j);
        }
    }
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& rhs) {
    check_same_shape(*this, rhs, "operator+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& rhs) {
    check_same_shape(*this, rhs, "operator-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs) { return lhs += rhs; }
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs) { return lhs -= rhs; }
DenseMatrix operator*(double s, DenseMatrix m) { return m *= s; }
DenseMatrix operator*(DenseMatrix m, double s) { return m *= s; }
DenseMatrix operator-(DenseMatrix m) { return m *= -1.0; }

DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs) {
    if (lhs.cols() != rhs.rows()) throw InvalidInput("shape mismatch in operator*");
    DenseMatrix out(lhs.rows(), rhs.cols());
    const std::size_t n = lhs.rows(), k = lhs.cols(), m = rhs.cols();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const double a = lhs(i, p);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) {
                out(i, j) += a * rhs(p, j);
            }
        }
    }
    return out;
}

DenseMatrix symmetrize(const DenseMatrix& a) {
    if (!a.is_square()) throw InvalidInput("symmetrize of non-square matrix");
    DenseMatrix s(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s(i, j) = 0.5 * (a(i, j) + a(j, i));
        }
    }
    return s;
}

double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
    check_same_shape(a, b, "frobenius_distance");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double d = a(i, j) - b(i, j);
            s += d * d;
        }
    }
    return std::sqrt(s);
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            if (aij == 0.0) continue;
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

DenseMatrix lu_solve(const DenseMatrix& a, const DenseMatrix& b, const NumericSettings& ns) {
    if (!a.is_square()) throw InvalidInput("lu_solve: coefficient matrix not square");
    if (a.rows() != b.rows()) throw InvalidInput("lu_solve: shape mismatch");
    const std::size_t n = a.rows(), m = b.cols();
    const double pivot_floor = ns.lu_pivot_floor(a.frobenius_norm());

    DenseMatrix lu = a;
    DenseMatrix x = b;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(lu(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(lu(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (!(best > pivot_floor)) {
            throw SingularMatrix("lu_solve: pivot below floor (rank-deficient matrix)");
        }
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(piv, j));
            for (std::size_t j = 0; j < m; ++j) std::swap(x(col, j), x(piv, j));
        }
        const double inv = 1.0 / lu(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = lu(r, col) * inv;
            if (f == 0.0) continue;
            lu(r, col) = f;
            for (std::size_t j = col + 1; j < n; ++j) {
                lu(r, j) -= f * lu(col, j);
            }
            for (std::size_t j = 0; j < m; ++j) {
                x(r, j) -= f * x(col, j);
            }
        }
    }
    // back substitution
    for (std::size_t ri = n; ri-- > 0;) {
        for (std::size_t j = 0; j < m; ++j) {
            double s = x(ri, j);
            for (std::size_t k = ri + 1; k < n; ++k) {
                s -= lu(ri, k) * x(k, j);
            }
            x(ri, j) = s / lu(ri, ri);
        }
    }
    return x;
}

SymEig sym_eig(const DenseMatrix& s_in, const NumericSettings& ns) {
    if (!s_in.is_square()) throw InvalidInput("sym_eig: matrix not square");
    const std::size_t n = s_in.rows();
    DenseMatrix s = symmetrize(s_in);
    DenseMatrix v = DenseMatrix::identity(n);
    const double off_floor = ns.jacobi_off_floor(s.frobenius_norm());

    auto off_norm = [&]() {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                acc += 2.0 * s(i, j) * s(i, j);
            }
        }
        return std::sqrt(acc);
    };

    bool converged = off_norm() <= off_floor;
    for (int sweep = 0; !converged && sweep < ns.jacobi_max_sweeps; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (apq == 0.0) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e153) {
                    t = 0.5 / theta;   // avoid theta*theta overflow
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                const double tau = sn / (1.0 + c);

                const double app = s(p, p), aqq = s(q, q);
                s(p, p) = app - t * apq;
                s(q, q) = aqq + t * apq;
                s(p, q) = 0.0;
                s(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = s(k, p), akq = s(k, q);
                    s(k, p) = akp - sn * (akq + tau * akp);
                    s(p, k) = s(k, p);
                    s(k, q) = akq + sn * (akp - tau * akq);
                    s(q, k) = s(k, q);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp - sn * (vkq + tau * vkp);
                    v(k, q) = vkq + sn * (vkp - tau * vkq);
                }
            }
        }
        converged = off_norm() <= off_floor;
    }
    if (!converged) {
        throw NoConvergence("sym_eig: Jacobi sweeps exhausted");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return s(i, i) < s(j, j); });

    SymEig out;
    out.values.resize(n);
    out.vectors = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = s(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, j) = v(i, order[j]);
        }
    }
    return out;
}

DenseMatrix expm(const DenseMatrix& a, double t, const NumericSettings& ns) {
    if (!a.is_square()) throw InvalidInput("expm: matrix not square");
    const std::size_t n = a.rows();
    DenseMatrix m = a * t;
    const double norm = m.frobenius_norm();
    if (norm > ns.expm_overflow_norm) {
        throw ExpmOverflow("expm: ||A t||_F too large");
    }

    int s = 0;
    double scaled = norm;
    while (scaled > 0.25) {
        scaled *= 0.5;
        ++s;
    }
    if (s > 0) m *= std::ldexp(1.0, -s);

    // diagonal Pade(6,6): N(X) = sum b_k X^k, D(X) = N(-X)
    static constexpr double b0 = 1.0;
    static constexpr double b1 = 1.0 / 2.0;
    static constexpr double b2 = 5.0 / 44.0;
    static constexpr double b3 = 1.0 / 66.0;
    static constexpr double b4 = 1.0 / 792.0;
    static constexpr double b5 = 1.0 / 15840.0;
    static constexpr double b6 = 1.0 / 665280.0;

    const DenseMatrix eye = DenseMatrix::identity(n);
    const DenseMatrix m2 = m * m;
    const DenseMatrix m4 = m2 * m2;
    const DenseMatrix m6 = m4 * m2;
    const DenseMatrix veven = b0 * eye + b2 * m2 + b4 * m4 + b6 * m6;
    const DenseMatrix uodd = m * (b1 * eye + b3 * m2 + b5 * m4);

    DenseMatrix f = lu_solve(veven - uodd, veven + uodd, ns);
    for (int k = 0; k < s; ++k) {
        f = f * f;
    }
    return f;
}

std::optional<DenseMatrix> cholesky_pd(const DenseMatrix& s_in, const NumericSettings& ns) {
    if (!s_in.is_square()) throw InvalidInput("cholesky_pd: matrix not square");
    const std::size_t n = s_in.rows();
    if (n == 0) return DenseMatrix{};
    const DenseMatrix s = symmetrize(s_in);
    const double pivot_floor = ns.pd_pivot_floor(s.trace(), static_cast<int>(n));

    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = s(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > pivot_floor) || !(d > 0.0)) {
            return std::nullopt;
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = s(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / ljj;
        }
    }
    return l;
}

} // namespace h2net
