#pragma once

#include "h2net/matkit.hpp"

namespace h2net {

// One agent of the homogeneous network:
//   xdot = A x + B u + E d,   y = C1 x + D1 d,   z = C2 x + D2 u.
struct AgentModel {
    DenseMatrix A;  // n x n
    DenseMatrix B;  // n x m
    DenseMatrix C1; // r x n
    DenseMatrix D1; // r x q
    DenseMatrix C2; // p x n
    DenseMatrix D2; // p x m
    DenseMatrix E;  // n x q

    AgentModel() = default;
    AgentModel(DenseMatrix a, DenseMatrix b, DenseMatrix c1, DenseMatrix d1,
               DenseMatrix c2, DenseMatrix d2, DenseMatrix e);

    std::size_t n() const { return A.rows(); }
    std::size_t m() const { return B.cols(); }
    std::size_t q() const { return E.cols(); }
    std::size_t r() const { return C1.rows(); }
    std::size_t p() const { return C2.rows(); }
};

} // namespace h2net
