#include "h2net/model.hpp"

#include <utility>

#include "h2net/errors.hpp"

namespace h2net {

AgentModel::AgentModel(DenseMatrix a, DenseMatrix b, DenseMatrix c1, DenseMatrix d1,
                       DenseMatrix c2, DenseMatrix d2, DenseMatrix e)
    : A(std::move(a)), B(std::move(b)), C1(std::move(c1)), D1(std::move(d1)),
      C2(std::move(c2)), D2(std::move(d2)), E(std::move(e)) {
    if (!A.is_square() || A.rows() == 0) throw InvalidInput("A must be square and nonempty");
    const std::size_t nn = A.rows();
    if (B.rows() != nn) throw InvalidInput("B row count must equal n");
    if (B.cols() == 0) throw InvalidInput("B must have at least one column");
    if (C1.cols() != nn) throw InvalidInput("C1 column count must equal n");
    if (C1.rows() == 0) throw InvalidInput("C1 must have at least one row");
    if (E.rows() != nn) throw InvalidInput("E row count must equal n");
    if (D1.rows() != C1.rows()) throw InvalidInput("D1 row count must equal C1 row count");
    if (D1.cols() != E.cols()) throw InvalidInput("D1 column count must equal E column count");
    if (C2.cols() != nn) throw InvalidInput("C2 column count must equal n");
    if (D2.rows() != C2.rows()) throw InvalidInput("D2 row count must equal C2 row count");
    if (D2.cols() != B.cols()) throw InvalidInput("D2 column count must equal B column count");
}

} // namespace h2net
