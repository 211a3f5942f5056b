#include "fit.h"

#include <Eigen/Dense>

#include "salem/error.h"

namespace salem::internal {

std::vector<double> LeastSquares(const std::vector<std::vector<double>>& columns,
                                 const std::vector<double>& y) {
  const Eigen::Index rows = static_cast<Eigen::Index>(y.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(columns.size());
  if (rows < cols || cols == 0) throw InsufficientDataError("too few samples for fit");
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    b(i) = y[i];
    for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = columns[j][i];
  }
  Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
  return std::vector<double>(x.data(), x.data() + x.size());
}

double Slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> ones(x.size(), 1.0);
  return LeastSquares({x, ones}, y)[0];
}

}  // namespace salem::internal
