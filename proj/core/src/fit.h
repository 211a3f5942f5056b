#ifndef SALEM_SRC_FIT_H_
#define SALEM_SRC_FIT_H_

#include <vector>

namespace salem::internal {

// Least-squares coefficients for y ~ sum_j beta_j * columns[j].
std::vector<double> LeastSquares(const std::vector<std::vector<double>>& columns,
                                 const std::vector<double>& y);

// Slope of the ordinary least-squares line through (x, y).
double Slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace salem::internal

#endif  // SALEM_SRC_FIT_H_
