#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mvsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Labels = std::vector<int>;

}  // namespace mvsc
