#pragma once

#include <Eigen/Dense>

namespace rmpc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

}  // namespace rmpc
