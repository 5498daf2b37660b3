#pragma once

#include <Eigen/Core>

namespace kmit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

} // namespace kmit
