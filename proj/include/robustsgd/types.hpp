#pragma once

#include <Eigen/Core>

namespace rsgd {

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using VectorXd = Vector<double>;
using Index = Eigen::Index;

}  // namespace rsgd
