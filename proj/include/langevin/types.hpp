#pragma once

#include <Eigen/Core>

namespace langevin {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = Vector<double>;
using Mat = Matrix<double>;

using Index = Eigen::Index;

}  // namespace langevin
