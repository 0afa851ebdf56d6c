#pragma once

#include <Eigen/Dense>

namespace protoglyph {

// All numeric work runs in 64-bit; the tensor core below is templated on the
// scalar so a 32-bit profile can be instantiated where speed matters.
using Real = double;

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Mat = DenseMatrix<Real>;
using Index = Eigen::Index;

}  // namespace protoglyph
