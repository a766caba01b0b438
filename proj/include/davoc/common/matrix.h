#ifndef DAVOC_COMMON_MATRIX_H_
#define DAVOC_COMMON_MATRIX_H_

#include <Eigen/Core>

namespace davoc {

// Sequences are stored one time step per row.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::RowVectorXd;
using Vector = Eigen::VectorXd;

}  // namespace davoc

#endif  // DAVOC_COMMON_MATRIX_H_
