#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace lde {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Per-node matrix collections (index = node).
using CMatList = std::vector<CMat>;

} // namespace lde
