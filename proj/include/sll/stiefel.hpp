#pragma once

#include <Eigen/Dense>
#include <random>

namespace sll {

// Uniform k x d matrix with orthonormal rows (QR of a Gaussian matrix with
// the sign fix that makes the factor unique, hence Haar).
Eigen::MatrixXd sample_stiefel(int k, int d, std::mt19937_64& gen);

// i.i.d. standard Gaussian matrix.
Eigen::MatrixXd gaussian_matrix(long long rows, long long cols,
                                std::mt19937_64& gen);

// Uniform unit vector.
Eigen::VectorXd sample_sphere(int d, std::mt19937_64& gen);

} // namespace sll
