#include "sll/stiefel.hpp"

#include <stdexcept>

namespace sll {

Eigen::MatrixXd gaussian_matrix(long long rows, long long cols,
                                std::mt19937_64& gen) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd m(rows, cols);
    for (long long i = 0; i < rows; ++i)
        for (long long j = 0; j < cols; ++j) m(i, j) = normal(gen);
    return m;
}

Eigen::MatrixXd sample_stiefel(int k, int d, std::mt19937_64& gen) {
    if (k < 1 || k > d)
        throw std::invalid_argument("sample_stiefel: need 1 <= k <= d");
    Eigen::MatrixXd g = gaussian_matrix(d, k, gen);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
    Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q.transpose();
}

Eigen::VectorXd sample_sphere(int d, std::mt19937_64& gen) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v(i) = normal(gen);
    return v / v.norm();
}

} // namespace sll
