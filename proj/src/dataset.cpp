#include "sll/dataset.hpp"
#include "sll/rng.hpp"
#include "sll/stiefel.hpp"

#include <stdexcept>
#include <utility>

namespace sll {

TeacherInstance make_teacher(int k, int d, Readout readout,
                             Activation activation, double delta,
                             std::uint64_t seed) {
    if (readout.k() != k)
        throw std::invalid_argument("make_teacher: readout length != k");
    if (delta < 0.0) throw std::invalid_argument("make_teacher: delta < 0");
    TeacherInstance t;
    auto gen = make_stream(seed, "teacher");
    t.W0 = sample_stiefel(k, d, gen);
    t.readout = std::move(readout);
    t.activation = std::move(activation);
    t.delta = delta;
    t.seed = seed;
    return t;
}

Eigen::VectorXd network_outputs(const Eigen::MatrixXd& W,
                                const Eigen::VectorXd& v,
                                const Activation& activation,
                                const Eigen::MatrixXd& X) {
    Eigen::MatrixXd Z = X * W.transpose(); // n x k preactivations
    for (long long j = 0; j < Z.cols(); ++j)
        for (long long i = 0; i < Z.rows(); ++i)
            Z(i, j) = activation.eval(Z(i, j));
    return Z * v;
}

Eigen::VectorXd clean_outputs(const TeacherInstance& teacher,
                              const Eigen::MatrixXd& X) {
    Eigen::Map<const Eigen::VectorXd> v(teacher.readout.v.data(),
                                        teacher.readout.k());
    return network_outputs(teacher.W0, v, teacher.activation, X);
}

Dataset generate_dataset(const TeacherInstance& teacher, long long n,
                         std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_dataset: need n >= 1");
    Dataset data;
    auto gen = make_stream(seed, "dataset");
    data.X = gaussian_matrix(n, teacher.d(), gen);
    data.y_out = clean_outputs(teacher, data.X);
    std::normal_distribution<double> normal;
    double s = std::sqrt(teacher.delta);
    for (long long mu = 0; mu < n; ++mu) data.y_out(mu) += s * normal(gen);
    return data;
}

Eigen::VectorXd linear_part_estimate(const Eigen::MatrixXd& X,
                                     const Eigen::VectorXd& y, double mu1) {
    if (mu1 == 0.0)
        throw std::invalid_argument(
            "linear_part_estimate: mu_1 = 0, no linear part to estimate");
    return X.transpose() * y / (double(X.rows()) * mu1);
}

} // namespace sll
