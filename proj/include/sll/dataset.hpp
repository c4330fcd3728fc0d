#pragma once

#include "sll/activation.hpp"
#include "sll/readout.hpp"

#include <Eigen/Dense>
#include <cstdint>

namespace sll {

// Data-generating network: orthonormal feature rows, unit-norm readout.
struct TeacherInstance {
    Eigen::MatrixXd W0;      // k x d
    Readout readout;
    Activation activation;
    double delta = 0.0;
    std::uint64_t seed = 0;

    int k() const { return static_cast<int>(W0.rows()); }
    int d() const { return static_cast<int>(W0.cols()); }
};

TeacherInstance make_teacher(int k, int d, Readout readout,
                             Activation activation, double delta,
                             std::uint64_t seed);

struct Dataset {
    Eigen::MatrixXd X;       // n x d, rows are inputs
    Eigen::VectorXd y_out;   // noisy responses
};

Dataset generate_dataset(const TeacherInstance& teacher, long long n,
                         std::uint64_t seed);

// Noiseless responses v' sigma(W X') for arbitrary weights/readout.
Eigen::VectorXd network_outputs(const Eigen::MatrixXd& W,
                                const Eigen::VectorXd& v,
                                const Activation& activation,
                                const Eigen::MatrixXd& X);

Eigen::VectorXd clean_outputs(const TeacherInstance& teacher,
                              const Eigen::MatrixXd& X);

// Plug-in estimator X' y / (n mu_1) of the linear part W0' v; only
// informative when the activation keeps a linear component.
Eigen::VectorXd linear_part_estimate(const Eigen::MatrixXd& X,
                                     const Eigen::VectorXd& y, double mu1);

} // namespace sll
