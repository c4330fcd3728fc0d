#pragma once

#include "sll/dataset.hpp"
#include "sll/kernel.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

namespace sll {

struct StudentNet {
    Eigen::MatrixXd W;   // k_s x d
    Eigen::VectorXd u;   // learnable readout

    int width() const { return static_cast<int>(W.rows()); }
};

double forward(const StudentNet& net, const Activation& activation,
               const Eigen::VectorXd& x);

struct Gradients {
    Eigen::MatrixXd W;
    Eigen::VectorXd u;
};

// Exact gradient of the mean squared loss over the batch.
Gradients gradient(const StudentNet& net, const Activation& activation,
                   const Eigen::MatrixXd& X_batch,
                   const Eigen::VectorXd& y_batch);

struct AdamState {
    double lr = 3e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    Eigen::MatrixXd mW, vW;
    Eigen::VectorXd mu, vu;
    long long t = 0;

    static AdamState for_net(const StudentNet& net, double lr);
};

void adam_step(AdamState& state, StudentNet& net, const Gradients& g);

struct SgdHyper {
    int epochs = 2000;
    int batches = 3;             // mini-batches per epoch, one step each
    double lr = 3e-3;
    long long n_test = 10000;
    int eval_every = 50;
    bool init_at_teacher = false;
};

struct TrainReport {
    StudentNet net;
    std::vector<double> train_mse;        // one entry per epoch
    std::vector<int> test_epochs;
    std::vector<double> test_mse;         // fresh-input estimates
    double final_test_mse = 0.0;
    Eigen::MatrixXd teacher_overlap;      // W0 W' at the end
};

// Adam training with per-epoch row renormalization of W; test error is
// measured against the noiseless teacher on fresh inputs.
TrainReport train_student(const TeacherInstance& teacher, const Dataset& data,
                          int k_s, const SgdHyper& hyper, std::uint64_t seed);

struct SweepPoint {
    double x = 0.0;              // k_s or n
    double mean_mse = 0.0;
    double std_mse = 0.0;
};

// Fresh dataset and student initialization per seed; teacher held fixed.
std::vector<SweepPoint> width_sweep(const TeacherInstance& teacher,
                                    long long n,
                                    const std::vector<int>& k_s_list,
                                    const SgdHyper& hyper,
                                    const std::vector<std::uint64_t>& seeds);

enum class WidthPolicy { full, effective, optimized };

// Per-budget training runs; "effective" sets k_s to the solver's learnable
// width k_c(n), "optimized" grid-searches candidate_widths and keeps the best.
std::vector<SweepPoint> data_sweep(
    const TeacherInstance& teacher, const std::vector<long long>& n_list,
    WidthPolicy policy, std::shared_ptr<const KernelProfile> profile,
    const std::vector<int>& candidate_widths, const SgdHyper& hyper,
    const std::vector<std::uint64_t>& seeds);

} // namespace sll
