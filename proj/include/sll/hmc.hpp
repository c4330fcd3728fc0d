#pragma once

#include "sll/dataset.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace sll {

struct HmcParams {
    int leapfrog_steps = 10;
    double step_size = 0.05;       // starting value; tuned during burn-in
    int burn_in = 300;
    int samples = 300;
    double target_accept = 0.65;
    bool tune = true;
};

struct HmcDiagnostics {
    double accept_rate = 0.0;      // over post-burn-in iterations
    double step_size = 0.0;
    long long iterations = 0;
};

// Hamiltonian sampler for P(W | D) ~ exp(-||y - v' sigma(W X')||^2 / (2 delta))
// on the product of unit spheres (one per feature row). Leapfrog alternates
// Euclidean momentum kicks projected to the tangent space with exact geodesic
// (rotation) flow, so rows stay unit-norm to machine precision.
class PosteriorSampler {
  public:
    // teacher supplies readout/activation/delta; the design matrix is copied
    // into single precision at construction (the chain then samples the
    // exact posterior of the rounded dataset), so `data` may be released
    // afterwards
    PosteriorSampler(const TeacherInstance& teacher, const Dataset& data,
                     HmcParams params, std::uint64_t seed);

    // first `rows_from_truth` rows copied from W0, the rest uniform on the
    // sphere; pass k for a start exactly at the signal
    void init_signal(int rows_from_truth);
    void init_random();

    // tune the step size toward the target acceptance; throws on a final
    // acceptance rate outside [0.2, 0.9]
    void burn_in();

    void step();                   // one post-burn-in iteration
    const Eigen::MatrixXd& W() const { return W_; }
    double energy() const { return energy_; }
    const HmcDiagnostics& diagnostics() const { return diag_; }

  private:
    double energy_grad(const Eigen::MatrixXd& W, Eigen::MatrixXd& grad) const;
    bool hmc_iteration(bool tuning);

    const TeacherInstance& teacher_;
    Eigen::MatrixXf Xf_;           // n x d design matrix, single precision
    Eigen::VectorXd y_;
    HmcParams params_;
    std::mt19937_64 gen_;
    Eigen::MatrixXd W_;
    Eigen::MatrixXd grad_;         // gradient at W_
    double energy_ = 0.0;
    HmcDiagnostics diag_;
    long long accepted_ = 0;
    long long bad_energy_ = 0;
    long long tune_iter_ = 0;
};

} // namespace sll
