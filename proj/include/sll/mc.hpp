#pragma once

#include "sll/hmc.hpp"
#include "sll/kernel.hpp"

#include <Eigen/Dense>
#include <cstdint>

namespace sll {

// Scalar model y = sigma(w . x) + sqrt(delta) z with w uniform on the unit
// sphere; posterior overlap w0 . w1 averaged over retained samples.
struct GlmOverlapResult {
    double overlap = 0.0;
    double std_error = 0.0;
    HmcDiagnostics diag;
};
GlmOverlapResult glm_posterior_overlap(const Activation& activation, int d,
                                       long long n, double delta,
                                       const HmcParams& params,
                                       std::uint64_t seed,
                                       bool signal_init = true);

struct OverlapReport {
    Eigen::MatrixXd Q;             // Q_ij = w0_i . w1_j
    Eigen::VectorXd diag;
    double offdiag_ms = 0.0;       // mean square off-diagonal entry
};
OverlapReport overlap_report(const Eigen::MatrixXd& W0,
                             const Eigen::MatrixXd& W1);

// Mean square output difference between teacher and a posterior sample, by
// Monte-Carlo over fresh inputs and, independently, by the kernel identity
// E[y y'] = sum_ij v_i v'_j g(w_i . w'_j). Half of it estimates the optimal
// error.
struct GibbsEstimate {
    double gibbs_mc = 0.0;
    double std_error = 0.0;
    double gibbs_kernel = 0.0;
    double bo_estimate = 0.0;      // gibbs_mc / 2
};
GibbsEstimate gibbs_error(const TeacherInstance& teacher,
                          const Eigen::MatrixXd& W1, const Readout& v1,
                          const KernelProfile& profile, long long n_test,
                          std::uint64_t seed);

} // namespace sll
