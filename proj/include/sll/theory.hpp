#pragma once

#include "sll/activation.hpp"
#include "sll/kernel.hpp"
#include "sll/readout.hpp"

#include <memory>
#include <vector>

namespace sll {

// Teacher/model parameters for the fixed-point solver. The activation must be
// stripped (mu_0 = mu_1 = 0) with information exponent >= 3.
struct ModelConfig {
    int k = 0;            // k = 0 is the pure-noise (fully compressed) model
    int d = 0;
    long long n = 0;
    double delta = 0.0;
    Readout readout;
    std::shared_ptr<const KernelProfile> profile;
    // variance of compressed-away features; irreducible part of the reported
    // error (the effective noise seen by the snr is delta + epsilon as usual)
    double extra_noise = 0.0;

    void validate() const;
};

// Solution of eps = sum_i v_i^2 (g(1) - g(q_i)), q_i = m((n/d) v_i^2 / (delta + eps)).
struct FixedPointSolution {
    double epsilon = 0.0;
    std::vector<double> q;
    std::vector<double> snr;
    int k_c = 0;
    bool jump_flag = false;       // bisection landed on a discontinuity of G
    bool ambiguous = false;       // diagnostic scan saw multiple sign changes
    double residual = 0.0;        // |eps - sum v^2 (g1 - g(q))|
};

FixedPointSolution solve_fixed_point(const ModelConfig& config);

struct CurvePoint {
    long long n;
    double epsilon;
    int k_c;
};
std::vector<CurvePoint> learning_curve(const ModelConfig& config,
                                       const std::vector<long long>& n_grid);

// smallest n (bisected, relative resolution 1e-4) at which q_i > 0;
// unbounded features report n_threshold < 0
struct Transition {
    int feature = 0;        // 1-based
    double n_threshold = -1.0;
};
std::vector<Transition> transition_locations(const ModelConfig& config,
                                             const std::vector<int>& i_list,
                                             long long n_max);

// Remark-1 compressed teacher: width k_c, head of the readout kept as-is,
// noise inflated by g(1) * sum_{j > k_c} v_j^2. Requires k_c < k.
ModelConfig compressed_teacher(const ModelConfig& config,
                               const FixedPointSolution& solution);

} // namespace sll
