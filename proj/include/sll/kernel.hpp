#pragma once

#include "sll/activation.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace sll {

// Kernel g(x) = sum_l c_l^2 x^l of an activation, with the scalar overlap law
// m(lambda) = argmax_q {lambda g(q) + q + ln(1-q)} and the critical SNR
// (lambda_c, q_c) of the discontinuous transition (information exponent >= 3).
class KernelProfile {
  public:
    explicit KernelProfile(const Activation& a);

    double g(double x) const;        // x in [-1,1]
    double g_prime(double x) const;  // x in [0,1]
    double g_at_1() const { return g1_; }
    int series_order() const { return static_cast<int>(c2_.size()) - 1; }
    int info_exponent() const { return info_exponent_; }

    // F(lambda, q) = lambda g(q) + q + ln(1-q), q in [0,1)
    double potential(double lambda, double q) const;

    // global argmax of F(lambda, .) over [0, 1); ties with q = 0 resolve to 0
    double m_sigma(double lambda) const;

    // local (metastable) maximum of F near 1 when it is not the global one
    std::optional<double> metastable(double lambda) const;

    double lambda_sigma() const;
    double q_sigma() const;

  private:
    struct Grid;
    const Grid& grid() const;
    double refine_max(double lambda, double lo, double hi) const;

    std::vector<double> c2_;        // squared normalized coefficients
    std::vector<double> tail_;      // tail_[l] = sum_{m > l} c2_[m]
    double g1_ = 0.0;
    int info_exponent_ = 0;
    double lambda_sigma_ = 0.0;
    double q_sigma_ = 0.0;
    std::shared_ptr<Grid> grid_;    // shared argmax scan grid
};

} // namespace sll
