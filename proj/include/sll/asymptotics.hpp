#pragma once

#include "sll/kernel.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sll {

// Joint limit k = gamma d, n = alpha d^2.
struct InterpolationRegime {
    double alpha = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double beta = 0.0;               // powerlaw exponent when relevant
    std::string readout_kind = "powerlaw";

    void validate() const;           // alpha, gamma, delta > 0
};

// Crossover between the growing-width window (n << k^{2 beta} d) and the
// refinement window (every feature learned).
enum class ScalingRegime { feature_learning, refinement };
struct ScalingPrediction {
    ScalingRegime regime;
    double k_c_pred = 0.0;           // (n/d)^{1/(2 beta)} capped at k
    double eps_exponent = 0.0;       // d ln eps / d ln n
};
ScalingPrediction scaling_prediction(double beta, long long k, long long d,
                                     long long n);

// Theta-rates in d of (error, effective width) for the tabled readout families.
struct RatePair {
    std::string eps_rate;
    std::string k_c_rate;
};
RatePair near_interpolation_table(const InterpolationRegime& regime);

// Finite support distribution of the rescaled readout entry sqrt(k) v.
struct DiscreteDist {
    std::vector<double> value;
    std::vector<double> weight;      // nonnegative, normalized internally

    double second_moment() const;
    static DiscreteDist uniform(double lo, double hi, int n_points);
    static DiscreteDist point_mass(double v);
};

// Dense-readout thermodynamic limit: eps = g(1) - E[v^2 g(Q(v))] with
// Q(v) = m(alpha v^2 / (gamma (delta + eps))).
struct DenseLimit {
    double epsilon = 0.0;
    std::function<double(double)> Q;
};
DenseLimit dense_limit_solve(const KernelProfile& profile,
                             const DiscreteDist& P_v,
                             const InterpolationRegime& regime);

// Sample-ratio location of the phase transition of the feature with rescaled
// readout v_star; for v_star = max support this is the first transition.
double alpha_c_dense(const KernelProfile& profile, double v_star,
                     const DiscreteDist& P_v,
                     const InterpolationRegime& regime);

// phi(x) = m(lambda_c x^{-2 beta}), the limiting overlap of feature
// floor(x k_c), x in (0,1).
double limiting_profile(const KernelProfile& profile, double beta, double x);

// zeta-like normalizer sum_{i>=1} i^{-2 beta}, beta > 1/2.
double powerlaw_normalizer(double beta);

// Limit constants of the powerlaw near-interpolation regime. For beta > 1/2:
// k_c ~ k_c_bar d^{1/(2 beta)} and eps ~ eps_bar d^{1/(2 beta) - 1}, with
// z_beta the infinite normalizer and alpha_star unset (NaN). For beta < 1/2:
// k_c_bar = lim k_c / k, eps_bar the limiting error itself, and alpha_star
// the ratio above which every feature is learned.
struct PowerlawLimit {
    double z_beta = 0.0;
    double k_c_bar = 0.0;
    double eps_bar = 0.0;
    double alpha_star = 0.0;
};
PowerlawLimit powerlaw_limit_constants(const KernelProfile& profile,
                                       double beta,
                                       const InterpolationRegime& regime);

} // namespace sll
