#include "sll/asymptotics.hpp"
#include "sll/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sll {

namespace {
constexpr double kProfileCut = 1e-6;   // small-x cutoff for profile integrals
constexpr double kHalfTol = 1e-9;      // half-integer exponent exclusion
} // namespace

void InterpolationRegime::validate() const {
    if (alpha <= 0.0 || gamma <= 0.0 || delta <= 0.0)
        throw std::invalid_argument("InterpolationRegime: need alpha, gamma, delta > 0");
}

ScalingPrediction scaling_prediction(double beta, long long k, long long d,
                                     long long n) {
    if (beta <= 0.5)
        throw std::invalid_argument(
            "scaling_prediction: beta <= 1/2 has no clean exponent; "
            "see near_interpolation_table");
    if (k < 1 || d < 1 || n < 1)
        throw std::invalid_argument("scaling_prediction: need k, d, n >= 1");
    ScalingPrediction p;
    double crossover = std::pow(double(k), 2.0 * beta) * double(d);
    if (double(n) < crossover) {
        p.regime = ScalingRegime::feature_learning;
        p.k_c_pred = std::min(std::pow(double(n) / d, 0.5 / beta), double(k));
        p.eps_exponent = 0.5 / beta - 1.0;
    } else {
        p.regime = ScalingRegime::refinement;
        p.k_c_pred = double(k);
        p.eps_exponent = -1.0;
    }
    return p;
}

RatePair near_interpolation_table(const InterpolationRegime& regime) {
    regime.validate();
    const std::string& kind = regime.readout_kind;
    if (kind == "dense") return {"1", "d"};
    if (kind == "ultrasparse") return {"1/d", "1"};
    if (kind == "exponential") return {"ln(d)/d", "ln(d)"};
    if (kind == "powerlaw") {
        double b = regime.beta;
        if (b <= 0.0)
            throw std::invalid_argument("near_interpolation_table: need beta > 0");
        if (std::abs(b - 0.5) < kHalfTol) return {"lnln(d)/ln(d)", "d/ln(d)"};
        if (b < 0.5) return {"1", "d"};
        char eps[32], kc[32];
        std::snprintf(eps, sizeof eps, "d^%g", 0.5 / b - 1.0);
        std::snprintf(kc, sizeof kc, "d^%g", 0.5 / b);
        return {eps, kc};
    }
    throw std::invalid_argument("near_interpolation_table: unknown readout kind " + kind);
}

double DiscreteDist::second_moment() const {
    double m2 = 0.0, w = 0.0;
    for (size_t i = 0; i < value.size(); ++i) {
        m2 += weight[i] * value[i] * value[i];
        w += weight[i];
    }
    return m2 / w;
}

DiscreteDist DiscreteDist::uniform(double lo, double hi, int n_points) {
    DiscreteDist d;
    for (int i = 0; i < n_points; ++i) {
        d.value.push_back(lo + (hi - lo) * (i + 0.5) / n_points);
        d.weight.push_back(1.0 / n_points);
    }
    return d;
}

DiscreteDist DiscreteDist::point_mass(double v) { return {{v}, {1.0}}; }

DenseLimit dense_limit_solve(const KernelProfile& profile,
                             const DiscreteDist& P_v,
                             const InterpolationRegime& regime) {
    regime.validate();
    if (P_v.value.empty() || std::abs(P_v.second_moment() - 1.0) > 1e-6)
        throw std::invalid_argument("dense_limit_solve: need E[v^2] = 1");
    double g1 = profile.g_at_1();
    double wsum = 0.0;
    for (double w : P_v.weight) wsum += w;

    auto learned_mass = [&](double eps) {
        double s = 0.0;
        for (size_t i = 0; i < P_v.value.size(); ++i) {
            double v2 = P_v.value[i] * P_v.value[i];
            double q = profile.m_sigma(
                regime.alpha * v2 / (regime.gamma * (regime.delta + eps)));
            s += P_v.weight[i] * v2 * profile.g(q);
        }
        return s / wsum;
    };
    double lo = 0.0, hi = g1;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        double mid = 0.5 * (lo + hi);
        (g1 - learned_mass(mid) > mid ? lo : hi) = mid;
    }
    DenseLimit out;
    out.epsilon = 0.5 * (lo + hi);
    out.Q = [&profile, regime, eps = out.epsilon](double v) {
        return profile.m_sigma(
            regime.alpha * v * v / (regime.gamma * (regime.delta + eps)));
    };
    return out;
}

double alpha_c_dense(const KernelProfile& profile, double v_star,
                     const DiscreteDist& P_v,
                     const InterpolationRegime& regime) {
    if (regime.gamma <= 0.0 || regime.delta < 0.0)
        throw std::invalid_argument("alpha_c_dense: need gamma > 0, delta >= 0");
    if (v_star <= 0.0)
        throw std::invalid_argument("alpha_c_dense: need v_star > 0");
    double lc = profile.lambda_sigma();
    double learned = 0.0, wsum = 0.0;
    for (size_t i = 0; i < P_v.value.size(); ++i) {
        double v2 = P_v.value[i] * P_v.value[i];
        learned += P_v.weight[i] * v2 *
                   profile.g(profile.m_sigma(lc * v2 / (v_star * v_star)));
        wsum += P_v.weight[i];
    }
    return lc * regime.gamma *
           (regime.delta + profile.g_at_1() - learned / wsum) /
           (v_star * v_star);
}

double limiting_profile(const KernelProfile& profile, double beta, double x) {
    if (!(x > 0.0 && x < 1.0))
        throw std::domain_error("limiting_profile: need x in (0,1)");
    return profile.m_sigma(profile.lambda_sigma() * std::pow(x, -2.0 * beta));
}

double powerlaw_normalizer(double beta) {
    if (beta <= 0.5)
        throw std::invalid_argument("powerlaw_normalizer: diverges for beta <= 1/2");
    const long long N = 10'000'000;
    double s = 0.0;
    for (long long i = N; i >= 1; --i) s += std::pow(double(i), -2.0 * beta);
    // midpoint tail of the integral comparison
    return s + std::pow(N + 0.5, 1.0 - 2.0 * beta) / (2.0 * beta - 1.0);
}

namespace {

// int_0^upper x^{-2b} f(x) dx where f(x) -> f0 as x -> 0; the cutoff piece is
// integrated with f frozen at its limit (only valid for b < 1/2 when f0 != 0)
double profile_integral(const std::function<double(double)>& f, double b,
                        double upper, double f0) {
    double head = 0.0;
    if (f0 != 0.0) head = f0 * std::pow(kProfileCut, 1.0 - 2.0 * b) / (1.0 - 2.0 * b);
    return head + adaptive_simpson(
                      [&](double x) { return std::pow(x, -2.0 * b) * f(x); },
                      kProfileCut, upper, 1e-10);
}

} // namespace

PowerlawLimit powerlaw_limit_constants(const KernelProfile& profile,
                                       double beta,
                                       const InterpolationRegime& regime) {
    regime.validate();
    if (std::abs(beta - 0.5) < kHalfTol)
        throw std::invalid_argument(
            "powerlaw_limit_constants: beta = 1/2 carries log corrections; "
            "only near_interpolation_table covers it");
    double g1 = profile.g_at_1();
    double lc = profile.lambda_sigma();
    PowerlawLimit out;
    out.alpha_star = std::numeric_limits<double>::quiet_NaN();

    if (beta > 0.5) {
        out.z_beta = powerlaw_normalizer(beta);
        out.k_c_bar =
            std::pow(regime.alpha / (lc * out.z_beta * regime.delta), 0.5 / beta);
        // integrand is bounded: 1 - phi(x) = O(x^{2 beta}) near 0
        double I = profile_integral(
            [&](double x) { return g1 - profile.g(limiting_profile(profile, beta, x)); },
            beta, 1.0 - 1e-12, 0.0);
        out.eps_bar = std::pow(out.k_c_bar, 1.0 - 2.0 * beta) / out.z_beta *
                      (I + g1 / (2.0 * beta - 1.0));
        return out;
    }

    out.z_beta = std::numeric_limits<double>::quiet_NaN();
    auto learned = [&](double eps) {
        double A = regime.alpha * (1.0 - 2.0 * beta) /
                   (regime.gamma * (regime.delta + eps));
        // m vanishes once A x^{-2 beta} drops below the critical snr
        double xu = std::min(1.0, std::pow(A / lc, 0.5 / beta));
        if (xu <= kProfileCut) return 0.0;
        return profile_integral(
            [&](double x) {
                return profile.g(profile.m_sigma(A * std::pow(x, -2.0 * beta)));
            },
            beta, xu, g1);
    };
    double lo = 0.0, hi = g1;
    for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        ((g1 - mid) / (1.0 - 2.0 * beta) > learned(mid) ? lo : hi) = mid;
    }
    out.eps_bar = 0.5 * (lo + hi);
    out.k_c_bar = std::min(
        1.0, std::pow(regime.alpha * (1.0 - 2.0 * beta) /
                          (lc * regime.gamma * (regime.delta + out.eps_bar)),
                      0.5 / beta));
    double J = profile_integral(
        [&](double x) { return profile.g(limiting_profile(profile, beta, x)); },
        beta, 1.0 - 1e-12, g1);
    out.alpha_star =
        lc * regime.gamma * ((regime.delta + g1) / (1.0 - 2.0 * beta) - J);
    return out;
}

} // namespace sll
