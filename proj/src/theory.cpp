#include "sll/theory.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace sll {

void ModelConfig::validate() const {
    if (!profile) throw std::invalid_argument("ModelConfig: missing kernel profile");
    if (k < 0 || d < 1 || k > d)
        throw std::invalid_argument("ModelConfig: need 0 <= k <= d");
    if (n < 1) throw std::invalid_argument("ModelConfig: need n >= 1");
    if (delta <= 0.0) throw std::invalid_argument("ModelConfig: need delta > 0");
    if (readout.k() != k)
        throw std::invalid_argument("ModelConfig: readout length != k");
    if (extra_noise == 0.0 && std::abs(readout.norm2() - 1.0) > 1e-10)
        throw std::invalid_argument("ModelConfig: readout not unit norm");
    if (readout.norm2() > 1.0 + 1e-10)
        throw std::invalid_argument("ModelConfig: readout norm exceeds 1");
    if (profile->info_exponent() < 3)
        throw std::invalid_argument("ModelConfig: information exponent < 3");
}

namespace {

// G(eps) = extra + sum_i v_i^2 (g(1) - g(m(snr_i(eps)))) - eps
double gap(const ModelConfig& c, double eps) {
    const auto& prof = *c.profile;
    double g1 = prof.g_at_1();
    double rate = double(c.n) / c.d;
    double s = c.extra_noise;
    for (double v : c.readout.v) {
        double v2 = v * v;
        if (v2 == 0.0) {
            s += v2 * g1;
            continue;
        }
        s += v2 * (g1 - prof.g(prof.m_sigma(rate * v2 / (c.delta + eps))));
    }
    return s - eps;
}

} // namespace

FixedPointSolution solve_fixed_point(const ModelConfig& config) {
    config.validate();
    const auto& prof = *config.profile;
    double g1 = prof.g_at_1();

    double lo = config.extra_noise;
    double hi = config.extra_noise + config.readout.norm2() * g1;
    double glo = gap(config, lo), ghi = gap(config, hi);
    assert(glo >= -1e-12 && ghi <= 1e-12);
    (void)ghi;

    FixedPointSolution sol;
    if (glo <= 0.0) {
        sol.epsilon = lo; // interpolating solution
    } else {
        // Keep the LARGEST root: it is the state-evolution solution reached
        // from the uninformative initialization. Near first-order transitions
        // lower (informed) roots coexist with it; jumping to them early would
        // place transitions at the spinodal instead of the overlap-law
        // threshold.
        const int n_scan = 64;
        int crossings = 0;
        double prev = glo;
        double top_lo = lo, top_hi = hi;
        for (int i = 1; i <= n_scan; ++i) {
            double x = lo + (hi - lo) * i / n_scan;
            double cur = gap(config, x);
            if (prev > 0.0 && cur <= 0.0) {
                ++crossings;
                top_lo = lo + (hi - lo) * (i - 1) / n_scan;
                top_hi = x;
            }
            prev = cur;
        }
        sol.ambiguous = crossings > 1;
        lo = top_lo;
        hi = top_hi;

        for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
            double mid = 0.5 * (lo + hi);
            (gap(config, mid) > 0.0 ? lo : hi) = mid;
        }
        sol.epsilon = 0.5 * (lo + hi);
        // a discontinuity of m makes G jump across zero instead of vanishing
        sol.jump_flag = std::abs(gap(config, sol.epsilon)) > 1e-6;
    }

    double rate = double(config.n) / config.d;
    double recon = config.extra_noise;
    for (double v : config.readout.v) {
        double v2 = v * v;
        double snr = rate * v2 / (config.delta + sol.epsilon);
        double q = v2 == 0.0 ? 0.0 : prof.m_sigma(snr);
        sol.snr.push_back(snr);
        sol.q.push_back(q);
        if (q > 0.0) ++sol.k_c;
        recon += v2 * (g1 - prof.g(q));
    }
    sol.residual = std::abs(sol.epsilon - recon);
    return sol;
}

std::vector<CurvePoint> learning_curve(const ModelConfig& config,
                                       const std::vector<long long>& n_grid) {
    std::vector<CurvePoint> curve;
    ModelConfig c = config;
    for (long long n : n_grid) {
        c.n = n;
        auto sol = solve_fixed_point(c);
        curve.push_back({n, sol.epsilon, sol.k_c});
    }
    return curve;
}

std::vector<Transition> transition_locations(const ModelConfig& config,
                                             const std::vector<int>& i_list,
                                             long long n_max) {
    std::vector<Transition> out;
    ModelConfig c = config;
    for (int i : i_list) {
        if (i < 1 || i > config.k)
            throw std::invalid_argument("transition_locations: feature outside [1,k]");
        Transition t;
        t.feature = i;
        auto learnable = [&](double n) {
            c.n = static_cast<long long>(std::llround(n));
            return solve_fixed_point(c).q[i - 1] > 0.0;
        };
        if (!learnable(double(n_max))) {
            out.push_back(t); // unbounded within budget
            continue;
        }
        double lo = 1.0, hi = double(n_max);
        while (hi / lo > 1.0 + 1e-4) {
            double mid = std::sqrt(lo * hi);
            (learnable(mid) ? hi : lo) = mid;
        }
        t.n_threshold = hi;
        out.push_back(t);
    }
    return out;
}

ModelConfig compressed_teacher(const ModelConfig& config,
                               const FixedPointSolution& solution) {
    if (solution.k_c >= config.k)
        throw std::invalid_argument("compressed_teacher: k_c = k, nothing to compress");
    ModelConfig r = config;
    r.k = solution.k_c;
    double tail2 = 0.0;
    for (int j = solution.k_c; j < config.k; ++j)
        tail2 += config.readout.v[j] * config.readout.v[j];
    r.extra_noise = config.extra_noise + config.profile->g_at_1() * tail2;
    r.readout.v.assign(config.readout.v.begin(),
                       config.readout.v.begin() + r.k);
    return r;
}

} // namespace sll
