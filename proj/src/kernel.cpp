#include "sll/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sll {

namespace {
constexpr double kEdge = 1e-9; // argmax domain is [0, 1 - kEdge]

// golden-section maximization
template <typename F>
double golden_max(F&& f, double lo, double hi, int iters = 80) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && hi - lo > 1e-14; ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}
} // namespace

struct KernelProfile::Grid {
    std::vector<double> q;
    std::vector<double> gq;
    std::vector<double> base; // q + ln(1-q)
};

KernelProfile::KernelProfile(const Activation& a) {
    const auto& hd = a.hermite();
    info_exponent_ = hd.info_exponent;
    c2_.resize(hd.c.size());
    for (size_t l = 0; l < hd.c.size(); ++l) c2_[l] = hd.c[l] * hd.c[l];
    tail_.assign(c2_.size(), 0.0);
    double t = 0.0;
    for (size_t l = c2_.size(); l-- > 0;) {
        tail_[l] = t;
        t += c2_[l];
    }
    g1_ = t; // sum of all retained c^2

    // argmax scan grid: uniform on [0, 0.99], then uniform in ln(1-q)
    auto gr = std::make_shared<Grid>();
    const int n_uniform = 12000, n_log = 8000;
    gr->q.reserve(n_uniform + n_log + 1);
    for (int i = 0; i <= n_uniform; ++i) gr->q.push_back(0.99 * i / n_uniform);
    double lo = std::log(1e-2), hi = std::log(kEdge);
    for (int i = 1; i <= n_log; ++i)
        gr->q.push_back(1.0 - std::exp(lo + (hi - lo) * i / n_log));
    for (double q : gr->q) {
        gr->gq.push_back(g(q));
        gr->base.push_back(q + std::log1p(-q));
    }
    grid_ = std::move(gr);

    // lambda_sigma = inf h(q), h(q) = (-q - ln(1-q)) / g(q)
    if (info_exponent_ >= 3) {
        auto h = [this](double q) { return (-q - std::log1p(-q)) / g(q); };
        size_t best = 1;
        double best_h = -grid_->base[1] / grid_->gq[1];
        for (size_t i = 2; i < grid_->q.size(); ++i) {
            double v = -grid_->base[i] / grid_->gq[i];
            if (v < best_h) {
                best_h = v;
                best = i;
            }
        }
        double qlo = grid_->q[best - 1];
        double qhi = best + 1 < grid_->q.size() ? grid_->q[best + 1] : 1.0 - kEdge;
        q_sigma_ = golden_max([&h](double q) { return -h(q); }, qlo, qhi);
        lambda_sigma_ = h(q_sigma_);
    }
}

double KernelProfile::g(double x) const {
    if (std::abs(x) > 1.0 + 1e-12)
        throw std::domain_error("kernel: |x| > 1");
    x = std::clamp(x, -1.0, 1.0);
    double s = 0.0, xp = 1.0, ax = std::abs(x);
    for (size_t l = 0; l < c2_.size(); ++l) {
        s += c2_[l] * xp;
        if (tail_[l] * std::pow(ax, double(l)) < 1e-16) break;
        xp *= x;
    }
    return s;
}

double KernelProfile::g_prime(double x) const {
    if (x < -1e-12 || x > 1.0 + 1e-12)
        throw std::domain_error("kernel derivative: x outside [0,1]");
    x = std::clamp(x, 0.0, 1.0);
    double s = 0.0, xp = 1.0;
    for (size_t l = 1; l < c2_.size(); ++l) {
        s += c2_[l] * double(l) * xp;
        if (tail_[l] * double(l + 1) * std::pow(x, double(l - 1)) < 1e-16) break;
        xp *= x;
    }
    return s;
}

double KernelProfile::potential(double lambda, double q) const {
    if (q < 0.0 || q >= 1.0)
        throw std::domain_error("potential: q outside [0,1)");
    return lambda * g(q) + q + std::log1p(-q);
}

const KernelProfile::Grid& KernelProfile::grid() const { return *grid_; }

double KernelProfile::refine_max(double lambda, double lo, double hi) const {
    return golden_max(
        [this, lambda](double q) { return potential(lambda, q); }, lo, hi);
}

double KernelProfile::m_sigma(double lambda) const {
    if (lambda < 0.0) throw std::domain_error("m_sigma: lambda < 0");
    if (lambda == 0.0) return 0.0;
    if (info_exponent_ >= 3) {
        // below the transition the zero branch wins (ties included)
        if (lambda <= lambda_sigma_) return 0.0;
        // above it the argmax is the large stationary point q/(1-q) = lambda g'(q),
        // which sits in (q_sigma, 1); F' > 0 on its left, < 0 on its right
        double lo = q_sigma_, hi = 1.0 - kEdge;
        for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
            double mid = 0.5 * (lo + hi);
            (lambda * g_prime(mid) * (1.0 - mid) > mid ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    const Grid& gr = grid();
    size_t best = 0;
    double best_f = 0.0; // F(lambda, 0) = 0
    for (size_t i = 1; i < gr.q.size(); ++i) {
        double f = lambda * gr.gq[i] + gr.base[i];
        if (f > best_f) {
            best_f = f;
            best = i;
        }
    }
    if (best == 0) return 0.0;
    double lo = gr.q[best - 1];
    double hi = best + 1 < gr.q.size() ? gr.q[best + 1] : 1.0 - kEdge;
    double q = refine_max(lambda, lo, hi);
    // exact-tie convention: q = 0 wins at the transition
    return potential(lambda, q) > 0.0 ? q : 0.0;
}

std::optional<double> KernelProfile::metastable(double lambda) const {
    const Grid& gr = grid();
    if (m_sigma(lambda) > 0.0) return std::nullopt;
    // scan from the right for the first local maximum of F
    double prev = -1e300;
    for (size_t i = gr.q.size(); i-- > 1;) {
        double f = lambda * gr.gq[i] + gr.base[i];
        if (f < prev) {
            double lo = gr.q[i];
            double hi = i + 2 < gr.q.size() ? gr.q[i + 2] : 1.0 - kEdge;
            return refine_max(lambda, lo, hi);
        }
        prev = f;
    }
    return std::nullopt;
}

double KernelProfile::lambda_sigma() const { return lambda_sigma_; }
double KernelProfile::q_sigma() const { return q_sigma_; }

} // namespace sll
