#include "sll/activation.hpp"

#include "sll/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sll {

namespace {

constexpr int kMaxOrderQuadrature = 400;
constexpr int kMaxOrderAnalytic = 100000;
constexpr double kTailTol = 1e-10;
constexpr double kCoeffNoise = 1e-8;

// All normalized coefficients c_l, l = 0..L, in one pass of the composite
// rule. he_l evaluated by the stable normalized recurrence.
std::vector<double> coeffs_by_quadrature(const Activation& a, int L) {
    std::vector<double> acc(L + 1, 0.0);
    const GaussLegendre rule(32);
    std::vector<double> breaks{-12.0, 0.0, 12.0};
    for (double k : a.kinks)
        if (k > -12.0 && k < 12.0) breaks.push_back(k);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const int panels = 64;
    std::vector<double> he(L + 1);
    for (size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
        double h = (breaks[seg + 1] - breaks[seg]) / panels;
        for (int p = 0; p < panels; ++p) {
            double a0 = breaks[seg] + p * h;
            for (size_t i = 0; i < rule.nodes.size(); ++i) {
                double z = a0 + 0.5 * h * (1.0 + rule.nodes[i]);
                double w = 0.5 * h * rule.weights[i] *
                           std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
                double fz = a.eval(z);
                he[0] = 1.0;
                if (L >= 1) he[1] = z;
                for (int l = 1; l < L; ++l)
                    he[l + 1] = (z * he[l] - std::sqrt(double(l)) * he[l - 1]) /
                                std::sqrt(double(l + 1));
                double wf = w * fz;
                for (int l = 0; l <= L; ++l) acc[l] += wf * he[l];
            }
        }
    }
    return acc;
}

int detect_info_exponent(const std::vector<double>& c) {
    for (int l = 1; l < static_cast<int>(c.size()); ++l) {
        double mu = c[l] * std::exp(0.5 * std::lgamma(l + 1.0));
        if (std::abs(mu) > kCoeffNoise) return l;
    }
    return static_cast<int>(c.size());
}

HermiteData compute_hermite(const Activation& a) {
    HermiteData hd;
    hd.norm2 = gauss_expect([&a](double z) { double v = a.eval(z); return v * v; },
                            a.kinks);
    if (!std::isfinite(hd.norm2))
        throw std::domain_error("activation not square-integrable: " + a.label);

    if (a.analytic_coeff) {
        double mass = 0.0;
        for (int l = 0; l <= kMaxOrderAnalytic; ++l) {
            double c = a.analytic_coeff(l);
            hd.c.push_back(c);
            mass += c * c;
            if (l >= 4 && hd.norm2 - mass < kTailTol) break;
        }
    } else {
        int L = 32;
        hd.c = coeffs_by_quadrature(a, L);
        auto mass = [&]() {
            double m = 0.0;
            for (double c : hd.c) m += c * c;
            return m;
        };
        while (hd.norm2 - mass() >= kTailTol && L < kMaxOrderQuadrature) {
            L *= 2;
            hd.c = coeffs_by_quadrature(a, L);
        }
    }
    hd.info_exponent = detect_info_exponent(hd.c);
    return hd;
}

} // namespace

const HermiteData& Activation::hermite() const {
    std::call_once(cache_->flag, [this] { cache_->data = compute_hermite(*this); });
    return cache_->data;
}

double hermite_coeff(const Activation& a, int ell) {
    if (ell < 0) throw std::invalid_argument("hermite_coeff: ell < 0");
    const auto& hd = a.hermite();
    if (ell >= static_cast<int>(hd.c.size())) return 0.0;
    return hd.c[ell] * std::exp(0.5 * std::lgamma(ell + 1.0));
}

Activation strip_linear(const Activation& a) {
    const auto& hd = a.hermite();
    double mu0 = hd.c.empty() ? 0.0 : hd.c[0];
    double mu1 = hd.c.size() > 1 ? hd.c[1] : 0.0;
    Activation s;
    s.label = a.label + "-stripped";
    s.eval = [f = a.eval, mu0, mu1](double x) { return f(x) - mu0 - mu1 * x; };
    s.deriv = [df = a.deriv, mu1](double x) { return df(x) - mu1; };
    s.kinks = a.kinks;
    // keep the base coefficients for l >= 2; forces base computation once
    std::vector<double> c = hd.c;
    s.analytic_coeff = [c](int l) {
        if (l <= 1 || l >= static_cast<int>(c.size())) return 0.0;
        return c[l];
    };
    return s;
}

namespace {

double abs_coeff(int l) {
    // mu_{2j} = 2(-1)^{j-1}(2j-3)!!/sqrt(2 pi) for j >= 1, mu_0 = sqrt(2/pi)
    static const std::vector<double> table = [] {
        std::vector<double> t(kMaxOrderAnalytic + 1, 0.0);
        t[0] = std::sqrt(2.0 / M_PI);
        double c = std::sqrt(2.0 / M_PI) / std::sqrt(2.0); // c_2
        for (int j = 1; 2 * j <= kMaxOrderAnalytic; ++j) {
            t[2 * j] = c;
            c *= -(2.0 * j - 1.0) / std::sqrt((2.0 * j + 1.0) * (2.0 * j + 2.0));
        }
        return t;
    }();
    if (l < 0 || l > kMaxOrderAnalytic) return 0.0;
    return table[l];
}

} // namespace

Activation activation_by_name(const std::string& name) {
    bool stripped = false;
    std::string base = name;
    const std::string suffix = "-stripped";
    if (base.size() > suffix.size() &&
        base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
        stripped = true;
        base = base.substr(0, base.size() - suffix.size());
    }
    Activation a;
    if (base == "tanh2" || base == "tanh") {
        a.label = "tanh2";
        a.eval = [](double x) { return std::tanh(2.0 * x); };
        a.deriv = [](double x) {
            double t = std::tanh(2.0 * x);
            return 2.0 * (1.0 - t * t);
        };
    } else if (base == "he3") {
        a.label = "he3";
        const double s6 = std::sqrt(6.0);
        a.eval = [s6](double x) { return (x * x * x - 3.0 * x) / s6; };
        a.deriv = [s6](double x) { return (3.0 * x * x - 3.0) / s6; };
        a.analytic_coeff = [](int l) { return l == 3 ? 1.0 : 0.0; };
    } else if (base == "abs") {
        a.label = "abs";
        a.eval = [](double x) { return std::abs(x); };
        a.deriv = [](double x) { return x >= 0.0 ? 1.0 : -1.0; };
        a.kinks = {0.0};
        a.analytic_coeff = abs_coeff;
    } else if (base == "relu") {
        a.label = "relu";
        a.eval = [](double x) { return x > 0.0 ? x : 0.0; };
        a.deriv = [](double x) { return x > 0.0 ? 1.0 : 0.0; };
        a.kinks = {0.0};
        a.analytic_coeff = [](int l) {
            if (l == 1) return 0.5;
            return 0.5 * abs_coeff(l);
        };
    } else if (base == "identity") {
        a.label = "identity";
        a.eval = [](double x) { return x; };
        a.deriv = [](double) { return 1.0; };
        a.analytic_coeff = [](int l) { return l == 1 ? 1.0 : 0.0; };
    } else {
        throw std::invalid_argument("unknown activation: " + name);
    }
    return stripped ? strip_linear(a) : a;
}

std::vector<std::string> activation_names() {
    return {"tanh2", "he3", "abs", "relu", "identity"};
}

} // namespace sll
