#include "sll/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sll {

GaussLegendre::GaussLegendre(int n) : nodes(n), weights(n) {
    // Newton iteration on Legendre polynomials, symmetric nodes.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

namespace {

const GaussLegendre& rule32() {
    static const GaussLegendre r(32);
    return r;
}

double panel_integral(const std::function<double(double)>& g, double a, double b) {
    const auto& r = rule32();
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (size_t i = 0; i < r.nodes.size(); ++i)
        s += r.weights[i] * g(mid + half * r.nodes[i]);
    return s * half;
}

double composite(const std::function<double(double)>& g,
                 const std::vector<double>& breaks, int panels_per_segment) {
    double s = 0.0;
    for (size_t k = 0; k + 1 < breaks.size(); ++k) {
        double a = breaks[k], b = breaks[k + 1];
        double h = (b - a) / panels_per_segment;
        for (int p = 0; p < panels_per_segment; ++p)
            s += panel_integral(g, a + p * h, a + (p + 1) * h);
    }
    return s;
}

} // namespace

double gauss_expect(const std::function<double(double)>& f,
                    const std::vector<double>& kinks, double tol, double zmax) {
    auto g = [&f](double z) {
        return f(z) * std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    };
    std::vector<double> breaks{-zmax, 0.0, zmax};
    for (double k : kinks)
        if (k > -zmax && k < zmax) breaks.push_back(k);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    double prev = composite(g, breaks, 4);
    for (int panels = 8; panels <= 256; panels *= 2) {
        double cur = composite(g, breaks, panels);
        if (std::abs(cur - prev) < tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    if (!std::isfinite(prev))
        throw std::domain_error("gauss_expect: non-finite integral");
    return prev;
}

double gauss_expect_bivariate(const std::function<double(double)>& f,
                              const std::function<double(double)>& h, double x,
                              const std::vector<double>& kinks_f,
                              const std::vector<double>& kinks_h) {
    if (std::abs(x) > 1.0)
        throw std::domain_error("correlation outside [-1,1]");
    double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    auto outer = [&](double z1) {
        double fz = f(z1);
        if (fz == 0.0) return 0.0;
        if (s < 1e-12) return fz * h(x * z1); // degenerate correlation
        // z2 = x z1 + s u; split the inner integral at kinks of h.
        std::vector<double> inner_kinks;
        for (double k : kinks_h) inner_kinks.push_back((k - x * z1) / s);
        auto inner = [&](double u) { return h(x * z1 + s * u); };
        return fz * gauss_expect(inner, inner_kinks, 1e-13);
    };
    return gauss_expect(outer, kinks_f, 1e-12);
}

namespace {
double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}
} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

} // namespace sll
