#pragma once

#include <functional>
#include <vector>

namespace sll {

// Gauss-Legendre nodes/weights on [-1,1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    explicit GaussLegendre(int n);
};

// E_{z~N(0,1)}[f(z)], composite Gauss-Legendre over [-zmax, zmax] with panel
// breaks at the supplied kink locations. Panel count doubles until the result
// is stable to `tol`.
double gauss_expect(const std::function<double(double)>& f,
                    const std::vector<double>& kinks = {},
                    double tol = 1e-12, double zmax = 12.0);

// E[f(z1) h(z2)] for (z1,z2) jointly standard Gaussian with correlation x.
// Inner integral over the independent component is split at the image of each
// kink of h; used as the bivariate oracle for activation kernels.
double gauss_expect_bivariate(const std::function<double(double)>& f,
                              const std::function<double(double)>& h,
                              double x,
                              const std::vector<double>& kinks_f = {},
                              const std::vector<double>& kinks_h = {});

// Adaptive Simpson on [a,b].
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10);

} // namespace sll
