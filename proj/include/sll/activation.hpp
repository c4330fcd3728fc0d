#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace sll {

// Normalized Hermite data of a scalar activation: c[l] = mu_l / sqrt(l!),
// so that sum c[l]^2 = E[sigma(z)^2] and g(x) = sum c[l]^2 x^l.
struct HermiteData {
    std::vector<double> c;
    double norm2 = 0.0;     // quadrature estimate of E[sigma^2]
    int info_exponent = 0;  // smallest l >= 1 with |mu_l| above noise floor
};

// Scalar activation with lazily computed Hermite coefficients.
// Copies share the coefficient cache; first computation wins.
struct Activation {
    std::string label;
    std::function<double(double)> eval;
    std::function<double(double)> deriv;
    std::vector<double> kinks;                 // non-smooth points of eval
    std::function<double(int)> analytic_coeff; // normalized c_l, optional

    const HermiteData& hermite() const;

  private:
    struct Cache {
        std::once_flag flag;
        HermiteData data;
    };
    mutable std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// mu_l = E[sigma(z) He_l(z)].
double hermite_coeff(const Activation& a, int ell);

// sigma(x) - mu_0 - mu_1 x; the result has mu_0 = mu_1 = 0.
Activation strip_linear(const Activation& a);

// Built-in catalogue: tanh2, he3, abs, relu, identity
// (optionally suffixed with "-stripped").
Activation activation_by_name(const std::string& name);
std::vector<std::string> activation_names();

} // namespace sll
