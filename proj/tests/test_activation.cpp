#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sll/activation.hpp"
#include "sll/quadrature.hpp"

#include <cmath>

using namespace sll;

TEST_CASE("hermite coefficients of simple activations") {
    CHECK(hermite_coeff(activation_by_name("identity"), 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(hermite_coeff(activation_by_name("identity"), 0) == doctest::Approx(0.0).epsilon(1e-10));

    Activation he2;
    he2.label = "he2";
    he2.eval = [](double x) { return x * x - 1.0; };
    he2.deriv = [](double x) { return 2.0 * x; };
    CHECK(hermite_coeff(he2, 2) == doctest::Approx(2.0).epsilon(1e-10));

    // odd activation: even coefficients vanish
    auto t = activation_by_name("tanh2");
    CHECK(std::abs(hermite_coeff(t, 2)) < 1e-10);
    CHECK(std::abs(hermite_coeff(t, 0)) < 1e-10);
    CHECK(hermite_coeff(t, 1) > 0.5);
}

TEST_CASE("quadrature-based coefficients stable under refinement") {
    // the quadrature path must agree with the analytic value of mu_1 for tanh(2x)
    auto t = activation_by_name("tanh2");
    double mu1 = hermite_coeff(t, 1);
    double oracle = gauss_expect([](double z) { return z * std::tanh(2.0 * z); });
    CHECK(mu1 == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("abs and relu analytic coefficients match quadrature") {
    auto a = activation_by_name("abs");
    for (int l : {0, 2, 4, 6, 8}) {
        double quad = gauss_expect(
            [l](double z) {
                // He_l via recurrence
                double h0 = 1.0, h1 = z;
                if (l == 0) return std::abs(z);
                for (int m = 1; m < l; ++m) {
                    double h2 = z * h1 - m * h0;
                    h0 = h1;
                    h1 = h2;
                }
                return std::abs(z) * h1;
            },
            {0.0});
        CHECK(hermite_coeff(a, l) == doctest::Approx(quad).epsilon(1e-8));
    }
    auto r = activation_by_name("relu");
    CHECK(hermite_coeff(r, 1) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(hermite_coeff(r, 0) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-10));
}

TEST_CASE("strip_linear removes the linear part") {
    auto id = strip_linear(activation_by_name("identity"));
    for (double x : {-2.0, 0.3, 1.7}) CHECK(std::abs(id.eval(x)) < 1e-12);

    auto he3 = activation_by_name("he3");
    auto he3s = strip_linear(he3);
    for (double x : {-1.0, 0.5, 2.0})
        CHECK(he3s.eval(x) == doctest::Approx(he3.eval(x)).epsilon(1e-12));

    auto ts = strip_linear(activation_by_name("tanh2"));
    double c = gauss_expect([](double z) { return z * std::tanh(2.0 * z); });
    CHECK(ts.eval(0.7) == doctest::Approx(std::tanh(1.4) - c * 0.7).epsilon(1e-10));
    CHECK(std::abs(hermite_coeff(ts, 0)) < 1e-10);
    CHECK(std::abs(hermite_coeff(ts, 1)) < 1e-10);
    CHECK(ts.hermite().info_exponent == 3);
}

TEST_CASE("hermite mass bounded by the L2 norm") {
    for (const auto& name : activation_names()) {
        auto a = activation_by_name(name);
        const auto& hd = a.hermite();
        double mass = 0.0;
        for (double c : hd.c) mass += c * c;
        CHECK(mass <= hd.norm2 + 1e-9);
    }
}

TEST_CASE("info exponent detection") {
    CHECK(activation_by_name("identity").hermite().info_exponent == 1);
    CHECK(activation_by_name("he3").hermite().info_exponent == 3);
    CHECK(activation_by_name("abs").hermite().info_exponent == 2);
    CHECK(activation_by_name("relu").hermite().info_exponent == 1);
    CHECK(activation_by_name("tanh2").hermite().info_exponent == 1);
    CHECK(activation_by_name("tanh2-stripped").hermite().info_exponent == 3);
}
