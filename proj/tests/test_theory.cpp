#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sll/theory.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

using namespace sll;

namespace {

std::shared_ptr<const KernelProfile> he3_profile() {
    static auto p = std::make_shared<const KernelProfile>(activation_by_name("he3"));
    return p;
}

std::shared_ptr<const KernelProfile> tanh_profile() {
    static auto p = std::make_shared<const KernelProfile>(
        activation_by_name("tanh2-stripped"));
    return p;
}

ModelConfig powerlaw_model(int k, int d, long long n, double delta, double beta) {
    ModelConfig c;
    c.k = k;
    c.d = d;
    c.n = n;
    c.delta = delta;
    c.readout = make_powerlaw_readout(k, beta);
    c.profile = he3_profile();
    return c;
}

} // namespace

TEST_CASE("config validation") {
    ModelConfig c = powerlaw_model(4, 100, 1000, 0.1, 1.0);
    CHECK_NOTHROW(c.validate());

    ModelConfig bad = c;
    bad.k = 200; // k > d
    bad.readout = make_powerlaw_readout(200, 1.0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = c;
    bad.delta = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = c;
    bad.n = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = c;
    bad.readout.v[0] *= 1.5; // norm > 1
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = c;
    bad.readout.v[0] *= 0.5; // norm < 1 without extra noise
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = c;
    bad.profile = std::make_shared<const KernelProfile>(activation_by_name("identity"));
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("single feature matches scalar bisection oracle") {
    // k = 1: eps solves eps = g(1) - g(m(r/(delta+eps))), r = n/d.
    ModelConfig c;
    c.k = 1;
    c.d = 50;
    c.delta = 0.3;
    c.readout = make_ultrasparse_readout(1, {1.0});
    c.profile = he3_profile();

    const auto& prof = *c.profile;
    for (long long n : {10LL, 100LL, 500LL, 2000LL, 20000LL}) {
        c.n = n;
        double rate = double(n) / c.d;
        double lo = 0.0, hi = prof.g_at_1();
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            double rhs = prof.g_at_1() - prof.g(prof.m_sigma(rate / (c.delta + mid)));
            (rhs > mid ? lo : hi) = mid;
        }
        auto sol = solve_fixed_point(c);
        CHECK(std::abs(sol.epsilon - 0.5 * (lo + hi)) < 1e-9);
    }
}

TEST_CASE("fixed point residual and reported quantities are consistent") {
    ModelConfig c = powerlaw_model(8, 200, 4000, 0.05, 0.8);
    auto sol = solve_fixed_point(c);
    const auto& prof = *c.profile;

    CHECK(sol.residual < 1e-8);
    CHECK(!sol.jump_flag);
    REQUIRE(int(sol.q.size()) == c.k);

    int kc = 0;
    double eps = 0.0;
    for (int i = 0; i < c.k; ++i) {
        double v2 = c.readout.v[i] * c.readout.v[i];
        double snr = (double(c.n) / c.d) * v2 / (c.delta + sol.epsilon);
        CHECK(std::abs(sol.snr[i] - snr) < 1e-12);
        CHECK(std::abs(sol.q[i] - prof.m_sigma(snr)) < 1e-12);
        if (sol.q[i] > 0.0) ++kc;
        eps += v2 * (prof.g_at_1() - prof.g(sol.q[i]));
    }
    CHECK(sol.k_c == kc);
    CHECK(std::abs(sol.epsilon - eps) < 1e-8);

    // readouts are sorted, so overlaps and snrs are nonincreasing
    for (int i = 1; i < c.k; ++i) {
        CHECK(sol.q[i] <= sol.q[i - 1] + 1e-12);
        CHECK(sol.snr[i] <= sol.snr[i - 1] + 1e-12);
    }
}

TEST_CASE("learnability criterion: q_i > 0 iff snr_i above the critical value") {
    ModelConfig c = powerlaw_model(12, 300, 8000, 0.1, 1.0);
    auto sol = solve_fixed_point(c);
    double lc = c.profile->lambda_sigma();
    for (int i = 0; i < c.k; ++i) {
        if (std::abs(sol.snr[i] - lc) < 1e-6) continue; // knife edge
        CHECK((sol.q[i] > 0.0) == (sol.snr[i] > lc));
    }
    CHECK(sol.k_c > 0);
    CHECK(sol.k_c < c.k);
}

TEST_CASE("error curve is nonincreasing in n with correct endpoints") {
    ModelConfig c = powerlaw_model(6, 150, 1, 0.2, 0.6);
    const auto& prof = *c.profile;

    std::vector<long long> grid;
    for (long long n = 1; n <= 3'000'000; n *= 4) grid.push_back(n);
    auto curve = learning_curve(c, grid);

    // tiny n: nothing learned, eps = g(1) * |v|^2 = g(1)
    CHECK(curve.front().epsilon == doctest::Approx(prof.g_at_1()).epsilon(1e-10));
    CHECK(curve.front().k_c == 0);
    // huge n: every feature learned, eps small
    CHECK(curve.back().k_c == c.k);
    CHECK(curve.back().epsilon < 0.02);

    for (size_t j = 1; j < curve.size(); ++j) {
        CHECK(curve[j].epsilon <= curve[j - 1].epsilon + 1e-10);
        CHECK(curve[j].k_c >= curve[j - 1].k_c);
    }
}

TEST_CASE("transitions bracket the change of k_c") {
    ModelConfig c = powerlaw_model(5, 100, 1, 0.1, 1.0);
    auto trans = transition_locations(c, {1, 2, 3, 4, 5}, 100'000'000);
    for (const auto& t : trans) {
        REQUIRE(t.n_threshold > 0.0);
        c.n = static_cast<long long>(t.n_threshold * 1.001) + 1;
        CHECK(solve_fixed_point(c).q[t.feature - 1] > 0.0);
        c.n = static_cast<long long>(t.n_threshold * 0.999);
        if (c.n >= 1) CHECK(solve_fixed_point(c).q[t.feature - 1] == 0.0);
    }
    // weaker features switch on later
    for (size_t j = 1; j < trans.size(); ++j)
        CHECK(trans[j].n_threshold >= trans[j - 1].n_threshold);

    // a feature below the budget reports no threshold
    auto none = transition_locations(c, {5}, 100);
    CHECK(none[0].n_threshold < 0.0);
}

TEST_CASE("compressed teacher reproduces the full model error") {
    ModelConfig c = powerlaw_model(16, 400, 10000, 0.05, 0.9);
    auto sol = solve_fixed_point(c);
    REQUIRE(sol.k_c > 0);
    REQUIRE(sol.k_c < c.k);

    ModelConfig red = compressed_teacher(c, sol);
    CHECK(red.k == sol.k_c);
    CHECK(red.extra_noise > 0.0);
    CHECK_NOTHROW(red.validate());

    auto rsol = solve_fixed_point(red);
    CHECK(std::abs(rsol.epsilon - sol.epsilon) < 1e-8);
    CHECK(rsol.k_c == sol.k_c);
    for (int i = 0; i < red.k; ++i)
        CHECK(std::abs(rsol.q[i] - sol.q[i]) < 1e-7);
}

TEST_CASE("pure noise model returns its floor") {
    ModelConfig c;
    c.k = 0;
    c.d = 10;
    c.n = 100;
    c.delta = 0.1;
    c.extra_noise = 0.37;
    c.profile = he3_profile();
    auto sol = solve_fixed_point(c);
    CHECK(sol.epsilon == doctest::Approx(0.37).epsilon(1e-12));
    CHECK(sol.k_c == 0);
}

TEST_CASE("solver works with a quadrature-built kernel") {
    ModelConfig c;
    c.k = 3;
    c.d = 60;
    c.n = 30000;
    c.delta = 0.05;
    c.readout = make_exponential_readout(3, 0.5);
    c.profile = tanh_profile();
    auto sol = solve_fixed_point(c);
    CHECK(sol.residual < 1e-8);
    CHECK(sol.k_c >= 1);
    CHECK(sol.epsilon < c.profile->g_at_1());
}
