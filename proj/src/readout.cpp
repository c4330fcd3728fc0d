#include "sll/readout.hpp"

#include "sll/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sll {

double Readout::norm2() const {
    return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

namespace {
void normalize_sorted(std::vector<double>& v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    double n2 = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
    if (n2 <= 0.0) throw std::invalid_argument("readout: zero norm");
    double s = 1.0 / std::sqrt(n2);
    for (double& x : v) x *= s;
}
} // namespace

Readout make_powerlaw_readout(int k, double beta) {
    if (k < 1 || beta <= 0.0)
        throw std::invalid_argument("powerlaw readout: need k >= 1, beta > 0");
    Readout r;
    r.kind = ReadoutKind::powerlaw;
    r.beta = beta;
    r.v.resize(k);
    double z = 0.0;
    for (int i = 1; i <= k; ++i) z += std::pow(double(i), -2.0 * beta);
    for (int i = 1; i <= k; ++i)
        r.v[i - 1] = std::sqrt(std::pow(double(i), -2.0 * beta) / z);
    return r;
}

Readout make_exponential_readout(int k, double rate) {
    if (k < 1 || rate <= 0.0)
        throw std::invalid_argument("exponential readout: need k >= 1, rate > 0");
    Readout r;
    r.kind = ReadoutKind::exponential;
    r.rate = rate;
    r.v.resize(k);
    for (int i = 1; i <= k; ++i) r.v[i - 1] = std::exp(-rate * i);
    normalize_sorted(r.v);
    return r;
}

Readout make_dense_readout(int k, const std::vector<double>& values,
                           std::uint64_t seed) {
    if (k < 1 || values.empty())
        throw std::invalid_argument("dense readout: need k >= 1 and values");
    Readout r;
    r.kind = ReadoutKind::dense;
    r.v.resize(k);
    auto rng = make_stream(seed, "dense-readout");
    std::uniform_int_distribution<size_t> pick(0, values.size() - 1);
    double s = 1.0 / std::sqrt(double(k));
    for (int i = 0; i < k; ++i) {
        double x = values[pick(rng)];
        if (x <= 0.0) throw std::invalid_argument("dense readout: nonpositive value");
        r.v[i] = x * s;
    }
    normalize_sorted(r.v);
    return r;
}

Readout make_dense_uniform_readout(int k, double lo, double hi,
                                   std::uint64_t seed) {
    if (k < 1 || lo <= 0.0 || hi <= lo)
        throw std::invalid_argument("dense uniform readout: bad range");
    Readout r;
    r.kind = ReadoutKind::dense;
    r.v.resize(k);
    auto rng = make_stream(seed, "dense-readout");
    std::uniform_real_distribution<double> u(lo, hi);
    // scale so the limiting density of sqrt(k) v has unit second moment
    double m2 = (hi * hi + hi * lo + lo * lo) / 3.0;
    double s = 1.0 / std::sqrt(m2 * k);
    for (int i = 0; i < k; ++i) r.v[i] = u(rng) * s;
    normalize_sorted(r.v);
    return r;
}

Readout make_ultrasparse_readout(int k, const std::vector<double>& head) {
    int p = static_cast<int>(head.size());
    if (k < 1 || p < 1 || p > k)
        throw std::invalid_argument("ultrasparse readout: need 1 <= p <= k");
    Readout r;
    r.kind = ReadoutKind::ultrasparse;
    r.p = p;
    r.v.assign(k, 0.0);
    std::copy(head.begin(), head.end(), r.v.begin());
    for (double x : head)
        if (x <= 0.0) throw std::invalid_argument("ultrasparse readout: nonpositive head");
    std::sort(r.v.begin(), r.v.begin() + p, std::greater<>());
    double n2 = std::inner_product(r.v.begin(), r.v.end(), r.v.begin(), 0.0);
    double s = 1.0 / std::sqrt(n2);
    for (double& x : r.v) x *= s;
    return r;
}

Readout make_readout(const std::string& kind, int k, double beta, double rate,
                     int p, std::uint64_t seed) {
    if (kind == "powerlaw") return make_powerlaw_readout(k, beta);
    if (kind == "exponential") return make_exponential_readout(k, rate);
    if (kind == "dense") return make_dense_uniform_readout(k, 2.0, 5.0, seed);
    if (kind == "ultrasparse")
        return make_ultrasparse_readout(k, std::vector<double>(std::max(p, 1), 1.0));
    throw std::invalid_argument("unknown readout kind: " + kind);
}

} // namespace sll
