#include "sll/mc.hpp"
#include "sll/rng.hpp"
#include "sll/stiefel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sll {

GlmOverlapResult glm_posterior_overlap(const Activation& activation, int d,
                                       long long n, double delta,
                                       const HmcParams& params,
                                       std::uint64_t seed, bool signal_init) {
    TeacherInstance teacher =
        make_teacher(1, d, make_ultrasparse_readout(1, {1.0}), activation,
                     delta, seed);
    Dataset data = generate_dataset(teacher, n, seed);
    PosteriorSampler sampler(teacher, data, params, seed);
    data.X.resize(0, 0);  // the sampler keeps its own single-precision copy
    if (signal_init) sampler.init_signal(1);
    sampler.burn_in();

    double sum = 0.0, sum2 = 0.0;
    for (int it = 0; it < params.samples; ++it) {
        sampler.step();
        double q = teacher.W0.row(0).dot(sampler.W().row(0));
        sum += q;
        sum2 += q * q;
    }
    GlmOverlapResult out;
    int m = params.samples;
    out.overlap = sum / m;
    // correlated draws: the naive standard error is a lower bound
    out.std_error = std::sqrt(
        std::max(0.0, sum2 / m - out.overlap * out.overlap) / m);
    out.diag = sampler.diagnostics();
    return out;
}

OverlapReport overlap_report(const Eigen::MatrixXd& W0,
                             const Eigen::MatrixXd& W1) {
    if (W0.cols() != W1.cols())
        throw std::invalid_argument("overlap_report: dimension mismatch");
    OverlapReport r;
    r.Q = W0 * W1.transpose();
    r.diag = r.Q.diagonal();
    long long k0 = W0.rows(), k1 = W1.rows();
    double off = r.Q.squaredNorm() - r.diag.squaredNorm();
    long long cnt = k0 * k1 - std::min(k0, k1);
    r.offdiag_ms = cnt > 0 ? off / double(cnt) : 0.0;
    return r;
}

GibbsEstimate gibbs_error(const TeacherInstance& teacher,
                          const Eigen::MatrixXd& W1, const Readout& v1,
                          const KernelProfile& profile, long long n_test,
                          std::uint64_t seed) {
    if (W1.cols() != teacher.d() || v1.k() != W1.rows())
        throw std::invalid_argument("gibbs_error: shape mismatch");
    GibbsEstimate out;

    auto gen = make_stream(seed, "gibbs");
    Eigen::MatrixXd X = gaussian_matrix(n_test, teacher.d(), gen);
    Eigen::Map<const Eigen::VectorXd> u1(v1.v.data(), v1.k());
    Eigen::VectorXd diff =
        clean_outputs(teacher, X) -
        network_outputs(W1, u1, teacher.activation, X);
    out.gibbs_mc = diff.squaredNorm() / double(n_test);
    double m2 = diff.array().square().square().mean();
    out.std_error =
        std::sqrt(std::max(0.0, m2 - out.gibbs_mc * out.gibbs_mc) /
                  double(n_test));
    out.bo_estimate = 0.5 * out.gibbs_mc;

    // kernel identity: E[(y0 - y1)^2] = v'g(Q00)v + v1'g(Q11)v1 - 2 v'g(Q01)v1
    auto quad = [&](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                    const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        Eigen::MatrixXd Q = A * B.transpose();
        double s = 0.0;
        for (long long i = 0; i < Q.rows(); ++i)
            for (long long j = 0; j < Q.cols(); ++j)
                s += a(i) * b(j) * profile.g(std::clamp(Q(i, j), -1.0, 1.0));
        return s;
    };
    Eigen::Map<const Eigen::VectorXd> u0(teacher.readout.v.data(),
                                         teacher.readout.k());
    out.gibbs_kernel = quad(teacher.W0, teacher.W0, u0, u0) +
                       quad(W1, W1, u1, u1) -
                       2.0 * quad(teacher.W0, W1, u0, u1);
    return out;
}

} // namespace sll
