#include "sll/hmc.hpp"
#include "sll/rng.hpp"
#include "sll/stiefel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sll {

PosteriorSampler::PosteriorSampler(const TeacherInstance& teacher,
                                   const Dataset& data, HmcParams params,
                                   std::uint64_t seed)
    : teacher_(teacher), Xf_(data.X.cast<float>()), y_(data.y_out),
      params_(params), gen_(make_stream(seed, "hmc")) {
    if (teacher.delta <= 0.0)
        throw std::invalid_argument("PosteriorSampler: need delta > 0");
    if (params_.leapfrog_steps < 1 || params_.step_size <= 0.0)
        throw std::invalid_argument("PosteriorSampler: bad leapfrog settings");
    init_random();
}

void PosteriorSampler::init_signal(int rows_from_truth) {
    int k = teacher_.k();
    if (rows_from_truth < 0 || rows_from_truth > k)
        throw std::invalid_argument("init_signal: rows outside [0, k]");
    W_.resize(k, teacher_.d());
    W_.topRows(rows_from_truth) = teacher_.W0.topRows(rows_from_truth);
    for (int i = rows_from_truth; i < k; ++i)
        W_.row(i) = sample_sphere(teacher_.d(), gen_).transpose();
    energy_ = energy_grad(W_, grad_);
}

void PosteriorSampler::init_random() { init_signal(0); }

double PosteriorSampler::energy_grad(const Eigen::MatrixXd& W,
                                     Eigen::MatrixXd& grad) const {
    const Activation& act = teacher_.activation;
    Eigen::Map<const Eigen::VectorXd> v(teacher_.readout.v.data(),
                                        teacher_.readout.k());
    const long long n = Xf_.rows();
    // The design matrix is streamed in single precision and in row blocks:
    // each block is read from memory once per gradient (the residual of
    // sample j depends only on row j) and reused cache-hot for the
    // gradient accumulation. Residuals and accumulators stay in double.
    const long long block = std::max<long long>(1, (1 << 19) / (4 * W.cols()));
    Eigen::MatrixXf Wf = W.cast<float>();
    Eigen::VectorXf vf = v.cast<float>();
    grad.setZero(W.rows(), W.cols());
    double r2 = 0.0;
    Eigen::MatrixXf Z, G;
    Eigen::VectorXf r;
    for (long long b = 0; b < n; b += block) {
        long long m = std::min(block, n - b);
        auto Xb = Xf_.middleRows(b, m);
        Z.noalias() = Wf * Xb.transpose(); // k x m
        r.resize(m);
        for (long long j = 0; j < m; ++j) {
            double out = 0.0;
            for (long long i = 0; i < Z.rows(); ++i) {
                double z = Z(i, j);
                out += v(i) * act.eval(z);
                double sp = act.deriv(z);
                // flush saturated-activation underflow: subnormal operands
                // make the matrix products below pathologically slow
                Z(i, j) = std::abs(sp) < 1e-30 ? 0.0f : float(sp);
            }
            double res = y_(b + j) - out;
            r2 += res * res;
            r(j) = float(res);
        }
        // dU/dW = -(1/delta) (v r' . sigma'(W X')) X
        Z.array().rowwise() *= r.transpose().array();
        Z.array().colwise() *= vf.array();
        G.noalias() = Z * Xb;
        grad += G.cast<double>();
    }
    grad /= -teacher_.delta;
    return r2 / (2.0 * teacher_.delta);
}

bool PosteriorSampler::hmc_iteration(bool tuning) {
    const int k = teacher_.k(), d = teacher_.d();
    std::normal_distribution<double> normal;
    Eigen::MatrixXd p(k, d);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < d; ++j) p(i, j) = normal(gen_);
    for (int i = 0; i < k; ++i)
        p.row(i) -= p.row(i).dot(W_.row(i)) * W_.row(i);

    double h = params_.step_size;
    double H0 = energy_ + 0.5 * p.squaredNorm();
    Eigen::MatrixXd W = W_, grad = grad_;
    double U = energy_;

    for (int step = 0; step < params_.leapfrog_steps; ++step) {
        p -= 0.5 * h * grad;
        for (int i = 0; i < k; ++i) {
            p.row(i) -= p.row(i).dot(W.row(i)) * W.row(i);
            double rho = p.row(i).norm();
            if (rho < 1e-300) continue;
            double c = std::cos(rho * h), s = std::sin(rho * h);
            Eigen::RowVectorXd w = W.row(i);
            W.row(i) = c * w + (s / rho) * p.row(i);
            p.row(i) = -rho * s * w + c * p.row(i);
            W.row(i) /= W.row(i).norm();
        }
        U = energy_grad(W, grad);
        p -= 0.5 * h * grad;
        for (int i = 0; i < k; ++i)
            p.row(i) -= p.row(i).dot(W.row(i)) * W.row(i);
    }

    double H1 = U + 0.5 * p.squaredNorm();
    bool finite = std::isfinite(H1);
    if (!finite && ++bad_energy_ > 50)
        throw std::runtime_error(
            "PosteriorSampler: repeated divergent trajectories; "
            "step size too large");
    double log_accept = finite ? std::min(0.0, H0 - H1) : -1e300;
    std::uniform_real_distribution<double> unif;
    if (std::log(unif(gen_)) < log_accept) {
        W_ = std::move(W);
        grad_ = std::move(grad);
        energy_ = U;
        ++accepted_;
    }
    ++diag_.iterations;
    if (tuning && params_.tune) {
        double a = std::exp(log_accept);
        double gain = 0.3 / (1.0 + tune_iter_++ / 50.0);
        params_.step_size = std::clamp(
            params_.step_size * std::exp(gain * (a - params_.target_accept)),
            1e-8, 10.0);
    }
    diag_.step_size = params_.step_size;
    return log_accept > std::log(0.5);
}

void PosteriorSampler::burn_in() {
    tune_iter_ = 0;
    for (int it = 0; it < params_.burn_in / 2; ++it) hmc_iteration(true);
    // judge the tuned step on the second half only
    accepted_ = 0;
    diag_.iterations = 0;
    for (int it = params_.burn_in / 2; it < params_.burn_in; ++it)
        hmc_iteration(true);
    double rate = diag_.iterations
                      ? double(accepted_) / double(diag_.iterations)
                      : 0.0;
    if (params_.tune && params_.burn_in >= 50 && (rate < 0.2 || rate > 0.9))
        throw std::runtime_error(
            "PosteriorSampler: burn-in acceptance rate " +
            std::to_string(rate) + " outside [0.2, 0.9]");
    // acceptance statistics restart for the sampling phase
    accepted_ = 0;
    diag_.iterations = 0;
    diag_.accept_rate = 0.0;
}

void PosteriorSampler::step() {
    hmc_iteration(false);
    diag_.accept_rate = double(accepted_) / double(diag_.iterations);
}

} // namespace sll
