#include "sll/sgd.hpp"
#include "sll/rng.hpp"
#include "sll/stiefel.hpp"
#include "sll/theory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sll {

namespace {

void apply_eval(const Activation& act, Eigen::MatrixXd& Z,
                Eigen::MatrixXd* deriv = nullptr) {
    if (deriv) deriv->resize(Z.rows(), Z.cols());
    for (long long j = 0; j < Z.cols(); ++j)
        for (long long i = 0; i < Z.rows(); ++i) {
            if (deriv) (*deriv)(i, j) = act.deriv(Z(i, j));
            Z(i, j) = act.eval(Z(i, j));
        }
}

} // namespace

double forward(const StudentNet& net, const Activation& activation,
               const Eigen::VectorXd& x) {
    Eigen::VectorXd z = net.W * x;
    for (int i = 0; i < z.size(); ++i) z(i) = activation.eval(z(i));
    return net.u.dot(z);
}

Gradients gradient(const StudentNet& net, const Activation& activation,
                   const Eigen::MatrixXd& X_batch,
                   const Eigen::VectorXd& y_batch) {
    long long b = X_batch.rows();
    if (b < 1) throw std::invalid_argument("gradient: empty batch");
    Eigen::MatrixXd Z = X_batch * net.W.transpose(); // b x k_s
    Eigen::MatrixXd D;
    apply_eval(activation, Z, &D);
    Eigen::VectorXd r = Z * net.u - y_batch;
    Gradients g;
    g.u = Z.transpose() * r * (2.0 / b);
    D.array().colwise() *= r.array();
    D.array().rowwise() *= net.u.transpose().array();
    g.W.noalias() = D.transpose() * X_batch * (2.0 / b);
    return g;
}

AdamState AdamState::for_net(const StudentNet& net, double lr_) {
    AdamState s;
    s.lr = lr_;
    s.mW = Eigen::MatrixXd::Zero(net.W.rows(), net.W.cols());
    s.vW = s.mW;
    s.mu = Eigen::VectorXd::Zero(net.u.size());
    s.vu = s.mu;
    return s;
}

void adam_step(AdamState& s, StudentNet& net, const Gradients& g) {
    ++s.t;
    double c1 = 1.0 - std::pow(s.beta1, double(s.t));
    double c2 = 1.0 - std::pow(s.beta2, double(s.t));
    s.mW = s.beta1 * s.mW + (1.0 - s.beta1) * g.W;
    s.vW = s.beta2 * s.vW + (1.0 - s.beta2) * g.W.cwiseProduct(g.W);
    s.mu = s.beta1 * s.mu + (1.0 - s.beta1) * g.u;
    s.vu = s.beta2 * s.vu + (1.0 - s.beta2) * g.u.cwiseProduct(g.u);
    net.W -= s.lr * (s.mW / c1).cwiseQuotient(
                        ((s.vW / c2).cwiseSqrt().array() + s.eps).matrix());
    net.u -= s.lr * (s.mu / c1).cwiseQuotient(
                        ((s.vu / c2).cwiseSqrt().array() + s.eps).matrix());
}

TrainReport train_student(const TeacherInstance& teacher, const Dataset& data,
                          int k_s, const SgdHyper& hyper, std::uint64_t seed) {
    if (k_s < 1 || k_s > teacher.k())
        throw std::invalid_argument("train_student: width outside [1, k]");
    const Activation& act = teacher.activation;
    long long n = data.X.rows();
    int d = teacher.d();

    TrainReport report;
    StudentNet& net = report.net;
    auto gen = make_stream(seed, "sgd-init");
    if (hyper.init_at_teacher) {
        net.W = teacher.W0.topRows(k_s);
        net.u = Eigen::Map<const Eigen::VectorXd>(teacher.readout.v.data(),
                                                  teacher.k())
                    .head(k_s);
    } else {
        net.W.resize(k_s, d);
        for (int i = 0; i < k_s; ++i)
            net.W.row(i) = sample_sphere(d, gen).transpose();
        std::normal_distribution<double> normal;
        net.u.resize(k_s);
        for (int i = 0; i < k_s; ++i)
            net.u(i) = normal(gen) / std::sqrt(double(k_s));
    }
    AdamState adam = AdamState::for_net(net, hyper.lr);

    auto test_gen = make_stream(seed, "sgd-test");
    Eigen::MatrixXd X_test = gaussian_matrix(hyper.n_test, d, test_gen);
    Eigen::VectorXd y_test = clean_outputs(teacher, X_test);

    auto test_mse = [&]() {
        Eigen::MatrixXd Z = X_test * net.W.transpose();
        apply_eval(act, Z);
        return (Z * net.u - y_test).squaredNorm() / double(hyper.n_test);
    };

    int batches = std::max(1, hyper.batches);
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        double train_sse = 0.0;
        for (int b = 0; b < batches; ++b) {
            long long lo = n * b / batches, hi = n * (b + 1) / batches;
            long long len = hi - lo;
            if (len < 1) continue;
            auto Xb = data.X.middleRows(lo, len);
            auto yb = data.y_out.segment(lo, len);
            Gradients g = gradient(net, act, Xb, yb);
            adam_step(adam, net, g);
            Eigen::MatrixXd Z = Xb * net.W.transpose();
            apply_eval(act, Z);
            train_sse += (Z * net.u - yb).squaredNorm();
        }
        for (int i = 0; i < k_s; ++i) net.W.row(i) /= net.W.row(i).norm();
        double mse = train_sse / double(n);
        if (!std::isfinite(mse))
            throw std::runtime_error(
                "train_student: loss diverged (epoch " + std::to_string(epoch) +
                ", lr " + std::to_string(hyper.lr) + ", width " +
                std::to_string(k_s) + ")");
        report.train_mse.push_back(mse);
        if (hyper.eval_every > 0 && (epoch + 1) % hyper.eval_every == 0) {
            report.test_epochs.push_back(epoch + 1);
            report.test_mse.push_back(test_mse());
        }
    }
    report.final_test_mse = test_mse();
    report.teacher_overlap = teacher.W0 * net.W.transpose();
    return report;
}

std::vector<SweepPoint> width_sweep(const TeacherInstance& teacher,
                                    long long n,
                                    const std::vector<int>& k_s_list,
                                    const SgdHyper& hyper,
                                    const std::vector<std::uint64_t>& seeds) {
    std::vector<SweepPoint> out;
    for (int k_s : k_s_list) {
        SweepPoint p;
        p.x = k_s;
        double sum = 0.0, sum2 = 0.0;
        for (std::uint64_t seed : seeds) {
            Dataset data = generate_dataset(teacher, n, seed);
            double mse = train_student(teacher, data, k_s, hyper, seed)
                             .final_test_mse;
            sum += mse;
            sum2 += mse * mse;
        }
        int m = static_cast<int>(seeds.size());
        p.mean_mse = sum / m;
        p.std_mse = std::sqrt(std::max(0.0, sum2 / m - p.mean_mse * p.mean_mse));
        out.push_back(p);
    }
    return out;
}

std::vector<SweepPoint> data_sweep(
    const TeacherInstance& teacher, const std::vector<long long>& n_list,
    WidthPolicy policy, std::shared_ptr<const KernelProfile> profile,
    const std::vector<int>& candidate_widths, const SgdHyper& hyper,
    const std::vector<std::uint64_t>& seeds) {
    std::vector<SweepPoint> out;
    for (long long n : n_list) {
        std::vector<int> widths;
        switch (policy) {
        case WidthPolicy::full:
            widths = {teacher.k()};
            break;
        case WidthPolicy::effective: {
            ModelConfig c;
            c.k = teacher.k();
            c.d = teacher.d();
            c.n = n;
            c.delta = teacher.delta;
            c.readout = teacher.readout;
            c.profile = profile;
            widths = {std::max(1, solve_fixed_point(c).k_c)};
            break;
        }
        case WidthPolicy::optimized:
            widths = candidate_widths;
            break;
        }
        SweepPoint best;
        best.mean_mse = std::numeric_limits<double>::infinity();
        for (int k_s : widths) {
            auto pts = width_sweep(teacher, n, {k_s}, hyper, seeds);
            if (pts[0].mean_mse < best.mean_mse) best = pts[0];
        }
        best.x = double(n);
        out.push_back(best);
    }
    return out;
}

} // namespace sll
