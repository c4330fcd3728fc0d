#include "sll/asymptotics.hpp"
#include "sll/config.hpp"
#include "sll/mc.hpp"
#include "sll/recipes.hpp"
#include "sll/sgd.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace sll;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct GlobalOpts {
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = ".";
};

std::ofstream open_out(const GlobalOpts& g, const std::string& name) {
    std::filesystem::path path(name);
    if (path.is_relative()) {
        std::filesystem::create_directories(g.out_dir);
        path = std::filesystem::path(g.out_dir) / path;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError({"cannot write output file: " + path.string()});
    std::cerr << "writing " << path.string() << "\n";
    out.precision(12);
    return out;
}

Config load_config(const std::string& path, RunKind kind,
                   const GlobalOpts& g, bool seed_set) {
    Config raw = path.empty() ? Config{} : parse_config_file(path);
    apply_env_overrides(raw);
    if (seed_set) raw.set("seed", std::to_string(g.seed));
    auto validated = validate_config(raw, kind);
    for (const auto& w : validated.warnings)
        std::cerr << "warning: " << w << "\n";
    return validated.normalized;
}

// "a:b:steps" -> log-spaced integer grid
std::vector<long long> parse_log_grid(const std::string& spec) {
    double lo = 0, hi = 0;
    int steps = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' ||
        lo <= 0 || hi < lo || steps < 1)
        throw ConfigError({"bad grid spec (want a:b:steps): " + spec});
    std::vector<long long> grid;
    for (int i = 0; i < steps; ++i) {
        double t = steps == 1 ? 0.0 : double(i) / (steps - 1);
        long long v = (long long)std::llround(lo * std::pow(hi / lo, t));
        if (grid.empty() || v > grid.back()) grid.push_back(v);
    }
    return grid;
}

std::vector<double> parse_lin_grid(const std::string& spec) {
    double lo = 0, hi = 0;
    int steps = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' ||
        hi < lo || steps < 1)
        throw ConfigError({"bad grid spec (want a:b:steps): " + spec});
    std::vector<double> grid;
    for (int i = 0; i < steps; ++i)
        grid.push_back(steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1));
    return grid;
}

template <typename T>
std::vector<T> parse_list(const std::string& spec) {
    std::vector<T> out;
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back((T)std::stod(tok));
    }
    if (out.empty()) throw ConfigError({"empty list: " + spec});
    return out;
}

HmcParams hmc_from_config(const Config& c) {
    HmcParams p;
    p.burn_in = (int)c.get_int_or("mc.burn_in", p.burn_in);
    p.samples = (int)c.get_int_or("mc.samples", p.samples);
    p.leapfrog_steps = (int)c.get_int_or("mc.steps", p.leapfrog_steps);
    p.step_size = c.get_double_or("mc.step_size", p.step_size);
    return p;
}

SgdHyper sgd_from_config(const Config& c) {
    SgdHyper h;
    h.epochs = (int)c.get_int_or("sgd.epochs", h.epochs);
    h.batches = (int)c.get_int_or("sgd.batches", h.batches);
    h.lr = c.get_double_or("sgd.lr", h.lr);
    h.n_test = c.get_int_or("sgd.n_test", h.n_test);
    h.eval_every = (int)c.get_int_or("sgd.eval_every", h.eval_every);
    return h;
}

int cmd_kernels(const GlobalOpts& g, const std::string& activation,
                const std::string& grid_spec, const std::string& out_name) {
    auto act = activation_by_name(activation);
    KernelProfile prof(act);
    auto out = open_out(g, out_name);
    if (prof.info_exponent() >= 3)
        out << "# lambda_sigma=" << prof.lambda_sigma()
            << " q_sigma=" << prof.q_sigma() << "\n";
    out << "x_or_lambda,g,g_prime,m_sigma\n";
    for (double x : parse_lin_grid(grid_spec)) {
        double gx = std::abs(x) <= 1 ? prof.g(x) : std::nan("");
        double gp = x >= 0 && x <= 1 ? prof.g_prime(x) : std::nan("");
        out << x << "," << gx << "," << gp << "," << prof.m_sigma(std::max(0.0, x))
            << "\n";
    }
    return 0;
}

int cmd_theory(const GlobalOpts& g, const std::string& config_path,
               const std::string& sweep, const std::string& out_name,
               bool emit_overlaps, bool seed_set) {
    Config c = load_config(config_path, RunKind::theory, g, seed_set);
    ModelConfig model = model_from_config(c);
    std::vector<long long> ns;
    if (!sweep.empty()) {
        std::string spec = sweep;
        if (spec.rfind("n=", 0) == 0) spec.erase(0, 2);
        ns = parse_log_grid(spec);
    } else {
        ns.push_back(model.n);
    }
    auto out = open_out(g, out_name);
    out << "n,n_over_kd,epsilon,k_c";
    if (emit_overlaps)
        for (int i = 1; i <= model.k; ++i) out << ",q_" << i;
    out << "\n";
    for (long long n : ns) {
        model.n = n;
        auto sol = solve_fixed_point(model);
        out << n << "," << double(n) / (double(model.k) * model.d) << ","
            << sol.epsilon << "," << sol.k_c;
        if (emit_overlaps)
            for (double q : sol.q) out << "," << q;
        out << "\n";
    }
    return 0;
}

int cmd_asymptotics(const GlobalOpts& g, const std::string& mode,
                    double alpha, double gamma, double delta, double beta,
                    const std::string& activation, const std::string& out_name) {
    InterpolationRegime regime{alpha, gamma, delta, beta, "powerlaw"};
    auto out = open_out(g, out_name);
    if (mode == "table") {
        out << "readout,beta,eps_rate,k_c_rate\n";
        for (const auto& [kind, b] :
             std::vector<std::pair<std::string, double>>{{"dense", 0.0},
                                                         {"powerlaw", 0.3},
                                                         {"powerlaw", 0.5},
                                                         {"powerlaw", 1.0},
                                                         {"exponential", 0.0},
                                                         {"ultrasparse", 0.0}}) {
            InterpolationRegime r = regime;
            r.readout_kind = kind;
            r.beta = b;
            auto rates = near_interpolation_table(r);
            out << kind << "," << b << "," << rates.eps_rate << ","
                << rates.k_c_rate << "\n";
        }
        return 0;
    }
    KernelProfile prof(activation_by_name(activation));
    if (mode == "dense-limit") {
        auto dist = DiscreteDist::uniform(0.5, std::sqrt(13.0) / 2.0, 2001);
        auto limit = dense_limit_solve(prof, dist, regime);
        out << "v,Q,epsilon\n";
        for (size_t i = 0; i < dist.value.size(); i += 100)
            out << dist.value[i] << "," << limit.Q(dist.value[i]) << ","
                << limit.epsilon << "\n";
    } else if (mode == "profile") {
        regime.validate();
        out << "x,phi\n";
        for (int i = 1; i <= 99; ++i)
            out << i / 100.0 << ","
                << limiting_profile(prof, beta, i / 100.0) << "\n";
    } else if (mode == "constants") {
        regime.validate();
        auto limit = powerlaw_limit_constants(prof, beta, regime);
        out << "z_beta,k_c_bar,eps_bar,alpha_star\n";
        out << limit.z_beta << "," << limit.k_c_bar << "," << limit.eps_bar
            << "," << limit.alpha_star << "\n";
    } else {
        throw ConfigError({"unknown asymptotics mode: " + mode});
    }
    return 0;
}

int cmd_mc(const GlobalOpts& g, const std::string& experiment,
           const std::string& config_path, int chains,
           const std::string& out_name, bool seed_set) {
    RunKind kind = experiment == "glm" ? RunKind::mc_glm : RunKind::mc_full;
    Config c = load_config(config_path, kind, g, seed_set);
    HmcParams params = hmc_from_config(c);
    std::uint64_t seed = (std::uint64_t)c.get_int("seed");
    auto out = open_out(g, out_name);

    if (experiment == "glm") {
        auto act = activation_by_name(c.get("activation"));
        out << "chain,overlap,std_error,accept_rate\n";
        for (int chain = 0; chain < chains; ++chain) {
            auto res = glm_posterior_overlap(act, (int)c.get_int("d"),
                                             c.get_int("n"),
                                             c.get_double("delta"), params,
                                             seed + chain);
            out << chain << "," << res.overlap << "," << res.std_error << ","
                << res.diag.accept_rate << "\n";
        }
        return 0;
    }
    if (experiment != "full" && experiment != "gibbs")
        throw ConfigError({"unknown mc experiment: " + experiment});

    auto teacher = teacher_from_config(c);
    KernelProfile prof(teacher.activation);
    long long n_test = c.get_int_or("mc.n_test", 4000);
    out << "row_kind,chain,feature_index,v_i,overlap_mean,overlap_std\n";
    for (int chain = 0; chain < chains; ++chain) {
        auto data = generate_dataset(teacher, c.get_int("n"),
                                     seed + 101 * (chain + 1));
        PosteriorSampler sampler(teacher, data, params,
                                 seed + 211 * (chain + 1));
        sampler.init_signal(teacher.k());
        sampler.burn_in();
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(teacher.k());
        Eigen::VectorXd sq = sum;
        double gibbs_sum = 0.0;
        int gibbs_count = 0;
        for (int s = 0; s < params.samples; ++s) {
            sampler.step();
            auto rep = overlap_report(teacher.W0, sampler.W());
            sum += rep.diag;
            sq += rep.diag.cwiseAbs2();
            if (experiment == "gibbs" && s % 10 == 0) {
                auto est = gibbs_error(teacher, sampler.W(), teacher.readout,
                                       prof, n_test,
                                       seed + 307 * (chain + 1) + s);
                gibbs_sum += est.gibbs_mc;
                ++gibbs_count;
            }
        }
        double inv = 1.0 / params.samples;
        for (int i = 0; i < teacher.k(); ++i) {
            double m = sum(i) * inv;
            double var = std::max(0.0, sq(i) * inv - m * m);
            out << "feature," << chain << "," << i + 1 << ","
                << teacher.readout.v[i] << "," << m << "," << std::sqrt(var)
                << "\n";
        }
        if (experiment == "gibbs") {
            double gibbs = gibbs_sum / std::max(1, gibbs_count);
            out << "gibbs," << chain << ",,," << gibbs << ",\n";
            out << "bo_estimate," << chain << ",,," << gibbs / 2 << ",\n";
        }
    }
    return 0;
}

int cmd_sgd(const GlobalOpts& g, const std::string& mode,
            const std::string& config_path, const std::string& seeds_spec,
            const std::string& out_name, bool seed_set) {
    Config c = load_config(config_path, RunKind::sgd, g, seed_set);
    SgdHyper hyper = sgd_from_config(c);
    auto teacher = teacher_from_config(c);
    std::vector<std::uint64_t> seeds = parse_list<std::uint64_t>(seeds_spec);
    auto out = open_out(g, out_name);

    if (mode == "train") {
        if (hyper.eval_every <= 0) hyper.eval_every = 50;
        int k_s = (int)c.get_int_or("sgd.width", teacher.k());
        auto data = generate_dataset(teacher, c.get_int("n"), seeds[0]);
        auto report = train_student(teacher, data, k_s, hyper, seeds[0]);
        out << "epoch,train_mse,test_mse\n";
        size_t t = 0;
        for (size_t e = 0; e < report.train_mse.size(); ++e) {
            out << e + 1 << "," << report.train_mse[e] << ",";
            if (t < report.test_epochs.size() &&
                report.test_epochs[t] == (int)(e + 1))
                out << report.test_mse[t++];
            out << "\n";
        }
        return 0;
    }
    if (mode == "width-sweep") {
        auto widths = parse_list<int>(c.get("sweep.widths"));
        auto sweep = width_sweep(teacher, c.get_int("n"), widths, hyper, seeds);
        out << "k_s,test_mse_mean,test_mse_std\n";
        for (const auto& pt : sweep)
            out << (int)pt.x << "," << pt.mean_mse << "," << pt.std_mse << "\n";
        return 0;
    }
    if (mode == "data-sweep") {
        auto ns = parse_list<long long>(c.get("sweep.ns"));
        auto prof = std::make_shared<KernelProfile>(teacher.activation);
        auto sweep = data_sweep(teacher, ns, WidthPolicy::effective, prof, {},
                                hyper, seeds);
        out << "n,test_mse_mean,test_mse_std\n";
        for (const auto& pt : sweep)
            out << (long long)pt.x << "," << pt.mean_mse << "," << pt.std_mse
                << "\n";
        return 0;
    }
    throw ConfigError({"unknown sgd mode: " + mode});
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Teacher-student learning toolkit: fixed-point theory, "
                 "asymptotic limits, posterior sampling, and gradient "
                 "training for one-hidden-layer networks"};
    app.require_subcommand(1);

    GlobalOpts g;
    auto* seed_opt = app.add_option("--seed", g.seed, "master seed");
    app.add_option("--threads", g.threads, "worker threads (Eigen)");
    app.add_option("--out-dir", g.out_dir, "directory for output files");

    auto* kernels = app.add_subcommand("kernels", "activation kernel tables");
    std::string activation = "tanh2-stripped", grid = "0:1:101",
                out_name = "out.csv";
    kernels->add_option("--activation", activation, "activation name");
    kernels->add_option("--grid", grid, "x or lambda grid a:b:steps");
    kernels->add_option("--out", out_name, "output CSV");

    auto* theory = app.add_subcommand("theory", "fixed-point learning curves");
    std::string config_path, sweep;
    bool emit_overlaps = false;
    theory->add_option("--config", config_path, "config file")->required();
    theory->add_option("--sweep", sweep, "n=a:b:steps log sweep");
    theory->add_option("--out", out_name, "output CSV");
    theory->add_flag("--emit-overlaps", emit_overlaps, "append q_1..q_k");

    auto* asym = app.add_subcommand("asymptotics", "limits and rate tables");
    std::string mode = "table";
    double alpha = 1.0, gamma = 0.5, delta = 0.04, beta = 0.75;
    asym->add_option("--mode", mode, "table|dense-limit|profile|constants");
    asym->add_option("--alpha", alpha, "sample ratio n / d^2");
    asym->add_option("--gamma", gamma, "width ratio k / d");
    asym->add_option("--delta", delta, "noise level");
    asym->add_option("--beta", beta, "powerlaw exponent");
    asym->add_option("--activation", activation, "activation name");
    asym->add_option("--out", out_name, "output CSV");

    auto* mc = app.add_subcommand("mc", "posterior sampling experiments");
    std::string experiment = "full";
    int chains = 1;
    mc->add_option("--experiment", experiment, "glm|full|gibbs");
    mc->add_option("--config", config_path, "config file")->required();
    mc->add_option("--chains", chains, "independent chains");
    mc->add_option("--out", out_name, "output CSV");

    auto* sgd = app.add_subcommand("sgd", "student network training");
    std::string sgd_mode = "train", seeds_spec = "1";
    sgd->add_option("--mode", sgd_mode, "train|width-sweep|data-sweep");
    sgd->add_option("--config", config_path, "config file")->required();
    sgd->add_option("--seeds", seeds_spec, "comma-separated run seeds");
    sgd->add_option("--out", out_name, "output CSV");

    auto* repro = app.add_subcommand("reproduce", "figure recipes");
    std::string fig;
    double scale = 0.5;
    int runs = 5;
    repro->add_option("--figure", fig, "recipe name")->required();
    repro->add_option("--scale", scale, "size multiplier vs reference");
    repro->add_option("--runs", runs, "independent repetitions");

    CLI11_PARSE(app, argc, argv);
    Eigen::setNbThreads(std::max(1, g.threads));
    bool seed_set = seed_opt->count() > 0;

    try {
        if (*kernels) return cmd_kernels(g, activation, grid, out_name);
        if (*theory)
            return cmd_theory(g, config_path, sweep, out_name, emit_overlaps,
                              seed_set);
        if (*asym)
            return cmd_asymptotics(g, mode, alpha, gamma, delta, beta,
                                   activation, out_name);
        if (*mc)
            return cmd_mc(g, experiment, config_path, chains, out_name,
                          seed_set);
        if (*sgd)
            return cmd_sgd(g, sgd_mode, config_path, seeds_spec, out_name,
                           seed_set);
        if (*repro) {
            FigureRecipe recipe;
            recipe.name = fig;
            recipe.scale = scale;
            recipe.runs = runs;
            std::string manifest = run_recipe(recipe, g.out_dir, g.seed);
            std::cout << manifest << "\n";
            return 0;
        }
    } catch (const sll::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
