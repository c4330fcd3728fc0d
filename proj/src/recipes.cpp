#include "sll/recipes.hpp"

#include "sll/config.hpp"
#include "sll/asymptotics.hpp"
#include "sll/mc.hpp"
#include "sll/sgd.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace sll {

namespace {

using json = nlohmann::json;

struct Column {
    std::string name;
    std::string provenance;   // theory | monte-carlo | sgd
    std::string units;
};

struct Panel {
    std::string file;
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;
};

void write_panel(const std::filesystem::path& dir, const Panel& panel) {
    std::ofstream out(dir / panel.file);
    if (!out)
        throw std::runtime_error("cannot write " + (dir / panel.file).string());
    for (size_t j = 0; j < panel.columns.size(); ++j)
        out << (j ? "," : "") << panel.columns[j].name;
    out << "\n";
    out.precision(12);
    for (const auto& row : panel.rows) {
        for (size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
        out << "\n";
    }
}

int scaled(int reference, double scale) {
    return std::max(1, (int)std::lround(reference * scale));
}

std::vector<long long> log_grid(double lo, double hi, int steps) {
    std::vector<long long> out;
    for (int i = 0; i < steps; ++i) {
        double t = steps == 1 ? 0.0 : double(i) / (steps - 1);
        long long n = (long long)std::llround(lo * std::pow(hi / lo, t));
        if (out.empty() || n > out.back()) out.push_back(n);
    }
    return out;
}

double mean(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
}

double stdev(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean(xs), s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / double(xs.size() - 1));
}

// --- fig1: SGD scaling panels (powerlaw readout, beta = 1) ----------------

ModelConfig fig1_model(double scale, std::shared_ptr<const KernelProfile> prof) {
    ModelConfig m;
    m.k = scaled(100, scale);
    m.d = scaled(200, scale);
    m.delta = 0.01;
    m.readout = make_powerlaw_readout(m.k, 1.0);
    m.profile = std::move(prof);
    return m;
}

SgdHyper fig1_hyper(double scale) {
    SgdHyper hyper;
    hyper.epochs = std::max(60, (int)std::lround(800 * scale));
    hyper.n_test = std::max<long long>(500, (long long)std::lround(4000 * scale));
    hyper.eval_every = 0;
    return hyper;
}

std::vector<int> log_widths(int k) {
    std::vector<int> widths;
    for (int w = 1; w < k; w = std::max(w + 1, (int)std::lround(w * 1.6)))
        widths.push_back(w);
    widths.push_back(k);
    return widths;
}

std::vector<Panel> run_fig1_left(const FigureRecipe& r, std::uint64_t seed) {
    auto act = activation_by_name("tanh2-stripped");
    auto prof = std::make_shared<KernelProfile>(act);
    ModelConfig model = fig1_model(r.scale, prof);
    auto teacher = make_teacher(model.k, model.d, model.readout, act,
                                model.delta, seed);
    long long n = 2ll * model.k * model.d;
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < r.runs; ++i) seeds.push_back(seed + 100 + i);
    SgdHyper hyper = fig1_hyper(r.scale);

    Panel panel{"fig1-left_width_sweep.csv",
                {{"k_s", "sgd", "count"},
                 {"test_mse_mean", "sgd", "mse"},
                 {"test_mse_std", "sgd", "mse"},
                 {"epsilon_theory", "theory", "mse"}},
                {}};
    for (const auto& pt : width_sweep(teacher, n, log_widths(model.k), hyper,
                                      seeds)) {
        // theory error of the width-truncated teacher at the same budget
        ModelConfig reduced = model;
        reduced.k = (int)pt.x;
        reduced.readout.v.resize(reduced.k);
        double tail = 1.0 - std::inner_product(reduced.readout.v.begin(),
                                               reduced.readout.v.end(),
                                               reduced.readout.v.begin(), 0.0);
        reduced.delta += prof->g_at_1() * std::max(0.0, tail);
        reduced.extra_noise = prof->g_at_1() * std::max(0.0, tail);
        reduced.n = n;
        double eps = solve_fixed_point(reduced).epsilon;
        panel.rows.push_back({pt.x, pt.mean_mse, pt.std_mse, eps});
    }
    return {panel};
}

std::vector<Panel> run_fig1_middle(const FigureRecipe& r, std::uint64_t seed) {
    auto act = activation_by_name("tanh2-stripped");
    auto prof = std::make_shared<KernelProfile>(act);
    ModelConfig model = fig1_model(r.scale, prof);
    auto teacher = make_teacher(model.k, model.d, model.readout, act,
                                model.delta, seed);
    auto ns = log_grid(0.25 * model.k * model.d, 4.0 * model.k * model.d, 5);
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < r.runs; ++i) seeds.push_back(seed + 100 + i);
    SgdHyper hyper = fig1_hyper(r.scale);

    auto full = data_sweep(teacher, ns, WidthPolicy::full, prof, {}, hyper,
                           seeds);
    auto eff = data_sweep(teacher, ns, WidthPolicy::effective, prof, {}, hyper,
                          seeds);
    Panel panel{"fig1-middle_data_sweep.csv",
                {{"n", "sgd", "samples"},
                 {"n_over_kd", "sgd", "dimensionless"},
                 {"mse_full_mean", "sgd", "mse"},
                 {"mse_full_std", "sgd", "mse"},
                 {"mse_effective_mean", "sgd", "mse"},
                 {"mse_effective_std", "sgd", "mse"},
                 {"epsilon_theory", "theory", "mse"}},
                {}};
    for (size_t i = 0; i < ns.size(); ++i) {
        ModelConfig at_n = model;
        at_n.n = ns[i];
        double eps = solve_fixed_point(at_n).epsilon;
        panel.rows.push_back({double(ns[i]),
                              double(ns[i]) / (double(model.k) * model.d),
                              full[i].mean_mse, full[i].std_mse,
                              eff[i].mean_mse, eff[i].std_mse, eps});
    }
    return {panel};
}

std::vector<Panel> run_fig1_right(const FigureRecipe& r, std::uint64_t seed) {
    auto act = activation_by_name("tanh2-stripped");
    auto prof = std::make_shared<KernelProfile>(act);
    ModelConfig model = fig1_model(r.scale, prof);
    auto teacher = make_teacher(model.k, model.d, model.readout, act,
                                model.delta, seed);
    auto ns = log_grid(0.25 * model.k * model.d, 4.0 * model.k * model.d, 4);
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < r.runs; ++i) seeds.push_back(seed + 100 + i);
    SgdHyper hyper = fig1_hyper(r.scale);
    auto widths = log_widths(model.k);

    Panel panel{"fig1-right_best_width.csv",
                {{"n", "sgd", "samples"},
                 {"n_over_kd", "sgd", "dimensionless"},
                 {"k_c_theory", "theory", "count"},
                 {"best_width", "sgd", "count"},
                 {"best_mse", "sgd", "mse"}},
                {}};
    for (long long n : ns) {
        ModelConfig at_n = model;
        at_n.n = n;
        int k_c = solve_fixed_point(at_n).k_c;
        auto sweep = width_sweep(teacher, n, widths, hyper, seeds);
        size_t best = 0;
        for (size_t i = 1; i < sweep.size(); ++i)
            if (sweep[i].mean_mse < sweep[best].mean_mse) best = i;
        panel.rows.push_back({double(n), double(n) / (double(model.k) * model.d),
                              double(k_c), sweep[best].x, sweep[best].mean_mse});
    }
    return {panel};
}

// --- fig2: theory vs posterior sampling on the full model -----------------

std::vector<Panel> run_fig2(const FigureRecipe& r, std::uint64_t seed) {
    auto act = activation_by_name("tanh2-stripped");
    auto prof = std::make_shared<KernelProfile>(act);
    ModelConfig model;
    model.k = scaled(100, r.scale);
    model.d = scaled(200, r.scale);
    model.delta = 0.04;
    model.readout = make_powerlaw_readout(model.k, 0.3);
    model.profile = prof;
    double kd = double(model.k) * model.d;
    std::vector<double> ratios = {0.5, 1.0, 2.0, 4.0};

    HmcParams params;
    params.burn_in = std::max(60, (int)std::lround(200 * r.scale));
    params.samples = std::max(40, (int)std::lround(120 * r.scale));

    Panel curve{"fig2_learning_curve.csv",
                {{"n", "theory", "samples"},
                 {"n_over_kd", "theory", "dimensionless"},
                 {"epsilon_theory", "theory", "mse"},
                 {"k_c_theory", "theory", "count"},
                 {"bo_mc", "monte-carlo", "mse"},
                 {"bo_mc_std", "monte-carlo", "mse"}},
                {}};
    Panel profiles{"fig2_overlap_profiles.csv",
                   {{"n_over_kd", "theory", "dimensionless"},
                    {"feature_index", "theory", "count"},
                    {"v_i", "theory", "dimensionless"},
                    {"q_theory", "theory", "dimensionless"},
                    {"overlap_mc", "monte-carlo", "dimensionless"},
                    {"overlap_std", "monte-carlo", "dimensionless"}},
                   {}};

    for (double ratio : ratios) {
        long long n = (long long)std::llround(ratio * kd);
        ModelConfig at_n = model;
        at_n.n = n;
        auto sol = solve_fixed_point(at_n);

        std::vector<double> bo;
        Eigen::MatrixXd overlap_sum = Eigen::MatrixXd::Zero(model.k, r.runs);
        for (int run = 0; run < r.runs; ++run) {
            std::uint64_t run_seed = seed + 1000 * (run + 1);
            auto teacher = make_teacher(model.k, model.d, model.readout, act,
                                        model.delta, run_seed);
            auto data = generate_dataset(teacher, n, run_seed + 1);
            PosteriorSampler sampler(teacher, data, params, run_seed + 2);
            sampler.init_signal(model.k);
            sampler.burn_in();
            double bo_sum = 0.0;
            int n_samples = params.samples;
            for (int s = 0; s < n_samples; ++s) {
                sampler.step();
                auto rep = overlap_report(teacher.W0, sampler.W());
                overlap_sum.col(run) += rep.diag / double(n_samples);
                if (s % 10 == 0) {
                    auto gibbs = gibbs_error(teacher, sampler.W(),
                                             teacher.readout, *prof, 2000,
                                             run_seed + 3 + s);
                    bo_sum += gibbs.bo_estimate;
                }
            }
            bo.push_back(bo_sum / double((n_samples + 9) / 10));
        }
        curve.rows.push_back({double(n), ratio, sol.epsilon, double(sol.k_c),
                              mean(bo), stdev(bo)});
        for (int i = 0; i < model.k; ++i) {
            std::vector<double> per_run(overlap_sum.row(i).begin(),
                                        overlap_sum.row(i).end());
            profiles.rows.push_back({ratio, double(i + 1),
                                     model.readout.v[i], sol.q[i],
                                     mean(per_run), stdev(per_run)});
        }
    }
    return {curve, profiles};
}

// --- fig4: scalar-model phase transition, one panel per activation --------

std::vector<Panel> run_fig4(const FigureRecipe& r, std::uint64_t seed) {
    int d = scaled(1000, r.scale);
    double delta = 40.0;
    HmcParams params;
    params.burn_in = std::max(80, (int)std::lround(250 * r.scale));
    params.samples = std::max(60, (int)std::lround(200 * r.scale));

    std::vector<Panel> panels;
    for (const std::string& name :
         {std::string("tanh2-stripped"), std::string("abs"),
          std::string("relu")}) {
        auto act = activation_by_name(name);
        KernelProfile prof(act);
        double lam_hi = prof.info_exponent() >= 3 ? 2.5 * prof.lambda_sigma()
                                                  : 6.0;
        Panel panel{"fig4_" + name + ".csv",
                    {{"lambda", "theory", "dimensionless"},
                     {"m_sigma_theory", "theory", "dimensionless"},
                     {"overlap_mc", "monte-carlo", "dimensionless"},
                     {"overlap_std", "monte-carlo", "dimensionless"}},
                    {}};
        for (int i = 0; i < 10; ++i) {
            double lam = lam_hi * (i + 1) / 10.0;
            long long n = (long long)std::llround(lam * d * delta);
            std::vector<double> overlaps;
            for (int run = 0; run < r.runs; ++run) {
                auto res = glm_posterior_overlap(act, d, n, delta, params,
                                                 seed + 37 * (run + 1) + i);
                overlaps.push_back(res.overlap);
            }
            panel.rows.push_back({lam, prof.m_sigma(lam), mean(overlaps),
                                  stdev(overlaps)});
        }
        panels.push_back(std::move(panel));
    }
    return panels;
}

// --- fig5: limiting overlap profile vs the finite-size solver -------------

std::vector<Panel> run_fig5(const FigureRecipe& r, std::uint64_t) {
    auto act = activation_by_name("tanh2-stripped");
    auto prof = std::make_shared<KernelProfile>(act);
    double beta = 0.7, alpha = 1.0, gamma = 0.5, delta = 0.04;
    int d = scaled(3200, r.scale);

    ModelConfig model;
    model.d = d;
    model.k = std::max(2, (int)std::lround(gamma * d));
    model.n = (long long)std::llround(alpha * double(d) * d);
    model.delta = delta;
    model.readout = make_powerlaw_readout(model.k, beta);
    model.profile = prof;
    auto sol = solve_fixed_point(model);

    Panel panel{"fig5_overlap_profile.csv",
                {{"x", "theory", "dimensionless"},
                 {"phi_limit", "theory", "dimensionless"},
                 {"q_solver", "theory", "dimensionless"}},
                {}};
    for (int i = 1; i <= 19; ++i) {
        double x = i / 20.0;
        int idx = std::min(sol.k_c - 1,
                           std::max(0, (int)std::floor(x * sol.k_c)));
        panel.rows.push_back({x, limiting_profile(*prof, beta, x),
                              sol.k_c > 0 ? sol.q[idx] : 0.0});
    }
    return {panel};
}

} // namespace

void FigureRecipe::validate() const {
    auto names = recipe_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string known;
        for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
        throw std::invalid_argument("unknown recipe: " + name +
                                    " (known: " + known + ")");
    }
    if (!(scale > 0) || scale > 4)
        throw std::invalid_argument("recipe scale must be in (0, 4]");
    if (runs < 1) throw std::invalid_argument("recipe runs must be >= 1");
}

std::vector<std::string> recipe_names() {
    return {"fig1-left", "fig1-middle", "fig1-right", "fig2", "fig4", "fig5"};
}

FigureRecipe recipe_by_name(const std::string& name) {
    FigureRecipe recipe;
    recipe.name = name;
    recipe.validate();
    return recipe;
}

std::string run_recipe(const FigureRecipe& recipe, const std::string& out_dir,
                       std::uint64_t seed) {
    recipe.validate();
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    auto t0 = std::chrono::steady_clock::now();
    std::vector<Panel> panels;
    if (recipe.name == "fig1-left") panels = run_fig1_left(recipe, seed);
    else if (recipe.name == "fig1-middle") panels = run_fig1_middle(recipe, seed);
    else if (recipe.name == "fig1-right") panels = run_fig1_right(recipe, seed);
    else if (recipe.name == "fig2") panels = run_fig2(recipe, seed);
    else if (recipe.name == "fig4") panels = run_fig4(recipe, seed);
    else panels = run_fig5(recipe, seed);
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    json manifest;
    manifest["recipe"] = recipe.name;
    manifest["scale"] = recipe.scale;
    manifest["runs"] = recipe.runs;
    manifest["seed"] = seed;
    manifest["duration_seconds"] = seconds;
    manifest["files"] = json::array();
    for (const auto& panel : panels) {
        write_panel(dir, panel);
        json file;
        file["path"] = panel.file;
        file["columns"] = json::array();
        for (const auto& col : panel.columns)
            file["columns"].push_back({{"name", col.name},
                                       {"provenance", col.provenance},
                                       {"units", col.units}});
        manifest["files"].push_back(file);
    }
    std::filesystem::path manifest_path = dir / (recipe.name + "_manifest.json");
    std::ofstream out(manifest_path);
    out << manifest.dump(2) << "\n";
    return manifest_path.string();
}

} // namespace sll
