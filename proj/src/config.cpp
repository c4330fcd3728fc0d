#include "sll/config.hpp"

#include "sll/activation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sll {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "activation", "k",            "d",            "n",
        "delta",      "readout.kind", "readout.beta", "readout.rate",
        "readout.p",  "seed",         "sgd.epochs",   "sgd.batches",
        "sgd.lr",     "sgd.width",    "sgd.n_test",   "sgd.eval_every",
        "mc.burn_in", "mc.samples",   "mc.steps",     "mc.step_size",
        "mc.n_test",  "sweep.widths", "sweep.ns",
    };
    return keys;
}

} // namespace

bool Config::has(const std::string& key) const { return kv.count(key) > 0; }

std::string Config::get(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end())
        throw ConfigError({"missing config key: " + key});
    return it->second;
}

std::string Config::get_or(const std::string& key,
                           const std::string& fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string raw = get(key);
    try {
        size_t pos = 0;
        double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ConfigError({"key " + key + ": not a number: " + raw});
    }
}

double Config::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key) const {
    const std::string raw = get(key);
    try {
        size_t pos = 0;
        long long v = std::stoll(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ConfigError({"key " + key + ": not an integer: " + raw});
    }
}

long long Config::get_int_or(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

void Config::set(const std::string& key, const std::string& value) {
    kv[key] = value;
}

Config parse_config_text(const std::string& text) {
    Config config;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<std::string> errors;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) +
                             ": expected key=value, got: " + line);
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            errors.push_back("line " + std::to_string(lineno) + ": empty key");
        else
            config.kv[key] = value;
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return config;
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError({"cannot read config file: " + path});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string emit_config(const Config& config) {
    std::ostringstream out;
    for (const auto& [key, value] : config.kv) out << key << "=" << value << "\n";
    return out.str();
}

std::string config_hash(const Config& config) {
    const std::string text = emit_config(config);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

void apply_env_overrides(Config& config) {
    for (const std::string& key : known_keys()) {
        std::string env = "SLL_";
        for (char c : key)
            env += c == '.' ? '_' : char(std::toupper((unsigned char)c));
        if (const char* value = std::getenv(env.c_str()))
            config.kv[key] = value;
    }
}

ConfigError::ConfigError(std::vector<std::string> errs)
    : std::runtime_error(errs.empty() ? "config error"
                                      : [&errs] {
                                            std::string m = "config error:";
                                            for (const auto& e : errs)
                                                m += "\n  " + e;
                                            return m;
                                        }()),
      errors(std::move(errs)) {}

ValidatedConfig validate_config(const Config& config, RunKind kind) {
    ValidatedConfig out;
    Config& c = out.normalized;
    c = config;
    std::vector<std::string> errors;

    for (const auto& [key, value] : c.kv)
        if (std::find(known_keys().begin(), known_keys().end(), key) ==
            known_keys().end())
            errors.push_back("unknown config key: " + key);

    if (!c.has("activation")) c.set("activation", "tanh2");
    if (!c.has("seed")) c.set("seed", "1");
    if (!c.has("readout.kind")) c.set("readout.kind", "powerlaw");

    std::string act_name = c.get("activation");
    bool act_ok = true;
    try {
        activation_by_name(act_name);
    } catch (const std::exception& e) {
        errors.push_back(std::string("activation: ") + e.what());
        act_ok = false;
    }

    const bool needs_model = kind != RunKind::kernels && kind != RunKind::asymptotics;
    const bool needs_width = kind == RunKind::theory || kind == RunKind::mc_full ||
                             kind == RunKind::sgd;

    if (needs_model) {
        // Delta has no safe default: silently noiseless runs mask mistakes.
        if (!c.has("delta"))
            errors.push_back("missing key delta (no default; the noise level "
                             "must be explicit)");
        else if (c.get_double("delta") < 0)
            errors.push_back("delta must be nonnegative");
        long long d = 0, n = 0;
        if (!c.has("d"))
            errors.push_back("missing key d");
        else if ((d = c.get_int("d")) < 1)
            errors.push_back("d must be >= 1");
        if (!c.has("n"))
            errors.push_back("missing key n");
        else if ((n = c.get_int("n")) < 1)
            errors.push_back("n must be >= 1");
        if (needs_width) {
            if (!c.has("k"))
                errors.push_back("missing key k");
            else {
                long long k = c.get_int("k");
                if (k < 1) errors.push_back("k must be >= 1");
                if (d > 0 && k > d)
                    errors.push_back("H3: k = " + std::to_string(k) + " exceeds d = " +
                                     std::to_string(d) +
                                     " (orthonormal feature rows need k <= d)");
            }
        } else {
            c.set("k", "1");
        }
        if (d > 0 && n > 0 && n <= d)
            out.warnings.push_back("H1: n = " + std::to_string(n) +
                                   " <= d = " + std::to_string(d) +
                                   "; the theory assumes n >> d");
    }

    if (needs_width && c.has("k")) {
        std::string kind_name = c.get("readout.kind");
        if (kind_name != "dense" && kind_name != "powerlaw" &&
            kind_name != "exponential" && kind_name != "ultrasparse")
            errors.push_back("H2: unknown readout.kind: " + kind_name);
        if (kind_name == "powerlaw" && !c.has("readout.beta"))
            c.set("readout.beta", "1");
        if (kind_name == "exponential" && !c.has("readout.rate"))
            c.set("readout.rate", "1");
        if (kind_name == "ultrasparse" && !c.has("readout.p"))
            c.set("readout.p", "1");
        if (c.has("readout.beta") && c.get_double("readout.beta") < 0)
            errors.push_back("H2: readout.beta must be nonnegative");
        if (c.has("readout.rate") && c.get_double("readout.rate") <= 0)
            errors.push_back("H2: readout.rate must be positive");
        if (c.has("readout.p") && c.get_int("readout.p") < 1)
            errors.push_back("H2: readout.p must be >= 1");
    }

    // The fixed-point theory needs a centered activation with no linear or
    // quadratic component; stripping removes mu_0 and mu_1 but not mu_2.
    if (kind == RunKind::theory && act_ok) {
        Activation base = activation_by_name(act_name);
        double mu2 = hermite_coeff(base, 2);
        if (std::abs(mu2) > 1e-8)
            errors.push_back("H4: activation " + act_name +
                             " has a quadratic component (mu_2 = " +
                             std::to_string(mu2) +
                             "); use an odd activation for theory runs");
        else if (act_name.find("-stripped") == std::string::npos)
            c.set("activation", act_name + "-stripped");
    }

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return out;
}

ValidatedConfig validate_config_file(const std::string& path, RunKind kind) {
    return validate_config(parse_config_file(path), kind);
}

Readout readout_from_config(const Config& config) {
    return make_readout(config.get_or("readout.kind", "powerlaw"),
                        (int)config.get_int("k"),
                        config.get_double_or("readout.beta", 1.0),
                        config.get_double_or("readout.rate", 1.0),
                        (int)config.get_int_or("readout.p", 1),
                        (std::uint64_t)config.get_int_or("seed", 1));
}

ModelConfig model_from_config(const Config& config) {
    ModelConfig model;
    model.k = (int)config.get_int("k");
    model.d = (int)config.get_int("d");
    model.n = config.get_int("n");
    model.delta = config.get_double("delta");
    model.readout = readout_from_config(config);
    model.profile = std::make_shared<KernelProfile>(
        activation_by_name(config.get("activation")));
    return model;
}

TeacherInstance teacher_from_config(const Config& config) {
    return make_teacher((int)config.get_int("k"), (int)config.get_int("d"),
                        readout_from_config(config),
                        activation_by_name(config.get("activation")),
                        config.get_double("delta"),
                        (std::uint64_t)config.get_int_or("seed", 1));
}

} // namespace sll
