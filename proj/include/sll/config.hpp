#pragma once

#include "sll/dataset.hpp"
#include "sll/theory.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sll {

// Flat key=value configuration. Keys use dots for grouping (readout.beta);
// '#' starts a comment; whitespace around tokens is ignored.
struct Config {
    std::map<std::string, std::string> kv;

    bool has(const std::string& key) const;
    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int_or(const std::string& key, long long fallback) const;
    void set(const std::string& key, const std::string& value);
};

Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);
// Sorted key=value lines; parse_config_text(emit_config(c)) == c.
std::string emit_config(const Config& config);
// FNV-1a hash of the normalized emission, as 16 hex digits.
std::string config_hash(const Config& config);
// Overrides from environment variables SLL_<KEY> with dots as underscores
// (SLL_READOUT_BETA -> readout.beta). Keys restricted to the known set.
void apply_env_overrides(Config& config);

enum class RunKind { kernels, theory, asymptotics, mc_glm, mc_full, sgd };

struct ConfigError : std::runtime_error {
    std::vector<std::string> errors;
    explicit ConfigError(std::vector<std::string> errs);
};

struct ValidatedConfig {
    Config normalized;
    std::vector<std::string> warnings;
};

// Applies defaults, checks feasibility, labels each failure with the model
// hypothesis it violates (H1 sample regime, H2 readout, H3 features, H4
// activation). Throws ConfigError listing every violation.
ValidatedConfig validate_config(const Config& config, RunKind kind);
ValidatedConfig validate_config_file(const std::string& path, RunKind kind);

// Builders from a validated config.
Readout readout_from_config(const Config& config);
ModelConfig model_from_config(const Config& config);
TeacherInstance teacher_from_config(const Config& config);

struct ExperimentRecord {
    Config config;
    std::string hash;
    std::uint64_t seeds[3] = {0, 0, 0};   // master, dataset, sampler/student
    std::vector<std::string> rows;        // CSV rows, header first
    double seconds = 0.0;
};

} // namespace sll
