#pragma once

#include <gpreli/kernels.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gpreli {

// Fully resolved experiment configuration (every field concrete).
struct ExperimentConfig {
    KernelSpec kernel;               // default Matérn, nu = 3.5, d = 1
    std::vector<int> n_list;         // default 40, 60, ..., 400
    int eval_count = 500;            // first eval_count Halton points
    double jitter = 1e-8;
    double beta = 0.05;
    double p = 4.0;
    double noise_sd = 0.0;           // sigma_eps; 0 for the deterministic case
    std::vector<double> alpha_list;  // mu_hat = mu_c * n^alpha per alpha
    double mu_c = -1.0;              // < 0 means "default to noise_sd^2"
    int replicates = 50;
    std::uint64_t master_seed = 11ULL;
    int norm_grid_points = 1000;     // grid size for the reference norm constant
    double witness_amplitude = 0.15; // stochastic test-function amplitude

    double resolved_mu_c() const { return mu_c >= 0.0 ? mu_c : noise_sd * noise_sd; }
    void validate() const; // throws config_error / parameter_error
};

// Parsed-but-unresolved configuration: present keys only. Lets experiment
// profiles fill different defaults for keys the file does not mention.
struct RawConfig {
    std::optional<std::string> family;
    std::optional<double> nu;
    std::optional<int> dim;
    std::optional<double> kappa;
    std::optional<double> mu_gw;
    std::optional<std::vector<int>> n_list;
    std::optional<int> eval_count;
    std::optional<double> jitter;
    std::optional<double> beta;
    std::optional<double> p;
    std::optional<double> noise_sd;
    std::optional<std::vector<double>> alpha_list;
    std::optional<double> mu_c;
    std::optional<int> replicates;
    std::optional<std::uint64_t> master_seed;
    std::optional<int> norm_grid_points;
    std::optional<double> witness_amplitude;
};

enum class ExperimentProfile { Deterministic, Stochastic, GpBaseline };

// Strict JSON parse: unknown keys and wrong value types are config_errors
// naming the key. An empty file object is valid (all defaults).
RawConfig parse_config_json(const std::string& json_text);
RawConfig load_raw_config(const std::filesystem::path& path);

// Applies base defaults, then profile defaults (stochastic: nu=2.5,
// noise_sd=0.1, n_list={100,200,400,800}, alpha_list={0, d/(2nu+d), 0.5, 0.8};
// gp-baseline: n_list={50,100,200}, replicates=200) for keys absent from raw,
// then validates.
ExperimentConfig resolve_config(const RawConfig& raw, ExperimentProfile profile);

// load + resolve with the base (deterministic) profile, per the documented
// key list; equivalent to resolve_config(load_raw_config(path), Deterministic).
ExperimentConfig load_config(const std::filesystem::path& path);

// Deterministic JSON serialization of a resolved config (sorted keys).
std::string config_to_json(const ExperimentConfig& config);
void save_config_json(const ExperimentConfig& config, const std::filesystem::path& path);

} // namespace gpreli
