#include <gpreli/config.hpp>

#include <gpreli/csv.hpp>
#include <gpreli/error.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace gpreli {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "family", "nu", "dim", "kappa", "mu_gw",
    "n_list", "eval_count", "jitter", "beta", "p",
    "noise_sd", "alpha_list", "mu_c", "replicates", "master_seed",
    "norm_grid_points", "witness_amplitude",
};

double require_number(const json& j, const std::string& key) {
    if (!j.is_number()) {
        throw config_error("config key '" + key + "' must be a number");
    }
    return j.get<double>();
}

int require_int(const json& j, const std::string& key) {
    if (!j.is_number_integer()) {
        throw config_error("config key '" + key + "' must be an integer");
    }
    return j.get<int>();
}

} // namespace

void ExperimentConfig::validate() const {
    kernel.validate();
    if (n_list.empty()) {
        throw config_error("config: n_list must not be empty");
    }
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 2) {
            throw config_error("config: n_list entries must be >= 2, got " +
                               std::to_string(n_list[i]));
        }
        if (i > 0 && n_list[i] <= n_list[i - 1]) {
            throw config_error("config: n_list must be strictly increasing");
        }
    }
    if (eval_count < 1) {
        throw config_error("config: eval_count must be >= 1, got " +
                           std::to_string(eval_count));
    }
    if (!(jitter >= 0.0) || !std::isfinite(jitter)) {
        throw config_error("config: jitter must be finite and >= 0");
    }
    if (!(beta > 0.0) || !(beta < 1.0)) {
        throw config_error("config: beta must lie in (0,1), got " + std::to_string(beta));
    }
    if (!(p >= 2.0) || !std::isfinite(p)) {
        throw config_error("config: p must be a finite number >= 2, got " + std::to_string(p));
    }
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
        throw config_error("config: noise_sd must be finite and >= 0");
    }
    for (double alpha : alpha_list) {
        if (!(alpha < 1.0)) {
            throw config_error("config: alpha values must be < 1, got " +
                               std::to_string(alpha));
        }
    }
    if (mu_c == 0.0) {
        throw config_error("config: mu_c must be > 0 (or negative for the noise_sd^2 default)");
    }
    if (replicates < 1) {
        throw config_error("config: replicates must be >= 1, got " +
                           std::to_string(replicates));
    }
    if (norm_grid_points < 2) {
        throw config_error("config: norm_grid_points must be >= 2, got " +
                           std::to_string(norm_grid_points));
    }
    if (!(witness_amplitude > 0.0)) {
        throw config_error("config: witness_amplitude must be > 0, got " +
                           std::to_string(witness_amplitude));
    }
}

RawConfig parse_config_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw config_error("config root must be a JSON object");
    }
    for (const auto& item : j.items()) {
        if (kKnownKeys.find(item.key()) == kKnownKeys.end()) {
            throw config_error("unknown config key '" + item.key() + "'");
        }
    }
    RawConfig raw;
    if (j.contains("family")) {
        if (!j["family"].is_string()) {
            throw config_error("config key 'family' must be a string");
        }
        raw.family = j["family"].get<std::string>();
    }
    if (j.contains("nu")) raw.nu = require_number(j["nu"], "nu");
    if (j.contains("dim")) raw.dim = require_int(j["dim"], "dim");
    if (j.contains("kappa")) raw.kappa = require_number(j["kappa"], "kappa");
    if (j.contains("mu_gw")) raw.mu_gw = require_number(j["mu_gw"], "mu_gw");
    if (j.contains("n_list")) {
        if (!j["n_list"].is_array()) {
            throw config_error("config key 'n_list' must be an array of integers");
        }
        std::vector<int> ns;
        for (const auto& entry : j["n_list"]) ns.push_back(require_int(entry, "n_list"));
        raw.n_list = std::move(ns);
    }
    if (j.contains("eval_count")) raw.eval_count = require_int(j["eval_count"], "eval_count");
    if (j.contains("jitter")) raw.jitter = require_number(j["jitter"], "jitter");
    if (j.contains("beta")) raw.beta = require_number(j["beta"], "beta");
    if (j.contains("p")) raw.p = require_number(j["p"], "p");
    if (j.contains("noise_sd")) raw.noise_sd = require_number(j["noise_sd"], "noise_sd");
    if (j.contains("alpha_list")) {
        if (!j["alpha_list"].is_array()) {
            throw config_error("config key 'alpha_list' must be an array of numbers");
        }
        std::vector<double> alphas;
        for (const auto& entry : j["alpha_list"]) {
            alphas.push_back(require_number(entry, "alpha_list"));
        }
        raw.alpha_list = std::move(alphas);
    }
    if (j.contains("mu_c")) raw.mu_c = require_number(j["mu_c"], "mu_c");
    if (j.contains("replicates")) raw.replicates = require_int(j["replicates"], "replicates");
    if (j.contains("master_seed")) {
        const json& seed = j["master_seed"];
        if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
            throw config_error("config key 'master_seed' must be a nonnegative integer");
        }
        if (seed.is_number_integer() && !seed.is_number_unsigned() &&
            seed.get<long long>() < 0) {
            throw config_error("config key 'master_seed' must be a nonnegative integer");
        }
        raw.master_seed = seed.get<std::uint64_t>();
    }
    if (j.contains("norm_grid_points")) {
        raw.norm_grid_points = require_int(j["norm_grid_points"], "norm_grid_points");
    }
    if (j.contains("witness_amplitude")) {
        raw.witness_amplitude = require_number(j["witness_amplitude"], "witness_amplitude");
    }
    return raw;
}

RawConfig load_raw_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

ExperimentConfig resolve_config(const RawConfig& raw, ExperimentProfile profile) {
    ExperimentConfig config; // base defaults from the struct initializers

    // Base default n_list: 40, 60, ..., 400.
    config.n_list.clear();
    for (int n = 40; n <= 400; n += 20) config.n_list.push_back(n);

    // Profile-specific defaults, applied before the file's explicit keys.
    if (profile == ExperimentProfile::Stochastic) {
        config.kernel.nu = 2.5;
        config.noise_sd = 0.1;
        config.n_list = {100, 200, 400, 800};
        config.replicates = 50;
    } else if (profile == ExperimentProfile::GpBaseline) {
        config.n_list = {50, 100, 200};
        config.replicates = 200;
    }

    if (raw.family) {
        if (*raw.family == "matern") {
            config.kernel.family = KernelFamily::Matern;
        } else if (*raw.family == "generalized_wendland") {
            config.kernel.family = KernelFamily::GeneralizedWendland;
        } else {
            throw config_error("config key 'family' must be 'matern' or "
                               "'generalized_wendland', got '" + *raw.family + "'");
        }
    }
    if (raw.nu) config.kernel.nu = *raw.nu;
    if (raw.dim) config.kernel.dim = *raw.dim;
    if (raw.kappa) config.kernel.kappa = *raw.kappa;
    if (raw.mu_gw) config.kernel.mu_gw = *raw.mu_gw;
    if (raw.n_list) config.n_list = *raw.n_list;
    if (raw.eval_count) config.eval_count = *raw.eval_count;
    if (raw.jitter) config.jitter = *raw.jitter;
    if (raw.beta) config.beta = *raw.beta;
    if (raw.p) config.p = *raw.p;
    if (raw.noise_sd) config.noise_sd = *raw.noise_sd;
    if (raw.alpha_list) config.alpha_list = *raw.alpha_list;
    if (raw.mu_c) config.mu_c = *raw.mu_c;
    if (raw.replicates) config.replicates = *raw.replicates;
    if (raw.master_seed) config.master_seed = *raw.master_seed;
    if (raw.norm_grid_points) config.norm_grid_points = *raw.norm_grid_points;
    if (raw.witness_amplitude) config.witness_amplitude = *raw.witness_amplitude;

    // The stochastic alpha default {0, d/(2nu+d), 0.5, 0.8} depends on the
    // resolved kernel, so it is filled last.
    if (profile == ExperimentProfile::Stochastic && !raw.alpha_list) {
        const double alpha_star =
            config.kernel.dim / (2.0 * config.kernel.nu + config.kernel.dim);
        config.alpha_list = {0.0, alpha_star, 0.5, 0.8};
    }

    config.validate();
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    return resolve_config(load_raw_config(path), ExperimentProfile::Deterministic);
}

std::string config_to_json(const ExperimentConfig& config) {
    std::string out = "{\n";
    out += "  \"alpha_list\": [";
    for (std::size_t i = 0; i < config.alpha_list.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_double(config.alpha_list[i]);
    }
    out += "],\n";
    out += "  \"beta\": " + format_double(config.beta) + ",\n";
    out += "  \"dim\": " + std::to_string(config.kernel.dim) + ",\n";
    out += "  \"eval_count\": " + std::to_string(config.eval_count) + ",\n";
    out += std::string("  \"family\": ") +
           (config.kernel.family == KernelFamily::Matern ? "\"matern\""
                                                         : "\"generalized_wendland\"") + ",\n";
    out += "  \"jitter\": " + format_double(config.jitter) + ",\n";
    out += "  \"kappa\": " + format_double(config.kernel.kappa) + ",\n";
    out += "  \"master_seed\": " + std::to_string(config.master_seed) + ",\n";
    out += "  \"mu_c\": " + format_double(config.mu_c) + ",\n";
    out += "  \"mu_gw\": " + format_double(config.kernel.mu_gw) + ",\n";
    out += "  \"n_list\": [";
    for (std::size_t i = 0; i < config.n_list.size(); ++i) {
        if (i > 0) out += ", ";
        out += std::to_string(config.n_list[i]);
    }
    out += "],\n";
    out += "  \"noise_sd\": " + format_double(config.noise_sd) + ",\n";
    out += "  \"norm_grid_points\": " + std::to_string(config.norm_grid_points) + ",\n";
    out += "  \"nu\": " + format_double(config.kernel.nu) + ",\n";
    out += "  \"p\": " + format_double(config.p) + ",\n";
    out += "  \"replicates\": " + std::to_string(config.replicates) + ",\n";
    out += "  \"witness_amplitude\": " + format_double(config.witness_amplitude) + "\n";
    out += "}\n";
    return out;
}

void save_config_json(const ExperimentConfig& config, const std::filesystem::path& path) {
    write_text_file(path, config_to_json(config));
}

} // namespace gpreli
