#include <gpreli/config.hpp>
#include <gpreli/error.hpp>

#include "test_support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

using gpreli::ExperimentConfig;
using gpreli::ExperimentProfile;
using gpreli::KernelFamily;
using gpreli::RawConfig;

namespace {

ExperimentConfig from_text(const std::string& text,
                           ExperimentProfile profile = ExperimentProfile::Deterministic) {
    return gpreli::resolve_config(gpreli::parse_config_json(text), profile);
}

} // namespace

TEST_CASE("empty object resolves to the full default configuration") {
    const ExperimentConfig cfg = from_text("{}");
    CHECK(cfg.kernel.family == KernelFamily::Matern);
    CHECK(cfg.kernel.nu == 3.5);
    CHECK(cfg.kernel.dim == 1);
    CHECK(cfg.beta == 0.05);
    CHECK(cfg.p == 4.0);
    CHECK(cfg.jitter == 1e-8);
    CHECK(cfg.eval_count == 500);
    CHECK(cfg.noise_sd == 0.0);
    CHECK(cfg.replicates == 50);
    CHECK(cfg.master_seed == 11);
    CHECK(cfg.norm_grid_points == 1000);
    CHECK(cfg.witness_amplitude == 0.15);
    REQUIRE(cfg.n_list.size() == 19);
    CHECK(cfg.n_list.front() == 40);
    CHECK(cfg.n_list.back() == 400);
    CHECK(cfg.n_list[1] - cfg.n_list[0] == 20);
}

TEST_CASE("malformed and invalid configs raise config errors naming the key") {
    CHECK_THROWS_AS(from_text("{"), gpreli::config_error);
    CHECK_THROWS_AS(from_text("[]"), gpreli::config_error);
    CHECK_THROWS_AS(from_text("{\"beta\": 1.5}"), gpreli::config_error);
    CHECK_THROWS_AS(from_text("{\"beta\": 0}"), gpreli::config_error);
    CHECK_THROWS_AS(from_text("{\"nu\": \"big\"}"), gpreli::config_error);
    CHECK_THROWS_AS(from_text("{\"n_list\": [40, 40]}"), gpreli::config_error);
    CHECK_THROWS_AS(from_text("{\"n_list\": []}"), gpreli::config_error);
    CHECK_THROWS_AS(from_text("{\"replicates\": 0}"), gpreli::config_error);
    CHECK_THROWS_AS(from_text("{\"master_seed\": -4}"), gpreli::config_error);
    CHECK_THROWS_AS(from_text("{\"mu_c\": 0}"), gpreli::config_error);
    CHECK_THROWS_AS(from_text("{\"alpha_list\": [0.5, 1.0]}"), gpreli::config_error);
    CHECK_THROWS_AS(from_text("{\"witness_amplitude\": 0}"), gpreli::config_error);

    try {
        from_text("{\"betta\": 0.1}");
        FAIL("unknown key accepted");
    } catch (const gpreli::config_error& e) {
        CHECK(std::string(e.what()).find("betta") != std::string::npos);
    }
}

TEST_CASE("nu <= d/2 is rejected at resolve time") {
    CHECK_THROWS_AS(from_text("{\"nu\": 0.4, \"dim\": 1}"), gpreli::parameter_error);
}

TEST_CASE("config JSON round-trips exactly") {
    const std::string text =
        "{\"family\": \"matern\", \"nu\": 2.5, \"dim\": 1,"
        " \"n_list\": [50, 100, 150], \"eval_count\": 123, \"jitter\": 1e-9,"
        " \"beta\": 0.1, \"p\": 6, \"noise_sd\": 0.25,"
        " \"alpha_list\": [0, 0.25], \"mu_c\": 0.5, \"replicates\": 7,"
        " \"master_seed\": 987654321, \"norm_grid_points\": 400,"
        " \"witness_amplitude\": 0.2}";
    const ExperimentConfig cfg = from_text(text);
    const std::string serialized = gpreli::config_to_json(cfg);
    const ExperimentConfig again = from_text(serialized);

    CHECK(again.kernel.nu == cfg.kernel.nu);
    CHECK(again.n_list == cfg.n_list);
    CHECK(again.eval_count == cfg.eval_count);
    CHECK(again.jitter == cfg.jitter);
    CHECK(again.beta == cfg.beta);
    CHECK(again.p == cfg.p);
    CHECK(again.noise_sd == cfg.noise_sd);
    CHECK(again.alpha_list == cfg.alpha_list);
    CHECK(again.mu_c == cfg.mu_c);
    CHECK(again.replicates == cfg.replicates);
    CHECK(again.master_seed == cfg.master_seed);
    CHECK(again.norm_grid_points == cfg.norm_grid_points);
    CHECK(again.witness_amplitude == cfg.witness_amplitude);
    // Serialization is a fixed point: save(load(save(cfg))) == save(cfg).
    CHECK(gpreli::config_to_json(again) == serialized);
}

TEST_CASE("save and load through files") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "gpreli_test_config.json";
    const ExperimentConfig cfg = from_text("{\"nu\": 1.5, \"eval_count\": 64}");
    gpreli::save_config_json(cfg, path);
    const ExperimentConfig loaded = gpreli::load_config(path);
    CHECK(loaded.kernel.nu == 1.5);
    CHECK(loaded.eval_count == 64);
    fs::remove(path);

    CHECK_THROWS_AS(gpreli::load_config(fs::temp_directory_path() / "gpreli_no_such.json"),
                    gpreli::io_error);
}

TEST_CASE("stochastic profile defaults") {
    const ExperimentConfig cfg = from_text("{}", ExperimentProfile::Stochastic);
    CHECK(cfg.kernel.nu == 2.5);
    CHECK(cfg.noise_sd == 0.1);
    CHECK(cfg.replicates == 50);
    CHECK(cfg.n_list == std::vector<int>{100, 200, 400, 800});
    REQUIRE(cfg.alpha_list.size() == 4);
    CHECK(cfg.alpha_list[0] == 0.0);
    // alpha* = d/(2 nu + d) = 1/6 for nu = 2.5, d = 1.
    CHECK(cfg.alpha_list[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(cfg.alpha_list[2] == 0.5);
    CHECK(cfg.alpha_list[3] == 0.8);
    // mu_c defaults to noise_sd^2 through the sentinel.
    CHECK(cfg.mu_c < 0.0);
    CHECK(cfg.resolved_mu_c() == doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("stochastic profile recomputes alpha* from an overridden kernel") {
    const ExperimentConfig cfg = from_text("{\"nu\": 1.5}", ExperimentProfile::Stochastic);
    CHECK(cfg.kernel.nu == 1.5);
    CHECK(cfg.alpha_list[1] == doctest::Approx(0.25).epsilon(1e-15)); // 1/(3+1)
}

TEST_CASE("gp-baseline profile defaults") {
    const ExperimentConfig cfg = from_text("{}", ExperimentProfile::GpBaseline);
    CHECK(cfg.n_list == std::vector<int>{50, 100, 200});
    CHECK(cfg.replicates == 200);
    CHECK(cfg.kernel.nu == 3.5);
    CHECK(cfg.noise_sd == 0.0);
}

TEST_CASE("file values override profile defaults") {
    const ExperimentConfig cfg =
        from_text("{\"replicates\": 9, \"n_list\": [60, 120]}", ExperimentProfile::GpBaseline);
    CHECK(cfg.replicates == 9);
    CHECK(cfg.n_list == std::vector<int>{60, 120});
}

TEST_CASE("explicit alpha_list survives the stochastic profile") {
    const ExperimentConfig cfg =
        from_text("{\"alpha_list\": [0.1, 0.2]}", ExperimentProfile::Stochastic);
    CHECK(cfg.alpha_list == std::vector<double>{0.1, 0.2});
}

TEST_CASE("generalized Wendland family is selectable by name") {
    const ExperimentConfig cfg =
        from_text("{\"family\": \"generalized_wendland\", \"kappa\": 1.5, \"mu_gw\": 3.5}");
    CHECK(cfg.kernel.family == KernelFamily::GeneralizedWendland);
    CHECK(cfg.kernel.kappa == 1.5);
    CHECK(cfg.kernel.mu_gw == 3.5);
    CHECK_THROWS_AS(from_text("{\"family\": \"cubic\"}"), gpreli::config_error);
}
