#include <cmath>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "outflow/commands.hpp"
#include "outflow/config.hpp"

using namespace outflow;
using nlohmann::json;

TEST_CASE("minimal config gets every default")
{
    const config::RunConfig cfg = config::parse_config({{"far_field", json::object()}});
    const json out = config::to_json(cfg);
    CHECK(out["gas"]["closure"] == "ideal-polytropic");
    CHECK(out["gas"]["params"]["gamma"] == 1.4);
    CHECK(out["far_field"]["mach_target"] == 1.0);
    CHECK(out["transient"]["cfl"] == 0.4);
    CHECK(out["transient"]["far_field_mode"] == "dirichlet");
    CHECK(out["stationary"]["N"] == 2048);
    CHECK(out["perturbation"]["shape"] == "gaussian-bump");
    for (const char* section :
         {"gas", "far_field", "physics", "stationary", "transient", "perturbation", "regime_sweep", "sweep", "output"}) {
        CHECK(out.contains(section));
    }
}

TEST_CASE("resolved config round trip")
{
    json doc = {{"gas", {{"closure", "ideal-polytropic"}, {"params", {{"gamma", 1.3}}}}},
                {"far_field", {{"v_plus", 1.2}, {"theta_plus", 0.9}, {"u_plus", -0.7}}},
                {"transient", {{"cfl", 0.3}, {"convection", "upwind2"}}},
                {"perturbation", {{"shape", "decaying-wave"}, {"seed", 4}}}};
    const json once = config::to_json(config::parse_config(doc));
    const json twice = config::to_json(config::parse_config(once));
    CHECK(once == twice);
}

TEST_CASE("positive far-field velocity is rejected")
{
    CHECK_THROWS_AS(config::parse_config({{"far_field", {{"u_plus", 0.5}}}}), AdmissibilityError);
    try {
        config::parse_config({{"far_field", {{"u_plus", 0.5}}}});
    } catch (const AdmissibilityError& e) {
        CHECK(std::string(e.what()).find("no stationary solution") != std::string::npos);
    }
}

TEST_CASE("mach target resolves to minus the sound speed")
{
    const config::RunConfig cfg = config::parse_config({{"far_field", {{"mach_target", 1.0}, {"theta_plus", 1.7}}}});
    const auto far = cfg.far_field_spec();
    CHECK(far.u_plus() == doctest::Approx(-std::sqrt(1.4 * 1.7)).epsilon(1e-12));
}

TEST_CASE("schema violations")
{
    CHECK_THROWS_AS(config::parse_config({{"far_field", json::object()}, {"extra", 1}}), ConfigError);
    CHECK_THROWS_AS(config::parse_config({{"far_field", {{"vplus", 1.0}}}}), ConfigError);
    CHECK_THROWS_AS(config::parse_config(json::object()), ConfigError);
    CHECK_THROWS_AS(config::parse_config({{"far_field", {{"u_plus", -1.0}, {"mach_target", 1.0}}}}), ConfigError);
    CHECK_THROWS_AS(config::parse_config({{"far_field", {{"v_plus", "one"}}}}), ConfigError);
    CHECK_THROWS_AS(config::parse_config({{"far_field", json::object()}, {"transient", {{"cfl", 0.9}}}}), ConfigError);
    CHECK_THROWS_AS(config::parse_config({{"far_field", json::object()}, {"stationary", {{"N", -3}}}}), ConfigError);
    CHECK_THROWS_AS(config::parse_config({{"far_field", json::object()}, {"gas", {{"closure", "plasma"}}}}),
                    ConfigError);
    CHECK_THROWS_AS(config::load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("malformed file")
{
    const auto path = std::filesystem::temp_directory_path() / "outflow_malformed.json";
    std::ofstream(path) << "{ \"far_field\": ";
    CHECK_THROWS_AS(config::load_config(path.string()), ConfigError);
    std::filesystem::remove(path);
}

TEST_CASE("analyze-eos on the ideal gas passes every check")
{
    config::RunConfig cfg = config::parse_config({{"far_field", json::object()}});
    cfg.output.dir = (std::filesystem::temp_directory_path() / "outflow_eos_cmd").string();
    const commands::Outcome o = commands::dispatch("analyze-eos", cfg);
    CHECK(o.passed());
    CHECK(std::filesystem::exists(std::filesystem::path(cfg.output.dir) / "eos_report.json"));
    CHECK(std::filesystem::exists(std::filesystem::path(cfg.output.dir) / "resolved_config.json"));
}

TEST_CASE("stationary with y10 = 0 writes a constant profile")
{
    config::RunConfig cfg = config::parse_config({{"far_field", json::object()}, {"stationary", {{"y10", 0.0}}}});
    cfg.output.dir = (std::filesystem::temp_directory_path() / "outflow_flat_cmd").string();
    const commands::Outcome o = commands::dispatch("stationary", cfg);
    CHECK(o.passed());
    std::ifstream in(std::filesystem::path(cfg.output.dir) / "profile.json");
    const json header = json::parse(in);
    CHECK(header["residuals"]["mass_residual"] == 0.0);
    CHECK(header["residuals"]["momentum_residual"] == 0.0);
    CHECK(header["residuals"]["energy_residual"] == 0.0);
}

TEST_CASE("unknown command")
{
    const config::RunConfig cfg = config::parse_config({{"far_field", json::object()}});
    CHECK_THROWS_AS(commands::dispatch("plot", cfg), ConfigError);
}
