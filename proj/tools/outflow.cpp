#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "outflow/commands.hpp"
#include "outflow/config.hpp"
#include "outflow/errors.hpp"

namespace {

enum ExitCode { Ok = 0, ConfigFailure = 1, PhysicsFailure = 2, NumericalFailure = 3 };

struct Flags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    bool sweep_regimes = false;
    std::optional<double> y10, eps, L;
    std::optional<std::size_t> N;
};

int run(const std::string& command, const Flags& f)
{
    using namespace outflow;
    config::RunConfig cfg = f.config.empty() ? config::parse_config({{"far_field", nlohmann::json::object()}})
                                             : config::load_config(f.config);
    if (!f.out.empty()) {
        cfg.output.dir = f.out;
    }
    if (f.seed) {
        cfg.perturbation.seed = *f.seed;
    }
    if (f.threads) {
        cfg.sweep.threads = std::max<std::size_t>(1, *f.threads);
    }
    if (f.y10) {
        cfg.stationary.y10 = *f.y10;
    }
    if (f.eps) {
        cfg.stationary.eps = *f.eps;
    }
    if (f.L) {
        cfg.stationary.L = *f.L;
    }
    if (f.N) {
        cfg.stationary.N = *f.N;
    }
    // Overrides go through the same validation as the file.
    cfg = config::parse_config(config::to_json(cfg));

    commands::Options options;
    options.sweep_regimes = f.sweep_regimes;
    const commands::Outcome outcome = commands::dispatch(command, cfg, options);
    for (const auto& c : outcome.checks) {
        std::printf("%s  %s%s%s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.empty() ? "" : "  ",
                    c.detail.c_str());
    }
    std::printf("artifacts in %s\n", cfg.output.dir.c_str());
    return outcome.passed() ? Ok : NumericalFailure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Stationary boundary layers and their stability for the 1-D outflow problem"};
    app.require_subcommand(1);
    Flags f;
    auto common = [&f](CLI::App* sub) {
        sub->add_option("--config", f.config, "JSON run configuration");
        sub->add_option("--out", f.out, "output directory");
        sub->add_option("--seed", f.seed, "seed for perturbation phases");
        sub->add_option("--threads", f.threads, "worker threads for sweep");
    };
    for (const std::string& name : outflow::commands::names()) {
        CLI::App* sub = app.add_subcommand(name);
        common(sub);
        if (name == "stationary") {
            sub->add_flag("--sweep-regimes", f.sweep_regimes, "classify the regime over the configured Mach range");
            sub->add_option("--y10", f.y10, "transonic center-manifold seed");
            sub->add_option("--eps", f.eps, "non-degenerate seed amplitude");
            sub->add_option("--L", f.L, "domain length");
            sub->add_option("--N", f.N, "number of cells");
        }
    }
    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, f);
    } catch (const outflow::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ConfigFailure;
    } catch (const outflow::AdmissibilityError& e) {
        std::cerr << "inadmissible: " << e.what() << '\n';
        return PhysicsFailure;
    } catch (const outflow::RegimeError& e) {
        std::cerr << "regime error: " << e.what() << '\n';
        return PhysicsFailure;
    } catch (const outflow::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return PhysicsFailure;
    } catch (const outflow::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return NumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return NumericalFailure;
    }
}
