#include "outflow/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "outflow/artifacts.hpp"
#include "outflow/errors.hpp"

namespace outflow::commands {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kMassAuditTolerance = 1e-6;
constexpr double kResidualTolerance = 1e-6;

json number(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

void add(Outcome& o, std::string name, bool passed, std::string detail = {})
{
    o.checks.push_back({std::move(name), passed, std::move(detail)});
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void finish(Outcome& o, const std::string& command, const config::RunConfig& cfg, const fs::path& out)
{
    json checks = json::array();
    for (const auto& c : o.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    o.summary["command"] = command;
    o.summary["passed"] = o.passed();
    o.summary["checks"] = checks;
    artifacts::write_json(out / "resolved_config.json", config::to_json(cfg));
    artifacts::write_json(out / "summary.json", o.summary);
}

harness::StabilityOptions stability_options(const config::RunConfig& cfg)
{
    harness::StabilityOptions o;
    o.reference = cfg.transient.reference;
    o.right_state = cfg.transient.right_state;
    return o;
}

Outcome analyze_eos(config::RunConfig& cfg, const fs::path& out)
{
    Outcome o;
    const stationary::FarFieldSpec far = cfg.far_field_spec();
    const eos::ConditionReport report = eos::check_conditions(far.model(), far.plus_state(), far.u_plus());
    const eos::Partials d = eos::partials(far.model(), far.plus_state());
    const double maxwell = std::abs(d.e_v - (far.theta_plus() * d.p_theta - d.p)) / std::max(1.0, std::abs(d.p));

    json j = {{"closure", far.model().name()},
              {"params", far.model().parameters()},
              {"u_plus", far.u_plus()},
              {"conditions", eos::to_json(report)},
              {"maxwell_residual", number(maxwell)}};
    add(o, "maxwell relation at far field", maxwell < 1e-6, fmt(maxwell));
    add(o, "p_rho > 0 and e_theta > 0", report.basic_ok);
    add(o, "beta conditions", report.beta_ok,
        "beta = (" + fmt(report.beta1) + ", " + fmt(report.beta2) + ", " + fmt(report.beta3) + ")");
    if (report.transonic) {
        add(o, "transonic sign assumptions", report.transonic_extra_ok);
        add(o, "principal minors of A positive", report.minors_ok);
        const harness::QuadraticFormReport qf = harness::quadratic_form_check(report);
        j["quadratic_form"] = harness::to_json(qf);
        add(o, "quadratic form positive on samples", qf.all_samples_positive && qf.sylvester_consistent,
            std::to_string(qf.positive_samples) + "/" + std::to_string(qf.samples));
        add(o, "third minor closed form", qf.minor3_relative_difference < 1e-10, fmt(qf.minor3_relative_difference));
    }
    artifacts::write_json(out / "eos_report.json", j);
    o.summary["results"] = j;
    finish(o, "analyze-eos", cfg, out);
    return o;
}

bool regime_pattern_ok(const stationary::RegimeClass& r)
{
    using stationary::Regime;
    const bool disc = r.discriminant >= r.discriminant_lower_bound * (1.0 - 1e-10);
    switch (r.kind) {
    case Regime::Supersonic:
        return disc && r.det_j > 0 && r.lambda1 < r.lambda2 && r.lambda2 < 0;
    case Regime::Subsonic:
        return disc && r.det_j < 0 && r.lambda1 < 0 && r.lambda2 > 0;
    case Regime::Transonic:
        return disc && std::abs(r.det_j) <= 1e-8 * (std::abs(r.J(0, 0) * r.J(1, 1)) + std::abs(r.J(0, 1) * r.J(1, 0)));
    }
    return false;
}

void profile_checks(Outcome& o, const stationary::StationaryProfile& p, const stationary::ProfileReport& r)
{
    const double scale = std::max(1.0, r.momentum_scale);
    const double residual = std::max({r.mass_residual, r.momentum_residual, r.energy_residual}) / scale;
    add(o, "stationary balances", residual < kResidualTolerance, fmt(residual));
    add(o, "monotone approach to far field", r.monotone);
    if (r.has_tail) {
        add(o, "algebraic decay of v - v+ (slope -1)", std::abs(r.decay_slope_k0 + 1.0) <= 0.1, fmt(r.decay_slope_k0));
        add(o, "algebraic decay of v_x (slope -2)", std::abs(r.decay_slope_k1 + 2.0) <= 0.2, fmt(r.decay_slope_k1));
        add(o, "tail ratios u_x/z^2, theta_x/z^2 settle", r.a1_variation < 0.1 && r.a2_variation < 0.1,
            fmt(r.a1_variation) + ", " + fmt(r.a2_variation));
        add(o, "tail gradients positive", r.tail_gradients_positive);
        add(o, "z two-sided bound", r.z_lower > 0 && std::isfinite(r.z_upper),
            "[" + fmt(r.z_lower) + ", " + fmt(r.z_upper) + "]");
    }
    if (p.regime.kind != stationary::Regime::Transonic && p.seed > 0) {
        const double expected = p.regime.kind == stationary::Regime::Subsonic ? std::abs(p.regime.lambda1)
                                                                                : std::abs(p.regime.lambda2);
        const double rel = std::abs(r.exponential_rate / expected - 1.0);
        add(o, "exponential rate matches stable eigenvalue", rel < 0.05,
            fmt(r.exponential_rate) + " vs " + fmt(expected));
    }
}

Outcome stationary_command(config::RunConfig& cfg, const Options& options, const fs::path& out)
{
    Outcome o;
    if (options.sweep_regimes) {
        const stationary::FarFieldSpec far = cfg.far_field_spec();
        const auto sweep = stationary::regime_sweep(far.model_ptr(), cfg.physics, far.v_plus(), far.theta_plus(),
                                                    cfg.regime_sweep.mach_lo, cfg.regime_sweep.mach_hi,
                                                    cfg.regime_sweep.samples);
        artifacts::write_regime_sweep_csv(out / "regime_sweep.csv", sweep);
        const std::size_t bad = static_cast<std::size_t>(
            std::count_if(sweep.begin(), sweep.end(), [](const auto& r) { return !regime_pattern_ok(r); }));
        add(o, "regime sign and eigenvalue patterns", bad == 0,
            std::to_string(sweep.size() - bad) + "/" + std::to_string(sweep.size()));
    }
    const stationary::StationaryProfile p = build_profile(cfg);
    const stationary::ProfileReport report = stationary::verify_profile(p);
    artifacts::write_profile_csv(out / "profile.csv", p);
    const json header = stationary::profile_header(p, report);
    artifacts::write_json(out / "profile.json", header);
    profile_checks(o, p, report);
    o.summary["results"] = header;
    finish(o, "stationary", cfg, out);
    return o;
}

Outcome simulate_command(config::RunConfig& cfg, const fs::path& out)
{
    Outcome o;
    const stationary::StationaryProfile p = build_profile(cfg);
    const harness::InitialData init = harness::make_initial(p, cfg.perturbation);
    const transient::FlowState reference = harness::profile_state(p);
    transient::SolverConfig sc = cfg.transient.solver;
    sc.keep_snapshots = cfg.output.snapshots;
    const transient::Solver solver(p.far.model_ptr(), harness::profile_grid(p), sc,
                                   harness::profile_boundary(p, cfg.transient.right_state));
    harness::Tracker tracker(p.far.model_ptr(), reference, p.dx(), false);
    const transient::RunResult run = solver.run(init.state, {tracker.observer()});

    if (cfg.output.snapshots) {
        std::vector<transient::FlowState> kept;
        for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
            if (i % cfg.output.snapshot_every == 0 || i + 1 == run.snapshots.size()) {
                kept.push_back(run.snapshots[i]);
            }
        }
        artifacts::write_snapshots_csv(out / "snapshots.csv", solver.grid(), kept);
    }
    artifacts::write_norms_csv(out / "series.csv", tracker.norms(), tracker.energy());

    const double drift = transient::relative_sup_difference(run.final_state, reference);
    const double truncation = std::hypot(p.u.back() - p.far.u_plus(), p.theta.back() - p.far.theta_plus());
    json j = {{"steps", run.steps},
              {"rejected_steps", run.rejected_steps},
              {"dt_min", number(run.dt_min)},
              {"dt_max", number(run.dt_max)},
              {"mass_audit", transient::to_json(run.audit)},
              {"relative_sup_difference_to_profile", number(drift)},
              {"initial_h1_norm", number(init.h1_norm)},
              {"far_field_offset_at_L", number(truncation)},
              {"profile", stationary::to_json(p.regime)}};
    artifacts::write_json(out / "run.json", j);
    add(o, "mass audit", std::abs(run.audit.relative_discrepancy) < kMassAuditTolerance,
        fmt(run.audit.relative_discrepancy));
    o.summary["results"] = j;
    finish(o, "simulate", cfg, out);
    return o;
}

struct StabilitySummary {
    double ratio = 0, apriori = 0, c1_min = 0;
    bool passed = false;
};

Outcome stability_command(config::RunConfig& cfg, const fs::path& out, StabilitySummary* summary = nullptr)
{
    Outcome o;
    const stationary::StationaryProfile p = build_profile(cfg);
    const harness::StabilityResult r =
        harness::run_stability(p, cfg.perturbation, cfg.transient.solver, stability_options(cfg));
    artifacts::write_norms_csv(out / "series.csv", r.norms, r.energy);

    json j = {{"decay", harness::to_json(r.decay)},
              {"apriori_constant", number(r.apriori_constant)},
              {"c1_min", number(r.energy.c1_min)},
              {"c2_max", number(r.energy.c2_max)},
              {"energy_nonnegative", r.energy.energy_nonnegative},
              {"initial_h1_norm", number(r.initial.h1_norm)},
              {"fixed_dt", number(r.fixed_dt)},
              {"steps", r.run.steps},
              {"rejected_steps", r.run.rejected_steps},
              {"mass_audit", transient::to_json(r.run.audit)},
              {"profile", stationary::to_json(p.regime)}};
    artifacts::write_json(out / "stability.json", j);
    add(o, "verdict converging", r.decay.verdict == harness::Verdict::Converging, harness::to_string(r.decay.verdict));
    add(o, "sup envelope reduced below 10%", r.decay.ratio < 0.1, fmt(r.decay.ratio));
    add(o, "energy nonnegative", r.energy.energy_nonnegative);
    add(o, "c1 positive", r.energy.c1_min > 0, fmt(r.energy.c1_min));
    add(o, "mass audit", std::abs(r.run.audit.relative_discrepancy) < kMassAuditTolerance,
        fmt(r.run.audit.relative_discrepancy));
    o.summary["results"] = j;
    finish(o, "stability", cfg, out);
    if (summary) {
        summary->ratio = r.decay.ratio;
        summary->apriori = r.apriori_constant;
        summary->c1_min = r.energy.c1_min;
        summary->passed = o.passed();
    }
    return o;
}

struct SweepTask {
    std::size_t index = 0;
    double mach = 1, scale = 1;
    StabilitySummary result;
    std::string error;
};

// Largest relative deviation from the group mean.
double spread(const std::vector<double>& xs)
{
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double worst = 0;
    for (double x : xs) {
        worst = std::max(worst, std::abs(x / mean - 1.0));
    }
    return worst;
}

Outcome sweep_command(config::RunConfig& cfg, const fs::path& out)
{
    std::vector<SweepTask> tasks;
    for (double m : cfg.sweep.machs) {
        for (double a : cfg.sweep.amplitude_scales) {
            SweepTask t;
            t.index = tasks.size();
            t.mach = m;
            t.scale = a;
            tasks.push_back(t);
        }
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            SweepTask& t = tasks[i];
            config::RunConfig c = cfg;
            c.far_field.u_plus.reset();
            c.far_field.mach_target = t.mach;
            c.perturbation.a_rho *= t.scale;
            c.perturbation.a_u *= t.scale;
            c.perturbation.a_theta *= t.scale;
            char name[32];
            std::snprintf(name, sizeof name, "run_%03zu", t.index);
            const fs::path dir = out / name;
            try {
                artifacts::ensure_dir(dir);
                c.output.dir = dir.string();
                stability_command(c, dir, &t.result);
            } catch (const std::exception& e) {
                t.error = e.what();
            }
        }
    };
    const std::size_t n_threads = std::min(cfg.sweep.threads, tasks.size());
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < n_threads; ++k) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }

    Outcome o;
    artifacts::CsvWriter csv(out / "sweep.csv", {"index", "mach", "amplitude_scale", "ratio", "apriori", "c1_min", "passed"});
    json runs = json::array();
    for (const auto& t : tasks) {
        csv.row({static_cast<double>(t.index), t.mach, t.scale, t.result.ratio, t.result.apriori, t.result.c1_min,
                 t.result.passed ? 1.0 : 0.0});
        runs.push_back({{"index", t.index},
                        {"mach", t.mach},
                        {"amplitude_scale", t.scale},
                        {"ratio", number(t.result.ratio)},
                        {"apriori", number(t.result.apriori)},
                        {"c1_min", number(t.result.c1_min)},
                        {"passed", t.result.passed},
                        {"error", t.error}});
        add(o, "run " + std::to_string(t.index) + " (mach " + fmt(t.mach) + ", scale " + fmt(t.scale) + ")",
            t.error.empty() && t.result.passed, t.error);
    }
    for (double m : cfg.sweep.machs) {
        std::vector<double> apriori, c1;
        for (const auto& t : tasks) {
            if (t.mach == m && t.error.empty()) {
                apriori.push_back(t.result.apriori);
                c1.push_back(t.result.c1_min);
            }
        }
        if (apriori.size() >= 2) {
            const double sa = spread(apriori), sc = spread(c1);
            add(o, "a-priori ratio within 50% of mean (mach " + fmt(m) + ")", sa <= 0.5, fmt(sa));
            add(o, "c1 within 20% of mean (mach " + fmt(m) + ")", sc <= 0.2, fmt(sc));
        }
    }
    o.summary["results"] = {{"runs", runs}};
    finish(o, "sweep", cfg, out);
    return o;
}

} // namespace

bool Outcome::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<std::string> names()
{
    return {"analyze-eos", "stationary", "simulate", "stability", "sweep"};
}

stationary::StationaryProfile build_profile(config::RunConfig& cfg)
{
    const stationary::FarFieldSpec far = cfg.far_field_spec();
    const stationary::RegimeClass regime = stationary::jacobian_plus(far);
    const auto& st = cfg.stationary;
    if (regime.kind == stationary::Regime::Transonic) {
        if (!st.L) {
            const stationary::CenterManifoldData cm = stationary::transonic_reduction(far);
            cfg.stationary.L = stationary::default_transonic_length(cm, st.y10 > 0 ? st.y10 : st.delta0);
        }
        return stationary::build_transonic_profile(far, st.y10, *cfg.stationary.L, st.N, cfg.profile_options());
    }
    if (!st.L) {
        cfg.stationary.L = stationary::default_nondegenerate_length(regime);
    }
    return stationary::build_nondegenerate_profile(far, st.eps, *cfg.stationary.L, st.N, cfg.profile_options());
}

Outcome dispatch(const std::string& command, config::RunConfig cfg, const Options& options)
{
    const fs::path out = cfg.output.dir;
    artifacts::ensure_dir(out);
    if (command == "analyze-eos") {
        return analyze_eos(cfg, out);
    }
    if (command == "stationary") {
        return stationary_command(cfg, options, out);
    }
    if (command == "simulate") {
        return simulate_command(cfg, out);
    }
    if (command == "stability") {
        return stability_command(cfg, out);
    }
    if (command == "sweep") {
        return sweep_command(cfg, out);
    }
    throw ConfigError("unknown command '" + command + "'");
}

} // namespace outflow::commands
