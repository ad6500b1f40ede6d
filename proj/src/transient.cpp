#include "outflow/transient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "outflow/errors.hpp"

namespace outflow::transient {

Grid1D Grid1D::uniform(double L, std::size_t N)
{
    if (!(L > 0.0) || !std::isfinite(L) || N < 4) {
        throw ConfigError("grid needs L > 0 and at least 4 cells");
    }
    Grid1D g;
    g.L = L;
    g.N = N;
    g.dx = L / static_cast<double>(N);
    g.x.resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        g.x[i] = L * static_cast<double>(i) / static_cast<double>(N);
    }
    return g;
}

std::string to_string(FarFieldMode m)
{
    return m == FarFieldMode::Dirichlet ? "dirichlet" : "zero-gradient";
}

std::string to_string(Convection c)
{
    return c == Convection::Upwind1 ? "upwind1" : "upwind2";
}

FarFieldMode far_field_mode_from(const std::string& s)
{
    if (s == "dirichlet") {
        return FarFieldMode::Dirichlet;
    }
    if (s == "zero-gradient") {
        return FarFieldMode::ZeroGradient;
    }
    throw ConfigError("unknown far-field mode '" + s + "' (expected dirichlet or zero-gradient)");
}

Convection convection_from(const std::string& s)
{
    if (s == "upwind1") {
        return Convection::Upwind1;
    }
    if (s == "upwind2") {
        return Convection::Upwind2;
    }
    throw ConfigError("unknown convection scheme '" + s + "' (expected upwind1 or upwind2)");
}

void validate(const SolverConfig& cfg)
{
    if (!(cfg.cfl > 0.0) || cfg.cfl > kCflMax) {
        throw ConfigError("cfl must lie in (0, " + std::to_string(kCflMax) + "]");
    }
    if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) {
        throw ConfigError("t_end must be finite and non-negative");
    }
    if (!(cfg.fixed_dt >= 0.0) || !std::isfinite(cfg.fixed_dt)) {
        throw ConfigError("fixed_dt must be finite and non-negative");
    }
    if (cfg.snapshot_stride == 0) {
        throw ConfigError("snapshot stride must be positive");
    }
    eos::validate(cfg.phys);
}

FlowState constant_state(const Grid1D& grid, double rho, double u, double theta)
{
    FlowState s;
    s.rho.assign(grid.N + 1, rho);
    s.u.assign(grid.N + 1, u);
    s.theta.assign(grid.N + 1, theta);
    return s;
}

double relative_sup_difference(const FlowState& a, const FlowState& b)
{
    double m = 0.0;
    auto rel = [](double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); };
    for (std::size_t i = 0; i < b.size(); ++i) {
        m = std::max({m, rel(a.rho[i], b.rho[i]), rel(a.u[i], b.u[i]), rel(a.theta[i], b.theta[i])});
    }
    return m;
}

Solver::Solver(eos::GasModelPtr model, Grid1D grid, SolverConfig cfg, BoundaryData bc)
    : model_(std::move(model)), grid_(std::move(grid)), cfg_(cfg), bc_(bc)
{
    if (!model_) {
        throw ConfigError("solver requires a gas closure");
    }
    validate(cfg_);
    if (!(bc_.u_minus < 0.0)) {
        throw AdmissibilityError("outflow boundary requires u- < 0");
    }
    eos::validate(eos::ThermoState{1.0, bc_.theta_minus});
    if (cfg_.far_field == FarFieldMode::Dirichlet) {
        eos::validate(eos::ThermoState{1.0 / bc_.rho_right, bc_.theta_right});
    }
}

double Solver::cfl_dt(const FlowState& s) const
{
    const double dx = grid_.dx;
    const double mu = cfg_.phys.mu, kappa = cfg_.phys.kappa;
    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const eos::ThermoState st{1.0 / s.rho[i], s.theta[i]};
        const eos::Partials d = eos::first_partials(*model_, st);
        const double c = eos::sound_speed_mach(*model_, st, s.u[i]).c;
        const double speed = std::abs(s.u[i]) + c;
        if (!std::isfinite(speed)) {
            throw NumericalError("non-finite wave speed at node " + std::to_string(i));
        }
        dt = std::min({dt, dx / speed, dx * dx * s.rho[i] / (2.0 * mu), dx * dx * s.rho[i] * d.e_theta / (2.0 * kappa)});
    }
    return cfg_.cfl * dt;
}

Rates Solver::rates(const FlowState& s) const
{
    const std::size_t n = s.size();
    const std::size_t N = n - 1;
    const double dx = grid_.dx;
    const double mu = cfg_.phys.mu, kappa = cfg_.phys.kappa;
    const bool second = cfg_.convection == Convection::Upwind2;

    std::vector<double> p(n), p_theta(n), e_theta(n), F(n);
    for (std::size_t i = 0; i < n; ++i) {
        const eos::Partials d = eos::first_partials(*model_, {1.0 / s.rho[i], s.theta[i]});
        p[i] = d.p;
        p_theta[i] = d.p_theta;
        e_theta[i] = d.e_theta;
        F[i] = s.rho[i] * s.u[i];
    }

    // Upwinded mass flux at the interface i+1/2 (0 <= i < N).
    auto interface_flux = [&](std::size_t i) {
        if (s.u[i] + s.u[i + 1] < 0.0) {
            if (second && i + 2 <= N) {
                return 1.5 * F[i + 1] - 0.5 * F[i + 2];
            }
            return F[i + 1];
        }
        if (second && i >= 1) {
            return 1.5 * F[i] - 0.5 * F[i - 1];
        }
        return F[i];
    };
    // One-sided derivative of f at node i, upwinded on the sign of a.
    auto upwind = [&](const std::vector<double>& f, std::size_t i, double a) {
        if (a < 0.0) {
            if (second && i + 2 <= N) {
                return (-f[i + 2] + 4.0 * f[i + 1] - 3.0 * f[i]) / (2.0 * dx);
            }
            return (f[i + 1] - f[i]) / dx;
        }
        if (second && i >= 2) {
            return (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) / (2.0 * dx);
        }
        return (f[i] - f[i - 1]) / dx;
    };

    Rates r;
    r.rho.assign(n, 0.0);
    r.u.assign(n, 0.0);
    r.theta.assign(n, 0.0);

    std::vector<double> Fi(N);
    for (std::size_t i = 0; i < N; ++i) {
        Fi[i] = interface_flux(i);
    }
    const double w0 = second ? 0.5 * dx : dx;
    r.flux_left = F[0];
    r.flux_right = Fi[N - 1];
    r.rho[0] = -(Fi[0] - F[0]) / w0;
    for (std::size_t i = 1; i < N; ++i) {
        r.rho[i] = -(Fi[i] - Fi[i - 1]) / dx;
    }

    for (std::size_t i = 1; i < N; ++i) {
        const double rho = s.rho[i], u = s.u[i];
        const double u_x = (s.u[i + 1] - s.u[i - 1]) / (2.0 * dx);
        const double p_x = (p[i + 1] - p[i - 1]) / (2.0 * dx);
        const double u_xx = (s.u[i + 1] - 2.0 * u + s.u[i - 1]) / (dx * dx);
        const double t_xx = (s.theta[i + 1] - 2.0 * s.theta[i] + s.theta[i - 1]) / (dx * dx);
        r.u[i] = -u * upwind(s.u, i, u) - p_x / rho + mu * u_xx / rho;
        r.theta[i] = -u * upwind(s.theta, i, u) +
                     (kappa * t_xx + mu * u_x * u_x - s.theta[i] * p_theta[i] * u_x) / (rho * e_theta[i]);
    }
    return r;
}

void Solver::apply_bcs(FlowState& s) const
{
    if (!(bc_.u_minus < 0.0)) {
        throw AdmissibilityError("outflow violated: u(0) >= 0 at t = " + std::to_string(s.t));
    }
    const std::size_t N = s.size() - 1;
    s.u[0] = bc_.u_minus;
    s.theta[0] = bc_.theta_minus;
    if (cfg_.far_field == FarFieldMode::Dirichlet) {
        s.rho[N] = bc_.rho_right;
        s.u[N] = bc_.u_right;
        s.theta[N] = bc_.theta_right;
    } else {
        s.rho[N] = s.rho[N - 1];
        s.u[N] = s.u[N - 1];
        s.theta[N] = s.theta[N - 1];
    }
}

bool Solver::positive(const FlowState& s, std::size_t* bad_node) const
{
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s.rho[i] > 0.0) || !(s.theta[i] > 0.0) || !std::isfinite(s.rho[i]) || !std::isfinite(s.theta[i]) ||
            !std::isfinite(s.u[i])) {
            if (bad_node) {
                *bad_node = i;
            }
            return false;
        }
    }
    return true;
}

FlowState Solver::step(const FlowState& s, double dt, double* flux) const
{
    const std::size_t n = s.size();
    const Rates r0 = rates(s);
    FlowState s1 = s;
    for (std::size_t i = 0; i < n; ++i) {
        s1.rho[i] += dt * r0.rho[i];
        s1.u[i] += dt * r0.u[i];
        s1.theta[i] += dt * r0.theta[i];
    }
    s1.t = s.t + dt;
    apply_bcs(s1);
    std::size_t bad = 0;
    if (!positive(s1, &bad)) {
        throw NumericalError("positivity lost at node " + std::to_string(bad) + ", t = " + std::to_string(s.t));
    }

    const Rates r1 = rates(s1);
    FlowState out = s;
    for (std::size_t i = 0; i < n; ++i) {
        out.rho[i] = 0.5 * (s.rho[i] + s1.rho[i] + dt * r1.rho[i]);
        out.u[i] = 0.5 * (s.u[i] + s1.u[i] + dt * r1.u[i]);
        out.theta[i] = 0.5 * (s.theta[i] + s1.theta[i] + dt * r1.theta[i]);
    }
    out.t = s.t + dt;
    apply_bcs(out);
    if (!positive(out, &bad)) {
        throw NumericalError("positivity lost at node " + std::to_string(bad) + ", t = " + std::to_string(s.t));
    }
    if (flux) {
        *flux = 0.5 * dt * ((r0.flux_left - r0.flux_right) + (r1.flux_left - r1.flux_right));
    }
    return out;
}

FlowState Solver::advance(const FlowState& s, double dt, std::size_t depth, double& flux,
                          std::size_t& rejected) const
{
    try {
        double f = 0.0;
        FlowState next = step(s, dt, &f);
        flux += f;
        return next;
    } catch (const NumericalError& e) {
        if (depth >= cfg_.max_retries) {
            throw NumericalError(std::string(e.what()) + " (after " + std::to_string(depth) + " step halvings)");
        }
        ++rejected;
        const FlowState half = advance(s, 0.5 * dt, depth + 1, flux, rejected);
        return advance(half, 0.5 * dt, depth + 1, flux, rejected);
    }
}

double Solver::mass(const FlowState& s) const
{
    const std::size_t N = s.size() - 1;
    const double w0 = cfg_.convection == Convection::Upwind2 ? 0.5 * grid_.dx : grid_.dx;
    double sum = 0.0;
    for (std::size_t i = 1; i < N; ++i) {
        sum += s.rho[i];
    }
    return w0 * s.rho[0] + grid_.dx * sum;
}

RunResult Solver::run(FlowState initial, const std::vector<Observer>& observers) const
{
    if (initial.size() != grid_.N + 1 || initial.u.size() != initial.size() || initial.theta.size() != initial.size()) {
        throw ConfigError("initial state does not match the grid");
    }
    std::size_t bad = 0;
    if (!positive(initial, &bad)) {
        throw AdmissibilityError("initial state is not positive at node " + std::to_string(bad));
    }
    apply_bcs(initial);

    RunResult out;
    out.audit.mass_initial = mass(initial);
    if (cfg_.t_end == 0.0) {
        out.final_state = std::move(initial);
        out.audit.mass_final = out.audit.mass_initial;
        return out;
    }

    auto observe = [&](const FlowState& s, std::size_t k) {
        if (cfg_.fixed_dt > 0.0 && cfg_.fixed_dt > cfl_dt(s) * kCflMax / cfg_.cfl) {
            throw NumericalError("fixed_dt exceeds the stability bound at t = " + std::to_string(s.t));
        }
        for (const Observer& o : observers) {
            o(s, k);
        }
        out.observed_times.push_back(s.t);
        if (cfg_.keep_snapshots) {
            out.snapshots.push_back(s);
        }
    };

    FlowState s = std::move(initial);
    const double t0 = s.t;
    const double t_stop = t0 + cfg_.t_end;
    observe(s, 0);
    out.dt_min = std::numeric_limits<double>::infinity();
    double flux_total = 0.0;
    std::size_t k = 0;
    bool last_observed = true;
    while (s.t < t_stop) {
        double dt = std::min(cfg_.fixed_dt > 0.0 ? cfg_.fixed_dt : cfl_dt(s), t_stop - s.t);
        // Avoid a vanishing final sliver.
        if (t_stop - (s.t + dt) < 1e-12 * std::max(1.0, t_stop)) {
            dt = t_stop - s.t;
        }
        double flux = 0.0;
        FlowState next = advance(s, dt, 0, flux, out.rejected_steps);
        if (t_stop - next.t < 1e-12 * std::max(1.0, t_stop)) {
            next.t = t_stop;
        }
        s = std::move(next);
        flux_total += flux;
        out.dt_min = std::min(out.dt_min, dt);
        out.dt_max = std::max(out.dt_max, dt);
        ++k;
        last_observed = false;
        if (k % cfg_.snapshot_stride == 0) {
            observe(s, k);
            last_observed = true;
        }
    }
    if (!last_observed) {
        observe(s, k);
    }
    out.steps = k;
    out.audit.mass_final = mass(s);
    out.audit.boundary_flux_integral = flux_total;
    out.audit.discrepancy = out.audit.mass_final - out.audit.mass_initial - flux_total;
    out.audit.relative_discrepancy = out.audit.discrepancy / out.audit.mass_initial;
    out.final_state = std::move(s);
    return out;
}

nlohmann::json to_json(const MassAudit& a)
{
    return {{"mass_initial", a.mass_initial},
            {"mass_final", a.mass_final},
            {"boundary_flux_integral", a.boundary_flux_integral},
            {"discrepancy", a.discrepancy},
            {"relative_discrepancy", a.relative_discrepancy}};
}

nlohmann::json to_json(const SolverConfig& cfg)
{
    return {{"cfl", cfg.cfl},
            {"t_end", cfg.t_end},
            {"snapshot_stride", cfg.snapshot_stride},
            {"far_field", to_string(cfg.far_field)},
            {"convection", to_string(cfg.convection)},
            {"max_retries", cfg.max_retries},
            {"fixed_dt", cfg.fixed_dt}};
}

} // namespace outflow::transient
