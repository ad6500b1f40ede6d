#pragma once

// Explicit finite-difference solver for the 1-D compressible Navier-Stokes
// system on [0, L]: continuity in flux form, momentum and temperature in
// primitive form, Dirichlet (u, theta) at the outflow boundary x = 0.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "outflow/eos.hpp"

namespace outflow::transient {

struct Grid1D {
    double L = 0;
    std::size_t N = 0;
    double dx = 0;
    std::vector<double> x;

    /// N cells, nodes x_i = i L / N for i = 0..N.
    static Grid1D uniform(double L, std::size_t N);
};

struct FlowState {
    double t = 0;
    std::vector<double> rho, u, theta;

    std::size_t size() const { return rho.size(); }
};

enum class FarFieldMode { Dirichlet, ZeroGradient };
enum class Convection { Upwind1, Upwind2 };

std::string to_string(FarFieldMode m);
std::string to_string(Convection c);
FarFieldMode far_field_mode_from(const std::string& s);
Convection convection_from(const std::string& s);

/// Upper bound accepted for the Courant number.
inline constexpr double kCflMax = 0.5;

struct SolverConfig {
    double cfl = 0.4;
    double t_end = 10.0;
    std::size_t snapshot_stride = 100;
    FarFieldMode far_field = FarFieldMode::Dirichlet;
    /// Upwind1: first-order one-sided convection. Upwind2: second-order
    /// one-sided (three-point) convection, first order next to the boundaries.
    Convection convection = Convection::Upwind1;
    eos::PhysicalParams phys;
    bool keep_snapshots = false;
    /// A rejected step is covered by two half steps, recursively, at most
    /// this many levels deep.
    std::size_t max_retries = 5;
    /// Constant time step when positive (must not exceed cfl_dt along the
    /// run); otherwise cfl_dt is recomputed every step.
    double fixed_dt = 0.0;
};

void validate(const SolverConfig& cfg);

/// Boundary data: (u-, theta-) at x = 0 and the Dirichlet state at x = L.
struct BoundaryData {
    double u_minus = -1.0;
    double theta_minus = 1.0;
    double rho_right = 1.0;
    double u_right = -1.0;
    double theta_right = 1.0;
};

/// Semi-discrete time derivatives at every node.
struct Rates {
    std::vector<double> rho, u, theta;
    /// Mass fluxes at x = 0 and at the interface left of node N.
    double flux_left = 0, flux_right = 0;
};

struct MassAudit {
    double mass_initial = 0;
    double mass_final = 0;
    /// integral over time of (flux at x = 0) - (flux entering at x = L)
    double boundary_flux_integral = 0;
    double discrepancy = 0;          // mass_final - mass_initial - boundary_flux_integral
    double relative_discrepancy = 0; // discrepancy / mass_initial
};

struct RunResult {
    FlowState final_state;
    std::vector<FlowState> snapshots;
    std::vector<double> observed_times;
    std::size_t steps = 0;
    std::size_t rejected_steps = 0;
    double dt_min = 0, dt_max = 0;
    MassAudit audit;
};

using Observer = std::function<void(const FlowState& state, std::size_t step)>;

class Solver {
public:
    Solver(eos::GasModelPtr model, Grid1D grid, SolverConfig cfg, BoundaryData bc);

    const Grid1D& grid() const { return grid_; }
    const SolverConfig& config() const { return cfg_; }
    const BoundaryData& boundary() const { return bc_; }
    const eos::GasModel& model() const { return *model_; }

    /// cfl * min_i (dx/(|u|+c), dx^2 rho/(2 mu), dx^2 rho e_theta/(2 kappa)).
    double cfl_dt(const FlowState& s) const;

    Rates rates(const FlowState& s) const;

    /// Dirichlet u, theta at node 0 (rho evolves there); Dirichlet or
    /// zero-gradient at node N.
    void apply_bcs(FlowState& s) const;

    /// One two-stage (Heun) step with boundary conditions applied after each
    /// stage. Throws NumericalError if positivity fails. When flux is given it
    /// receives the time integral of the boundary mass fluxes over the step.
    FlowState step(const FlowState& s, double dt, double* flux = nullptr) const;

    /// w0 rho_0 + dx sum_{i=1}^{N-1} rho_i, with the node-0 control volume
    /// w0 = dx (Upwind1) or dx/2 (Upwind2).
    double mass(const FlowState& s) const;

    /// Integrates to cfg.t_end. Observers see the state at step 0, every
    /// snapshot_stride steps and at the final time.
    RunResult run(FlowState initial, const std::vector<Observer>& observers = {}) const;

private:
    FlowState advance(const FlowState& s, double dt, std::size_t depth, double& flux, std::size_t& rejected) const;
    bool positive(const FlowState& s, std::size_t* bad_node) const;

    eos::GasModelPtr model_;
    Grid1D grid_;
    SolverConfig cfg_;
    BoundaryData bc_;
};

/// Uniform state on the grid.
FlowState constant_state(const Grid1D& grid, double rho, double u, double theta);

/// max_i max(|a.rho - b.rho|/|b.rho|, |a.u - b.u|/|b.u|, |a.theta - b.theta|/|b.theta|).
double relative_sup_difference(const FlowState& a, const FlowState& b);

nlohmann::json to_json(const MassAudit& a);
nlohmann::json to_json(const SolverConfig& cfg);

} // namespace outflow::transient
