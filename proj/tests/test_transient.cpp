#include <cmath>

#include <doctest.h>

#include "outflow/transient.hpp"

using namespace outflow;
using namespace outflow::transient;

namespace {

eos::GasModelPtr ideal()
{
    return eos::make_closure("ideal-polytropic");
}

BoundaryData far_field_bc(double rho, double u, double theta)
{
    return {u, theta, rho, u, theta};
}

FlowState bump(const Grid1D& g, double a)
{
    FlowState s = constant_state(g, 1.0, -1.2, 1.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double b = a * std::exp(-std::pow(g.x[i] - 0.5 * g.L, 2));
        s.rho[i] += b;
        s.u[i] += b;
        s.theta[i] += b;
    }
    return s;
}

double sup_error(const FlowState& coarse, const FlowState& fine, std::size_t ratio)
{
    double e = 0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        const std::size_t j = i * ratio;
        e = std::max({e, std::abs(coarse.rho[i] - fine.rho[j]), std::abs(coarse.u[i] - fine.u[j]),
                      std::abs(coarse.theta[i] - fine.theta[j])});
    }
    return e;
}

} // namespace

TEST_CASE("uniform grid")
{
    const Grid1D g = Grid1D::uniform(10.0, 5);
    CHECK(g.dx == doctest::Approx(2.0));
    CHECK(g.x.size() == 6);
    CHECK(g.x.back() == 10.0);
    CHECK_THROWS_AS(Grid1D::uniform(0.0, 10), ConfigError);
}

TEST_CASE("cfl_dt matches the hand-evaluated formula")
{
    const double g = 1.4, rho = 1.0, u = -std::sqrt(1.4), theta = 1.0;
    const Grid1D grid = Grid1D::uniform(10.0, 100);
    SolverConfig cfg;
    cfg.cfl = 0.4;
    cfg.phys = {0.5, 2.0};
    const Solver s(ideal(), grid, cfg, far_field_bc(rho, u, theta));
    const double c = std::sqrt(g * theta);
    const double dx = 0.1;
    const double expected =
        0.4 * std::min({dx / (std::abs(u) + c), dx * dx * rho / (2 * 0.5), dx * dx * rho * (1 / (g - 1)) / (2 * 2.0)});
    CHECK(s.cfl_dt(constant_state(grid, rho, u, theta)) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("parabolic regime: halving dx quarters dt")
{
    SolverConfig cfg;
    const BoundaryData bc = far_field_bc(1.0, -0.1, 1.0);
    const Grid1D g1 = Grid1D::uniform(1.0, 400), g2 = Grid1D::uniform(1.0, 800);
    const Solver s1(ideal(), g1, cfg, bc), s2(ideal(), g2, cfg, bc);
    const double r = s1.cfl_dt(constant_state(g1, 1.0, -0.1, 1.0)) / s2.cfl_dt(constant_state(g2, 1.0, -0.1, 1.0));
    CHECK(r == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("mu = kappa: the smaller of rho and rho e_theta sets the parabolic bound")
{
    SolverConfig cfg;
    cfg.phys = {1.0, 1.0};
    const Grid1D g = Grid1D::uniform(1.0, 400);
    // e_theta = 1/(gamma - 1) = 2.5 > 1, so the viscous bound wins.
    const Solver s(ideal(), g, cfg, far_field_bc(1.0, -0.1, 1.0));
    CHECK(s.cfl_dt(constant_state(g, 1.0, -0.1, 1.0)) == doctest::Approx(0.4 * g.dx * g.dx / 2.0).epsilon(1e-14));
}

TEST_CASE("constant far-field state is an exact fixed point")
{
    for (Convection conv : {Convection::Upwind1, Convection::Upwind2}) {
        for (FarFieldMode mode : {FarFieldMode::Dirichlet, FarFieldMode::ZeroGradient}) {
            const Grid1D g = Grid1D::uniform(20.0, 200);
            SolverConfig cfg;
            cfg.t_end = 1.0;
            cfg.convection = conv;
            cfg.far_field = mode;
            const Solver s(ideal(), g, cfg, far_field_bc(0.8, -1.1, 1.3));
            const FlowState init = constant_state(g, 0.8, -1.1, 1.3);
            const RunResult r = s.run(init);
            for (std::size_t i = 0; i < init.size(); ++i) {
                CHECK(r.final_state.rho[i] == init.rho[i]);
                CHECK(r.final_state.u[i] == init.u[i]);
                CHECK(r.final_state.theta[i] == init.theta[i]);
            }
        }
    }
}

TEST_CASE("apply_bcs on the far-field state is a no-op")
{
    const Grid1D g = Grid1D::uniform(5.0, 50);
    const Solver s(ideal(), g, SolverConfig{}, far_field_bc(1.0, -1.0, 1.0));
    FlowState st = constant_state(g, 1.0, -1.0, 1.0);
    const FlowState before = st;
    s.apply_bcs(st);
    CHECK(st.rho == before.rho);
    CHECK(st.u == before.u);
    CHECK(st.theta == before.theta);
}

TEST_CASE("node-0 density rate transports a linear ramp")
{
    for (std::size_t N : {50, 100}) {
        const Grid1D g = Grid1D::uniform(5.0, N);
        const double u = -0.7, slope = 0.03;
        const Solver s(ideal(), g, SolverConfig{}, far_field_bc(1.0, u, 1.0));
        FlowState st = constant_state(g, 1.0, u, 1.0);
        for (std::size_t i = 0; i < st.size(); ++i) {
            st.rho[i] = 1.0 + slope * g.x[i];
        }
        // rho_t = -u rho_x for constant u.
        CHECK(s.rates(st).rho[0] == doctest::Approx(-u * slope).epsilon(1e-10));
    }
}

TEST_CASE("mass change equals the boundary flux integral")
{
    for (Convection conv : {Convection::Upwind1, Convection::Upwind2}) {
        const Grid1D g = Grid1D::uniform(20.0, 400);
        SolverConfig cfg;
        cfg.t_end = 3.0;
        cfg.convection = conv;
        const Solver s(ideal(), g, cfg, far_field_bc(1.0, -1.2, 1.0));
        FlowState init = constant_state(g, 1.0, -1.2, 1.0);
        for (std::size_t i = 0; i < init.size(); ++i) {
            init.u[i] += 0.05 * std::exp(-std::pow((g.x[i] - 8.0) / 1.5, 2));
        }
        const RunResult r = s.run(init);
        CHECK(std::abs(r.audit.discrepancy) < 1e-8);
        CHECK(std::abs(r.audit.relative_discrepancy) < 1e-8);
        CHECK(r.audit.mass_final != r.audit.mass_initial);
    }
}

TEST_CASE("run bookkeeping")
{
    const Grid1D g = Grid1D::uniform(10.0, 100);
    SolverConfig cfg;
    cfg.t_end = 0.0;
    const Solver zero(ideal(), g, cfg, far_field_bc(1.0, -1.2, 1.0));
    const FlowState init = bump(g, 0.02);
    const RunResult r0 = zero.run(init);
    CHECK(r0.observed_times.empty());
    CHECK(r0.snapshots.empty());
    CHECK(r0.steps == 0);

    cfg.t_end = 2.0;
    cfg.snapshot_stride = 10;
    const RunResult a = Solver(ideal(), g, cfg, far_field_bc(1.0, -1.2, 1.0)).run(init);
    const RunResult b = Solver(ideal(), g, cfg, far_field_bc(1.0, -1.2, 1.0)).run(init);
    CHECK(a.final_state.rho == b.final_state.rho);
    CHECK(a.final_state.u == b.final_state.u);
    CHECK(a.final_state.theta == b.final_state.theta);
    CHECK(a.observed_times == b.observed_times);

    cfg.snapshot_stride = 20;
    const RunResult c = Solver(ideal(), g, cfg, far_field_bc(1.0, -1.2, 1.0)).run(init);
    const double half = static_cast<double>(a.observed_times.size()) / 2.0;
    CHECK(std::abs(static_cast<double>(c.observed_times.size()) - half) <= 1.0);
    CHECK(c.final_state.t == doctest::Approx(2.0));
}

TEST_CASE("configuration validation")
{
    const Grid1D g = Grid1D::uniform(10.0, 100);
    SolverConfig cfg;
    cfg.cfl = 0.6;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.cfl = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.snapshot_stride = 0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    CHECK_THROWS_AS(Solver(ideal(), g, SolverConfig{}, far_field_bc(1.0, 0.3, 1.0)), AdmissibilityError);
    CHECK_THROWS_AS(far_field_mode_from("neumann-ish"), ConfigError);
}

TEST_CASE("an oversized fixed step is rejected")
{
    const Grid1D g = Grid1D::uniform(10.0, 200);
    SolverConfig cfg;
    cfg.t_end = 1.0;
    cfg.fixed_dt = 1.0;
    const Solver s(ideal(), g, cfg, far_field_bc(1.0, -1.2, 1.0));
    CHECK_THROWS_AS(s.run(bump(g, 0.02)), NumericalError);
}

TEST_CASE("second-order convection converges at second order")
{
    const double L = 10.0;
    auto solve = [&](std::size_t N) {
        const Grid1D g = Grid1D::uniform(L, N);
        SolverConfig cfg;
        cfg.t_end = 0.5;
        cfg.cfl = 0.2;
        cfg.convection = Convection::Upwind2;
        return Solver(ideal(), g, cfg, far_field_bc(1.0, -1.2, 1.0)).run(bump(g, 0.05)).final_state;
    };
    const FlowState ref = solve(512);
    const double e1 = sup_error(solve(64), ref, 8);
    const double e2 = sup_error(solve(128), ref, 4);
    const double order = std::log2(e1 / e2);
    MESSAGE("measured order " << order);
    CHECK(order >= 1.8);
}
