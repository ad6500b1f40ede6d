#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "outflow/harness.hpp"

using namespace outflow;
using namespace outflow::harness;

namespace {

// Shortened domain so that small grids resolve the fast mode.
stationary::StationaryProfile transonic_profile(std::size_t N = 1024, double y10 = 0.1, double L = 100.0)
{
    const auto gas = eos::make_closure("ideal-polytropic");
    const auto far = stationary::FarFieldSpec::from_mach(gas, {1.0, 1.0}, 1.0, 1.0, 1.0);
    return stationary::build_transonic_profile(far, y10, L, N);
}

NormSeries synthetic(const std::vector<double>& sup)
{
    NormSeries s;
    for (std::size_t i = 0; i < sup.size(); ++i) {
        s.times.push_back(static_cast<double>(i));
        s.sup.push_back(sup[i]);
    }
    return s;
}

} // namespace

TEST_CASE("zero amplitudes reproduce the profile")
{
    const auto p = transonic_profile(512);
    const InitialData init = make_initial(p, PerturbationSpec{});
    const transient::FlowState ref = profile_state(p);
    CHECK(init.state.rho == ref.rho);
    CHECK(init.state.u == ref.u);
    CHECK(init.state.theta == ref.theta);
    CHECK(init.h1_norm == 0.0);
}

TEST_CASE("boundary compatibility")
{
    const auto p = transonic_profile(512);
    PerturbationSpec spec;
    spec.a_rho = spec.a_u = spec.a_theta = 0.01;
    spec.center = 40.0;
    spec.width = 4.0;
    const InitialData init = make_initial(p, spec);
    CHECK(init.raw_boundary_psi < 1e-12);
    CHECK(init.raw_boundary_zeta < 1e-12);
    CHECK(init.state.u[0] == p.u[0]);
    CHECK(init.state.theta[0] == p.theta[0]);
}

TEST_CASE("reported H1 norm matches the closed-form Gaussian integrals")
{
    const auto p = transonic_profile(8192);
    PerturbationSpec spec;
    spec.a_rho = 0.01;
    spec.a_u = -0.02;
    spec.a_theta = 0.015;
    spec.center = 60.0;
    spec.width = 5.0;
    const InitialData init = make_initial(p, spec);
    // int exp(-2 r^2) dx = w sqrt(pi/2), int (d/dx exp(-r^2))^2 dx = sqrt(pi/2)/w.
    const double w = spec.width;
    const double amp2 = spec.a_rho * spec.a_rho + spec.a_u * spec.a_u + spec.a_theta * spec.a_theta;
    const double exact = std::sqrt(amp2 * (w + 1.0 / w) * std::sqrt(std::numbers::pi / 2.0));
    CHECK(init.h1_norm == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("shape derivatives against differences")
{
    for (Shape shape : {Shape::GaussianBump, Shape::CompactBump, Shape::DecayingWave}) {
        PerturbationSpec spec;
        spec.shape = shape;
        spec.seed = 11;
        const ShapeFunction g(spec);
        for (double x : {17.3, 19.1, 20.0, 22.6}) {
            for (std::size_t k = 0; k < 3; ++k) {
                const double h = 1e-6;
                const double fd = (g.value(k, x + h) - g.value(k, x - h)) / (2 * h);
                CHECK(g.derivative(k, x) == doctest::Approx(fd).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("positivity guard on large amplitudes")
{
    const auto p = transonic_profile(512);
    PerturbationSpec spec;
    spec.a_rho = -5.0;
    CHECK_THROWS_AS(make_initial(p, spec), AdmissibilityError);
    spec.a_rho = 0.0;
    spec.width = 0.0;
    CHECK_THROWS_AS(make_initial(p, spec), ConfigError);
}

TEST_CASE("energy density")
{
    const auto p = transonic_profile(512);
    const auto& gas = p.far.model();
    const transient::FlowState ref = profile_state(p);
    for (std::size_t i : {0ul, 10ul, 100ul}) {
        CHECK(energy_density(gas, ref, ref, i) == 0.0);
    }
    transient::FlowState s = ref;
    for (std::size_t i = 0; i < s.size(); ++i) {
        s.u[i] += 0.03;
    }
    for (std::size_t i : {0ul, 10ul, 100ul}) {
        CHECK(energy_density(gas, ref, s, i) == doctest::Approx(0.5 * 0.03 * 0.03).epsilon(1e-12));
    }
}

TEST_CASE("equivalence constants on a small random perturbation")
{
    const auto p = transonic_profile(512);
    const transient::FlowState ref = profile_state(p);
    transient::FlowState s = ref;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-1e-3, 1e-3);
    for (std::size_t i = 0; i < s.size(); ++i) {
        s.rho[i] += d(rng);
        s.u[i] += d(rng);
        s.theta[i] += d(rng);
    }
    const EquivalenceConstants c = equivalence_constants(p.far.model(), ref, s);
    CHECK(c.energy_nonnegative);
    CHECK(c.c1 > 0);
    CHECK(c.c1 <= c.c2);
    CHECK(std::isfinite(c.c2));
}

TEST_CASE("quadratic form of the transonic far field")
{
    const auto gas = eos::make_closure("ideal-polytropic");
    const eos::ConditionReport report = eos::check_conditions(*gas, {1.0, 1.0}, -std::sqrt(1.4));
    CHECK(quadratic_form(report, {0.0, 0.0, 0.0}) == 0.0);
    const QuadraticFormReport q = quadratic_form_check(report);
    CHECK(q.minors_positive);
    CHECK(q.min_eigenvalue > 0);
    CHECK(q.all_samples_positive);
    CHECK(q.sylvester_consistent);
    CHECK(q.samples == 10000);
    CHECK(q.minor3_relative_difference < 1e-10);
    // Ideal gas: A1 = p_vv + p_v/v = gamma^2 p / v^2.
    CHECK(q.minors[0] == doctest::Approx(1.96).epsilon(1e-6));
}

TEST_CASE("decay verdicts on synthetic series")
{
    CHECK(decay_report(synthetic({1.0, 0.8, 0.5, 0.3, 0.1})).verdict == Verdict::Converging);
    CHECK(decay_report(synthetic({1.0, 1.0, 1.0, 1.0})).verdict == Verdict::Stagnating);
    CHECK(decay_report(synthetic({1.0, 1.5, 2.0, 3.0})).verdict == Verdict::Diverging);
    CHECK(decay_report(synthetic({1.0, 0.5})).verdict == Verdict::Inconclusive);
    const DecayReport r = decay_report(synthetic({1.0, 0.8, 0.5, 0.3, 0.1}));
    CHECK(r.ratio == doctest::Approx(0.1));
    CHECK(r.half_life == doctest::Approx(2.0));
}

TEST_CASE("zero perturbation run gives identically zero norms")
{
    const auto p = transonic_profile(512);
    transient::SolverConfig cfg;
    cfg.t_end = 2.0;
    cfg.snapshot_stride = 20;
    const StabilityResult r = run_stability(p, PerturbationSpec{}, cfg);
    for (std::size_t i = 0; i < r.norms.size(); ++i) {
        CHECK(r.norms.sup[i] == 0.0);
        CHECK(r.norms.l2[i] == 0.0);
        CHECK(r.norms.dissipation[i] == 0.0);
    }
    CHECK(r.decay.verdict == Verdict::Inconclusive);
}

TEST_CASE("stability run bookkeeping")
{
    const auto p = transonic_profile(512);
    PerturbationSpec spec;
    spec.a_rho = spec.a_u = spec.a_theta = 0.01;
    transient::SolverConfig cfg;
    cfg.t_end = 10.0;
    cfg.snapshot_stride = 25;
    cfg.keep_snapshots = true;
    StabilityOptions opt;
    opt.reference = Reference::Profile;
    const StabilityResult r = run_stability(p, spec, cfg, opt);
    for (std::size_t i = 1; i < r.norms.size(); ++i) {
        CHECK(r.norms.times[i] > r.norms.times[i - 1]);
        CHECK(r.norms.dissipation[i] >= r.norms.dissipation[i - 1]);
        CHECK(r.norms.boundary_integral[i] >= r.norms.boundary_integral[i - 1]);
    }
    CHECK(r.energy.energy_nonnegative);
    CHECK(r.energy.c1_min > 0);
    // Observer hook and stored snapshots give the same norms.
    const NormSeries again = track(p.far.model_ptr(), profile_state(p), p.dx(), r.run.snapshots);
    REQUIRE(again.size() == r.norms.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
        CHECK(again.h1_semi[i] == doctest::Approx(r.norms.h1_semi[i]).epsilon(1e-14));
        CHECK(again.sup[i] == r.norms.sup[i]);
    }
}

TEST_CASE("right-boundary state selection")
{
    const auto p = transonic_profile(512);
    const auto own = profile_boundary(p, RightState::Profile);
    const auto far = profile_boundary(p, RightState::FarField);
    CHECK(own.u_right == p.u.back());
    CHECK(far.u_right == p.far.u_plus());
    CHECK(own.u_minus == p.u.front());
    CHECK_THROWS_AS(right_state_from("elsewhere"), ConfigError);
}
