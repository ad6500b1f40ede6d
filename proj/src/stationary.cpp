#include "outflow/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "outflow/errors.hpp"
#include "outflow/fit.hpp"
#include "outflow/ode.hpp"

namespace outflow::stationary {

namespace {

// Below this relative deviation rhs_deviation switches to the Taylor form.
constexpr double kTaylorSwitch = 1e-6;

nlohmann::json number(double x)
{
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

nlohmann::json matrix_json(const Eigen::Matrix2d& m)
{
    return {{number(m(0, 0)), number(m(0, 1))}, {number(m(1, 0)), number(m(1, 1))}};
}

// Unit vector along (x, y) oriented so that its first nonzero component is
// positive.
Eigen::Vector2d oriented_unit(Eigen::Vector2d r)
{
    r.normalize();
    if (r(0) < 0.0 || (r(0) == 0.0 && r(1) < 0.0)) {
        r = -r;
    }
    return r;
}

Eigen::Vector2d eigenvector(const Eigen::Matrix2d& J, double lambda)
{
    // Rows of (J - lambda I) are orthogonal to the eigenvector; use the row
    // with the larger norm.
    const Eigen::Vector2d c1(J(0, 1), lambda - J(0, 0));
    const Eigen::Vector2d c2(lambda - J(1, 1), J(1, 0));
    const Eigen::Vector2d r = c1.norm() >= c2.norm() ? c1 : c2;
    if (r.norm() == 0.0) {
        return {1.0, 0.0};
    }
    return oriented_unit(r);
}

void check_grid(double L, std::size_t N, double lambda_max)
{
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw ConfigError("profile length L must be positive and finite");
    }
    if (N < 16) {
        throw ConfigError("profile grid needs at least 16 cells");
    }
    const double dx = L / static_cast<double>(N);
    if (dx * lambda_max > 1.0) {
        throw ConfigError("grid too coarse for the requested length: dx * max|lambda| = " +
                          std::to_string(dx * lambda_max) + " exceeds 1; increase N");
    }
}

std::size_t substeps_for(double dx, double lambda_max, double step_factor)
{
    if (!(step_factor > 0.0)) {
        throw ConfigError("step_factor must be positive");
    }
    const double h_max = step_factor / std::max(lambda_max, 1e-300);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(dx / h_max)));
}

struct Trajectory {
    std::vector<double> dv, dtheta;
};

// Samples of the deviation dW at x_i = i L / N. Forward starts at node 0,
// backward at node N.
Trajectory integrate_nodes(const FarFieldSpec& spec, Vec2 start, bool forward, double L, std::size_t N,
                           std::size_t substeps)
{
    const double vp = spec.v_plus(), tp = spec.theta_plus();
    auto f = [&](double, const Vec2& y) {
        if (!(vp + y[0] > 0.0) || !(tp + y[1] > 0.0) || !std::isfinite(y[0]) || !std::isfinite(y[1])) {
            throw AdmissibilityError("profile trajectory left the admissible domain (v, theta > 0); seed too large");
        }
        try {
            return rhs_deviation(spec, y);
        } catch (const DomainError& e) {
            throw AdmissibilityError(std::string("profile trajectory left the closure domain; seed too large: ") +
                                     e.what());
        }
    };

    Trajectory t;
    t.dv.assign(N + 1, 0.0);
    t.dtheta.assign(N + 1, 0.0);
    const double dx = L / static_cast<double>(N);
    const double h = (forward ? dx : -dx) / static_cast<double>(substeps);
    Vec2 y = start;
    std::size_t node = forward ? 0 : N;
    t.dv[node] = y[0];
    t.dtheta[node] = y[1];
    for (std::size_t cell = 0; cell < N; ++cell) {
        const double x0 = static_cast<double>(node) * dx;
        for (std::size_t k = 0; k < substeps; ++k) {
            y = ode::rk4_step<2>(f, x0 + static_cast<double>(k) * h, y, h);
        }
        node = forward ? node + 1 : node - 1;
        t.dv[node] = y[0];
        t.dtheta[node] = y[1];
    }
    // One more evaluation so that a final state outside the domain is caught.
    f(0.0, y);
    return t;
}

double sup_difference(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

StationaryProfile make_profile(const FarFieldSpec& spec, const RegimeClass& regime, double L, std::size_t N)
{
    StationaryProfile p(spec, regime);
    p.L = L;
    p.N = N;
    p.x.resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        p.x[i] = L * static_cast<double>(i) / static_cast<double>(N);
    }
    return p;
}

// Fills v, u, theta, first and second derivatives from dv, dtheta using G
// and its Jacobian.
void fill_from_deviation(StationaryProfile& p)
{
    const FarFieldSpec& s = p.far;
    const double m = s.mass_flux();
    const std::size_t n = p.dv.size();
    p.v.resize(n);
    p.u.resize(n);
    p.theta.resize(n);
    p.v_x.resize(n);
    p.u_x.resize(n);
    p.theta_x.resize(n);
    p.v_xx.resize(n);
    p.u_xx.resize(n);
    p.theta_xx.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.v[i] = s.v_plus() + p.dv[i];
        p.theta[i] = s.theta_plus() + p.dtheta[i];
        p.u[i] = m * p.v[i];
        const Vec2 g = rhs_deviation(s, {p.dv[i], p.dtheta[i]});
        p.v_x[i] = g[0];
        p.theta_x[i] = g[1];
        p.u_x[i] = m * g[0];
        const Eigen::Vector2d gxx = jacobian(s, p.v[i], p.theta[i]) * Eigen::Vector2d(g[0], g[1]);
        p.v_xx[i] = gxx(0);
        p.theta_xx[i] = gxx(1);
        p.u_xx[i] = m * gxx(0);
    }
}

void record_boundary(StationaryProfile& p)
{
    const double m = p.far.mass_flux();
    p.u_minus = p.u.front();
    p.theta_minus = p.theta.front();
    p.delta = std::hypot(m * p.dv.front(), p.dtheta.front());
}

StationaryProfile constant_profile(const FarFieldSpec& spec, const RegimeClass& regime, double L, std::size_t N)
{
    StationaryProfile p = make_profile(spec, regime, L, N);
    p.dv.assign(N + 1, 0.0);
    p.dtheta.assign(N + 1, 0.0);
    fill_from_deviation(p);
    record_boundary(p);
    return p;
}

} // namespace

// ---------------------------------------------------------------------------

FarFieldSpec::FarFieldSpec(eos::GasModelPtr model, eos::PhysicalParams phys, double v_plus, double theta_plus,
                           double u_plus)
    : model_(std::move(model)), phys_(phys), v_plus_(v_plus), theta_plus_(theta_plus), u_plus_(u_plus)
{
    if (!model_) {
        throw ConfigError("far field requires a gas closure");
    }
    eos::validate(phys_);
    eos::validate(plus_state());
    if (!std::isfinite(u_plus)) {
        throw DomainError("u+ must be finite");
    }
    if (u_plus >= 0.0) {
        throw AdmissibilityError("no stationary solution exists for u+ >= 0: the mass balance rho u = rho+ u+ "
                                 "cannot hold with an outflow velocity u- < 0");
    }
    plus_ = eos::partials(*model_, plus_state());
}

FarFieldSpec FarFieldSpec::from_mach(eos::GasModelPtr model, eos::PhysicalParams phys, double v_plus,
                                     double theta_plus, double mach)
{
    if (!model) {
        throw ConfigError("far field requires a gas closure");
    }
    if (!(mach > 0.0) || !std::isfinite(mach)) {
        throw ConfigError("target Mach number must be positive and finite");
    }
    const eos::SoundSpeed c = eos::sound_speed_mach(*model, {v_plus, theta_plus}, 0.0);
    return FarFieldSpec(std::move(model), phys, v_plus, theta_plus, -mach * c.c);
}

double FarFieldSpec::s_plus() const
{
    return eos::entropy(*model_, plus_state());
}

Vec2 rhs(const FarFieldSpec& spec, double v, double theta)
{
    eos::validate(eos::ThermoState{v, theta});
    const double vp = spec.v_plus(), up = spec.u_plus();
    const double mu = spec.phys().mu, kappa = spec.phys().kappa;
    const double dv = v - vp;
    const double p = spec.model().pressure(v, theta);
    const double e = spec.model().internal_energy(v, theta);
    const double g1 = up / (mu * vp) * dv + vp / (mu * up) * (p - spec.p_plus());
    const double g2 = up / (kappa * vp) * (e - spec.e_plus()) - up * up * up / (2.0 * kappa * vp * vp * vp) * dv * dv +
                      up / (kappa * vp) * spec.p_plus() * dv;
    return {g1, g2};
}

Vec2 rhs_deviation(const FarFieldSpec& spec, const Vec2& dW)
{
    const double vp = spec.v_plus(), tp = spec.theta_plus(), up = spec.u_plus();
    const double mu = spec.phys().mu, kappa = spec.phys().kappa;
    const double dv = dW[0], dt = dW[1];
    const double cp = vp / (mu * up);
    const double ce = up / (kappa * vp);
    const double cv3 = up * up * up / (2.0 * kappa * vp * vp * vp);

    double dp, de;
    if (std::max(std::abs(dv) / vp, std::abs(dt) / tp) < kTaylorSwitch) {
        const eos::Partials& d = spec.plus_partials();
        dp = d.p_v * dv + d.p_theta * dt +
             0.5 * (d.p_vv * dv * dv + 2.0 * d.p_vtheta * dv * dt + d.p_thetatheta * dt * dt);
        de = d.e_v * dv + d.e_theta * dt +
             0.5 * (d.e_vv * dv * dv + 2.0 * d.e_vtheta * dv * dt + d.e_thetatheta * dt * dt);
    } else {
        const double v = vp + dv, theta = tp + dt;
        eos::validate(eos::ThermoState{v, theta});
        dp = spec.model().pressure(v, theta) - spec.p_plus();
        de = spec.model().internal_energy(v, theta) - spec.e_plus();
    }
    return {up / (mu * vp) * dv + cp * dp, ce * de - cv3 * dv * dv + ce * spec.p_plus() * dv};
}

Eigen::Matrix2d jacobian(const FarFieldSpec& spec, double v, double theta)
{
    const double vp = spec.v_plus(), up = spec.u_plus();
    const double mu = spec.phys().mu, kappa = spec.phys().kappa;
    const eos::Partials d = eos::first_partials(spec.model(), {v, theta});
    Eigen::Matrix2d J;
    J(0, 0) = up / (mu * vp) + vp / (mu * up) * d.p_v;
    J(0, 1) = vp / (mu * up) * d.p_theta;
    J(1, 0) = up / (kappa * vp) * d.e_v - up * up * up / (kappa * vp * vp * vp) * (v - vp) +
              up / (kappa * vp) * spec.p_plus();
    J(1, 1) = up / (kappa * vp) * d.e_theta;
    return J;
}

std::string to_string(Regime r)
{
    switch (r) {
    case Regime::Supersonic:
        return "supersonic";
    case Regime::Subsonic:
        return "subsonic";
    case Regime::Transonic:
        return "transonic";
    }
    return "unknown";
}

RegimeClass jacobian_plus(const FarFieldSpec& spec)
{
    const eos::ThermoState plus = spec.plus_state();
    const eos::TildeDerivatives td = eos::tilde_derivatives(spec.model(), plus);
    const eos::Partials& d = spec.plus_partials();
    const double vp = spec.v_plus(), tp = spec.theta_plus(), up = spec.u_plus();
    const double mu = spec.phys().mu, kappa = spec.phys().kappa;

    RegimeClass r;
    r.J(0, 0) = vp / (mu * up) * (up * up / (vp * vp) + d.p_v);
    r.J(0, 1) = vp / (mu * up) * d.p_theta;
    r.J(1, 0) = up / (kappa * vp) * (d.e_v + d.p);
    r.J(1, 1) = up / (kappa * vp) * d.e_theta;

    r.det_j = r.J(0, 0) * r.J(1, 1) - r.J(0, 1) * r.J(1, 0);
    r.det_j_identity = (up * up / (vp * vp) + td.p_v) * d.e_theta / (mu * kappa);
    r.trace_b = r.J(0, 0) + r.J(1, 1);
    r.trace_b_identity = vp / (mu * up) * (up * up / (vp * vp) + td.p_v + tp * d.p_theta * d.p_theta / d.e_theta) +
                         up / (kappa * vp) * d.e_theta;
    r.discriminant = r.trace_b * r.trace_b - 4.0 * r.det_j;
    r.discriminant_lower_bound = 4.0 * up * up * tp * d.p_theta * d.p_theta / (mu * kappa * vp * vp);

    // Roots of lambda^2 - b lambda + det = 0 without cancellation.
    const double sq = std::sqrt(std::max(r.discriminant, 0.0));
    const double big = r.trace_b <= 0.0 ? 0.5 * (r.trace_b - sq) : 0.5 * (r.trace_b + sq);
    const double small = big != 0.0 ? r.det_j / big : 0.0;
    r.lambda1 = std::min(big, small);
    r.lambda2 = std::max(big, small);

    r.mach = eos::sound_speed_mach(spec.model(), plus, up).mach;
    r.margin = std::abs(r.mach - 1.0);
    if (r.margin < eos::kTransonicTolerance) {
        r.kind = Regime::Transonic;
    } else {
        r.kind = r.mach > 1.0 ? Regime::Supersonic : Regime::Subsonic;
    }
    return r;
}

std::vector<RegimeClass> regime_sweep(const eos::GasModelPtr& model, eos::PhysicalParams phys, double v_plus,
                                      double theta_plus, double mach_lo, double mach_hi, std::size_t samples)
{
    if (samples < 2 || !(mach_lo > 0.0) || !(mach_hi > mach_lo)) {
        throw ConfigError("regime sweep needs 0 < mach_lo < mach_hi and at least two samples");
    }
    std::vector<RegimeClass> out;
    out.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double M = mach_lo + (mach_hi - mach_lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
        out.push_back(jacobian_plus(FarFieldSpec::from_mach(model, phys, v_plus, theta_plus, M)));
    }
    return out;
}

CenterManifoldData transonic_reduction(const FarFieldSpec& spec)
{
    const RegimeClass regime = jacobian_plus(spec);
    if (regime.kind != Regime::Transonic) {
        throw RegimeError("center-manifold reduction requires a transonic far field; |M+ - 1| = " +
                          std::to_string(regime.margin));
    }
    const eos::Partials& d = spec.plus_partials();
    const double vp = spec.v_plus(), tp = spec.theta_plus(), up = spec.u_plus();
    const double mu = spec.phys().mu, kappa = spec.phys().kappa;

    CenterManifoldData cm;
    cm.a11 = vp / (mu * up) * tp * d.p_theta * d.p_theta / d.e_theta;
    cm.a12 = vp / (mu * up) * d.p_theta;
    cm.a21 = up / (kappa * vp) * tp * d.p_theta;
    cm.a22 = up / (kappa * vp) * d.e_theta;
    cm.lambda2 = cm.a11 + cm.a22;
    if (!(cm.lambda2 < 0.0)) {
        throw AdmissibilityError("transonic reduction requires lambda2 = a11 + a22 < 0");
    }
    cm.b1 = tp * d.p_theta / d.e_theta;
    cm.b2 = mu * tp * up * up / (kappa * vp * vp);
    const double D = cm.b2 + cm.b1 * cm.b1;
    cm.B << 1.0, cm.b1, -cm.b1, cm.b2;
    cm.B_inv << cm.b2 / D, -cm.b1 / D, cm.b1 / D, 1.0 / D;

    const double b1 = cm.b1, b2 = cm.b2;
    const double qp = d.p_vv - 2.0 * b1 * d.p_vtheta + b1 * b1 * d.p_thetatheta;
    const double qe = d.e_vv - 2.0 * b1 * d.e_vtheta + b1 * b1 * d.e_thetatheta;
    const double kin = up * up / (2.0 * vp * vp);

    cm.a_plus = -vp * b2 / (mu * up * D) * qp + up * b1 / (kappa * vp * D) * (qe - kin);

    cm.ftilde1_quad = vp / (mu * up) * 0.5 * qp;
    cm.ftilde2_quad = up / (kappa * vp) * (0.5 * qe - kin);
    cm.a_plus_reduced = -(b2 * cm.ftilde1_quad - b1 * cm.ftilde2_quad) / D;
    cm.f2_quad = (b1 * cm.ftilde1_quad + cm.ftilde2_quad) / D;
    cm.h2 = -cm.f2_quad / cm.lambda2;

    if (!(cm.a_plus > 0.0) || !(cm.a_plus_reduced > 0.0)) {
        throw AdmissibilityError("transonic reduction: a+ <= 0 (a+ = " + std::to_string(cm.a_plus) +
                                 ", reduced " + std::to_string(cm.a_plus_reduced) +
                                 "); the closure violates the transonic sign conditions at the far field");
    }
    return cm;
}

double center_manifold_flow(const FarFieldSpec& spec, const CenterManifoldData& cm, double y1)
{
    const Eigen::Vector2d dW = cm.B * Eigen::Vector2d(y1, cm.h2 * y1 * y1);
    const Vec2 g = rhs_deviation(spec, {dW(0), dW(1)});
    return (cm.B_inv * Eigen::Vector2d(g[0], g[1]))(0);
}

std::vector<double> integrate_scalar_on_grid(const std::function<double(double)>& F, double y0, double L,
                                             std::size_t N, std::size_t substeps)
{
    if (N == 0 || substeps == 0 || !(L > 0.0)) {
        throw ConfigError("scalar integration needs L > 0, N > 0 and at least one substep");
    }
    std::vector<double> y(N + 1);
    y[0] = y0;
    const double h = L / static_cast<double>(N) / static_cast<double>(substeps);
    auto f = [&F](double, const ode::Vec<1>& s) { return ode::Vec<1>{F(s[0])}; };
    ode::Vec<1> s{y0};
    for (std::size_t i = 1; i <= N; ++i) {
        for (std::size_t k = 0; k < substeps; ++k) {
            s = ode::rk4_step<1>(f, 0.0, s, h);
        }
        y[i] = s[0];
    }
    return y;
}

double solve_y10_for_u_minus(const FarFieldSpec& spec, const CenterManifoldData& cm, double u_minus, double y_max)
{
    const double m = spec.mass_flux();
    auto residual = [&](double y) {
        const double dv = y + cm.b1 * cm.h2 * y * y;
        return m * dv - (u_minus - spec.u_plus());
    };
    const double r0 = residual(0.0), r1 = residual(y_max);
    if (r0 == 0.0) {
        return 0.0;
    }
    if (r0 * r1 > 0.0) {
        throw AdmissibilityError("requested u- is not reached by seeds y10 in (0, " + std::to_string(y_max) + "]");
    }
    std::uintmax_t iters = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(residual, 0.0, y_max, r0, r1,
                                                            boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (lo + hi);
}

double default_transonic_length(const CenterManifoldData& cm, double y10)
{
    if (!(y10 > 0.0)) {
        throw ConfigError("default transonic length needs y10 > 0");
    }
    return 50.0 / (cm.a_plus_reduced * y10);
}

double default_nondegenerate_length(const RegimeClass& regime)
{
    double slowest;
    switch (regime.kind) {
    case Regime::Supersonic:
        slowest = std::abs(regime.lambda2);
        break;
    case Regime::Subsonic:
        slowest = std::abs(regime.lambda1);
        break;
    default:
        throw RegimeError("non-degenerate length requested for a transonic far field");
    }
    return 30.0 / slowest;
}

StationaryProfile build_transonic_profile(const FarFieldSpec& spec, double y10, double L, std::size_t N,
                                          const ProfileOptions& options)
{
    const RegimeClass regime = jacobian_plus(spec);
    const CenterManifoldData cm = transonic_reduction(spec);
    if (!(y10 >= 0.0) || !std::isfinite(y10)) {
        throw AdmissibilityError("transonic seed y10 must be positive: for y10 < 0 the reduced dynamics "
                                 "y' = -a y^2 blows up forward");
    }
    if (y10 > options.delta0) {
        throw AdmissibilityError("transonic seed y10 = " + std::to_string(y10) + " exceeds the small-data threshold " +
                                 std::to_string(options.delta0));
    }
    const double lambda_max = std::abs(cm.lambda2);
    check_grid(L, N, lambda_max);
    if (y10 == 0.0) {
        StationaryProfile p = constant_profile(spec, regime, L, N);
        p.manifold = cm;
        p.z.assign(N + 1, 0.0);
        return p;
    }

    StationaryProfile p = make_profile(spec, regime, L, N);
    p.manifold = cm;
    p.seed = y10;
    p.substeps = substeps_for(p.dx(), lambda_max, options.step_factor);

    auto flow = [&](double y) { return center_manifold_flow(spec, cm, y); };
    p.z = integrate_scalar_on_grid(flow, y10, L, N, p.substeps);

    if (options.method == TransonicMethod::FullForward) {
        const Eigen::Vector2d dW0 = cm.B * Eigen::Vector2d(y10, cm.h2 * y10 * y10);
        Trajectory t = integrate_nodes(spec, {dW0(0), dW0(1)}, true, L, N, p.substeps);
        if (options.refinement_check) {
            const Trajectory fine = integrate_nodes(spec, {dW0(0), dW0(1)}, true, L, N, 2 * p.substeps);
            p.refinement_change = sup_difference(t.dv, fine.dv);
        }
        p.dv = std::move(t.dv);
        p.dtheta = std::move(t.dtheta);
        fill_from_deviation(p);
    } else {
        if (options.refinement_check) {
            const std::vector<double> fine = integrate_scalar_on_grid(flow, y10, L, N, 2 * p.substeps);
            double change = 0.0;
            for (std::size_t i = 0; i <= N; ++i) {
                const double a = p.z[i], b = fine[i];
                change = std::max(change, std::abs((a - b) + cm.b1 * cm.h2 * (a * a - b * b)));
            }
            p.refinement_change = change;
        }
        // W = W+ + B (z, h2 z^2), derivatives by the chain rule through z.
        const double m = spec.mass_flux();
        const std::size_t n = N + 1;
        p.dv.resize(n);
        p.dtheta.resize(n);
        p.v.resize(n);
        p.u.resize(n);
        p.theta.resize(n);
        p.v_x.resize(n);
        p.u_x.resize(n);
        p.theta_x.resize(n);
        p.v_xx.resize(n);
        p.u_xx.resize(n);
        p.theta_xx.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double z = p.z[i];
            const double F = flow(z);
            const double hz = 1e-4 * std::max(std::abs(z), 1e-8);
            const double Fz = (flow(z + hz) - flow(z - hz)) / (2.0 * hz);
            const double z_xx = Fz * F;
            const Eigen::Vector2d dW = cm.B * Eigen::Vector2d(z, cm.h2 * z * z);
            const Eigen::Vector2d Wx = cm.B * Eigen::Vector2d(1.0, 2.0 * cm.h2 * z) * F;
            const Eigen::Vector2d Wxx =
                cm.B * (Eigen::Vector2d(1.0, 2.0 * cm.h2 * z) * z_xx + Eigen::Vector2d(0.0, 2.0 * cm.h2) * F * F);
            p.dv[i] = dW(0);
            p.dtheta[i] = dW(1);
            p.v[i] = spec.v_plus() + dW(0);
            p.theta[i] = spec.theta_plus() + dW(1);
            p.u[i] = m * p.v[i];
            p.v_x[i] = Wx(0);
            p.theta_x[i] = Wx(1);
            p.u_x[i] = m * Wx(0);
            p.v_xx[i] = Wxx(0);
            p.theta_xx[i] = Wxx(1);
            p.u_xx[i] = m * Wxx(0);
        }
    }
    record_boundary(p);
    return p;
}

StationaryProfile build_nondegenerate_profile(const FarFieldSpec& spec, double eps, double L, std::size_t N,
                                              const ProfileOptions& options)
{
    const RegimeClass regime = jacobian_plus(spec);
    if (regime.kind == Regime::Transonic) {
        throw RegimeError("non-degenerate profile requested for a transonic far field; use the transonic builder");
    }
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
        throw AdmissibilityError("seed amplitude eps must be non-negative");
    }
    if (eps > options.delta0) {
        throw AdmissibilityError("seed amplitude eps = " + std::to_string(eps) + " exceeds the small-data threshold " +
                                 std::to_string(options.delta0));
    }
    const double lambda_max = std::max(std::abs(regime.lambda1), std::abs(regime.lambda2));
    check_grid(L, N, lambda_max);
    if (eps == 0.0) {
        return constant_profile(spec, regime, L, N);
    }

    StationaryProfile p = make_profile(spec, regime, L, N);
    p.seed = eps;
    p.substeps = substeps_for(p.dx(), lambda_max, options.step_factor);

    Vec2 start;
    bool forward;
    if (regime.kind == Regime::Supersonic) {
        const Eigen::Vector2d r1 = eigenvector(regime.J, regime.lambda1);
        const Eigen::Vector2d r2 = eigenvector(regime.J, regime.lambda2);
        const Eigen::Vector2d n = options.supersonic_weights[0] * r1 + options.supersonic_weights[1] * r2;
        if (!(n.norm() > 0.0)) {
            throw ConfigError("supersonic seed weights give a zero direction");
        }
        const Eigen::Vector2d dW0 = eps * n.normalized();
        start = {dW0(0), dW0(1)};
        forward = true;
    } else {
        const Eigen::Vector2d r1 = eigenvector(regime.J, regime.lambda1);
        const Eigen::Vector2d dWL = eps * std::exp(regime.lambda1 * L) * r1;
        start = {dWL(0), dWL(1)};
        forward = false;
    }

    Trajectory t = integrate_nodes(spec, start, forward, L, N, p.substeps);
    if (options.refinement_check) {
        const Trajectory fine = integrate_nodes(spec, start, forward, L, N, 2 * p.substeps);
        p.refinement_change = sup_difference(t.dv, fine.dv);
    }
    p.dv = std::move(t.dv);
    p.dtheta = std::move(t.dtheta);
    fill_from_deviation(p);
    record_boundary(p);
    return p;
}

// ---------------------------------------------------------------------------

std::pair<double, double> algebraic_window(const StationaryProfile& p)
{
    return {p.L / 10.0, p.L};
}

std::pair<double, double> exponential_window(const StationaryProfile& p)
{
    return {p.L / 3.0, 2.0 * p.L / 3.0};
}

namespace {

// Fourth-order centered first difference at interior nodes 2..N-2.
double max_fd_mismatch(const std::vector<double>& f, const std::vector<double>& fx, double dx)
{
    double m = 0.0;
    for (std::size_t i = 2; i + 2 < f.size(); ++i) {
        const double d = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * dx);
        m = std::max(m, std::abs(d - fx[i]));
    }
    return m;
}

} // namespace

ProfileReport verify_profile(const StationaryProfile& p)
{
    const FarFieldSpec& s = p.far;
    const double m = s.mass_flux();
    const double up = s.u_plus(), pp = s.p_plus();
    const double mu = s.phys().mu, kappa = s.phys().kappa;

    ProfileReport r;
    r.momentum_scale = std::abs(m * up + pp);
    r.v_min = r.v_max = p.v.front();
    r.theta_min = r.theta_max = p.theta.front();
    for (std::size_t i = 0; i < p.v.size(); ++i) {
        const double du = m * p.dv[i];
        const double dp = s.model().pressure(p.v[i], p.theta[i]) - pp;
        const double de = s.model().internal_energy(p.v[i], p.theta[i]) - s.e_plus();
        r.mass_residual = std::max(r.mass_residual, std::abs(p.u[i] / p.v[i] - m));
        const double mom = m * du + dp - mu * p.u_x[i];
        r.momentum_residual = std::max(r.momentum_residual, std::abs(mom));
        // rho u (e + u^2/2) + p u - kappa theta_x - mu u u_x, relative to the far field
        const double pu = p.u[i] * dp + pp * du;
        const double en = m * (de + 0.5 * du * (p.u[i] + up)) + pu - kappa * p.theta_x[i] - mu * p.u[i] * p.u_x[i];
        r.energy_residual = std::max(r.energy_residual, std::abs(en));
        r.v_min = std::min(r.v_min, p.v[i]);
        r.v_max = std::max(r.v_max, p.v[i]);
        r.theta_min = std::min(r.theta_min, p.theta[i]);
        r.theta_max = std::max(r.theta_max, p.theta[i]);
    }
    const double dx = p.dx();
    r.derivative_consistency = std::max({max_fd_mismatch(p.v, p.v_x, dx), max_fd_mismatch(p.theta, p.theta_x, dx),
                                         max_fd_mismatch(p.v_x, p.v_xx, dx),
                                         max_fd_mismatch(p.theta_x, p.theta_xx, dx)});
    for (std::size_t i = 1; i + 1 < p.dv.size(); ++i) {
        if (std::abs(p.dv[i + 1]) > std::abs(p.dv[i]) * (1.0 + 1e-12) + 1e-300) {
            r.monotone = false;
            break;
        }
    }

    const bool nontrivial = p.seed > 0.0;
    if (p.regime.kind == Regime::Transonic && nontrivial && !p.z.empty()) {
        r.has_tail = true;
        r.tail_lo = p.L / 2.0;
        r.tail_hi = p.L;
        double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1, sum1 = 0;
        double lo2 = lo1, hi2 = -lo1, sum2 = 0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < p.x.size(); ++i) {
            if (p.x[i] < r.tail_lo) {
                continue;
            }
            const double z2 = p.z[i] * p.z[i];
            const double q1 = p.u_x[i] / z2, q2 = p.theta_x[i] / z2;
            lo1 = std::min(lo1, q1);
            hi1 = std::max(hi1, q1);
            lo2 = std::min(lo2, q2);
            hi2 = std::max(hi2, q2);
            sum1 += q1;
            sum2 += q2;
            ++count;
        }
        r.a1 = sum1 / static_cast<double>(count);
        r.a2 = sum2 / static_cast<double>(count);
        r.a1_variation = (hi1 - lo1) / std::abs(r.a1);
        r.a2_variation = (hi2 - lo2) / std::abs(r.a2);

        const auto [wlo, whi] = algebraic_window(p);
        r.tail_gradients_positive = true;
        for (std::size_t i = 0; i < p.x.size(); ++i) {
            if (p.x[i] >= wlo && p.x[i] <= whi && !(p.u_x[i] > 0.0 && p.theta_x[i] > 0.0)) {
                r.tail_gradients_positive = false;
            }
        }
        r.z_lower = std::numeric_limits<double>::infinity();
        r.z_upper = 0.0;
        for (std::size_t i = 0; i < p.x.size(); ++i) {
            const double q = p.z[i] * (1.0 + p.delta * p.x[i]) / p.delta;
            r.z_lower = std::min(r.z_lower, q);
            r.z_upper = std::max(r.z_upper, q);
        }
        r.decay_slope_k0 = fit::fit_algebraic_decay(p.x, p.dv, p.delta, wlo, whi).slope;
        r.decay_slope_k1 = fit::fit_algebraic_decay(p.x, p.v_x, p.delta, wlo, whi).slope;
    } else if (p.regime.kind != Regime::Transonic && nontrivial) {
        const auto [wlo, whi] = exponential_window(p);
        r.exponential_rate = -fit::fit_exponential_decay(p.x, p.dv, wlo, whi).slope;
    }
    return r;
}

nlohmann::json to_json(const RegimeClass& r)
{
    return {{"kind", to_string(r.kind)},
            {"mach", number(r.mach)},
            {"margin", number(r.margin)},
            {"J", matrix_json(r.J)},
            {"det_j", number(r.det_j)},
            {"det_j_identity", number(r.det_j_identity)},
            {"trace_b", number(r.trace_b)},
            {"trace_b_identity", number(r.trace_b_identity)},
            {"discriminant", number(r.discriminant)},
            {"discriminant_lower_bound", number(r.discriminant_lower_bound)},
            {"lambda1", number(r.lambda1)},
            {"lambda2", number(r.lambda2)}};
}

nlohmann::json to_json(const CenterManifoldData& cm)
{
    return {{"a11", number(cm.a11)},
            {"a12", number(cm.a12)},
            {"a21", number(cm.a21)},
            {"a22", number(cm.a22)},
            {"lambda2", number(cm.lambda2)},
            {"b1", number(cm.b1)},
            {"b2", number(cm.b2)},
            {"B", matrix_json(cm.B)},
            {"B_inv", matrix_json(cm.B_inv)},
            {"a_plus", number(cm.a_plus)},
            {"a_plus_reduced", number(cm.a_plus_reduced)},
            {"ftilde1_quad", number(cm.ftilde1_quad)},
            {"ftilde2_quad", number(cm.ftilde2_quad)},
            {"f2_quad", number(cm.f2_quad)},
            {"h2", number(cm.h2)}};
}

nlohmann::json to_json(const ProfileReport& r)
{
    nlohmann::json j = {{"mass_residual", number(r.mass_residual)},
                        {"momentum_residual", number(r.momentum_residual)},
                        {"energy_residual", number(r.energy_residual)},
                        {"momentum_scale", number(r.momentum_scale)},
                        {"derivative_consistency", number(r.derivative_consistency)},
                        {"monotone", r.monotone},
                        {"v_bounds", {number(r.v_min), number(r.v_max)}},
                        {"theta_bounds", {number(r.theta_min), number(r.theta_max)}}};
    if (r.has_tail) {
        j["tail"] = {{"window", {number(r.tail_lo), number(r.tail_hi)}},
                     {"a1", number(r.a1)},
                     {"a2", number(r.a2)},
                     {"a1_variation", number(r.a1_variation)},
                     {"a2_variation", number(r.a2_variation)},
                     {"gradients_positive", r.tail_gradients_positive},
                     {"z_lower", number(r.z_lower)},
                     {"z_upper", number(r.z_upper)},
                     {"decay_slope_k0", number(r.decay_slope_k0)},
                     {"decay_slope_k1", number(r.decay_slope_k1)}};
    } else {
        j["exponential_rate"] = number(r.exponential_rate);
    }
    return j;
}

nlohmann::json profile_header(const StationaryProfile& p, const ProfileReport& report)
{
    nlohmann::json j = {{"regime", to_json(p.regime)},
                        {"far_field",
                         {{"v_plus", p.far.v_plus()},
                          {"theta_plus", p.far.theta_plus()},
                          {"u_plus", p.far.u_plus()},
                          {"rho_plus", p.far.rho_plus()},
                          {"p_plus", p.far.p_plus()},
                          {"e_plus", p.far.e_plus()}}},
                        {"closure", {{"name", p.far.model().name()}, {"params", p.far.model().parameters()}}},
                        {"physics", {{"mu", p.far.phys().mu}, {"kappa", p.far.phys().kappa}}},
                        {"L", p.L},
                        {"N", p.N},
                        {"seed", p.seed},
                        {"substeps", p.substeps},
                        {"boundary", {{"u_minus", p.u_minus}, {"theta_minus", p.theta_minus}, {"delta", p.delta}}},
                        {"refinement_change", number(p.refinement_change)},
                        {"residuals", to_json(report)}};
    if (p.manifold) {
        j["center_manifold"] = to_json(*p.manifold);
    }
    return j;
}

} // namespace outflow::stationary
