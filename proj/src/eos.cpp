#include "outflow/eos.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace outflow::eos {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string describe(const ThermoState& st)
{
    std::ostringstream os;
    os.precision(17);
    os << "(v=" << st.v << ", theta=" << st.theta << ")";
    return os.str();
}

// Makes x + h exactly representable so that the stencil width is exact.
double exact_step(double x, double h)
{
    volatile double xh = x + h;
    return xh - x;
}

struct Field {
    const GasModel& model;
    bool energy;
    double operator()(double v, double theta) const
    {
        return energy ? model.internal_energy(v, theta) : model.pressure(v, theta);
    }
};

void require_stencil(const ThermoState& st, double hv, double ht)
{
    if (st.v - hv <= 0.0 || st.theta - ht <= 0.0) {
        throw DomainError("finite-difference stencil leaves the domain at " + describe(st));
    }
}

struct FirstDerivs {
    double f, f_v, f_t;
};

FirstDerivs first_fd(const Field& f, const ThermoState& st)
{
    const double hv = exact_step(st.v, fd_steps(st.v).first);
    const double ht = exact_step(st.theta, fd_steps(st.theta).first);
    require_stencil(st, hv, ht);
    FirstDerivs d;
    d.f = f(st.v, st.theta);
    d.f_v = (f(st.v + hv, st.theta) - f(st.v - hv, st.theta)) / (2.0 * hv);
    d.f_t = (f(st.v, st.theta + ht) - f(st.v, st.theta - ht)) / (2.0 * ht);
    return d;
}

struct SecondDerivs {
    double f_vv, f_vt, f_tt;
};

// Centered second differences at steps h and h/2, combined by one Richardson level.
SecondDerivs second_fd(const Field& f, const ThermoState& st, double f0)
{
    const double Hv = exact_step(st.v, fd_steps(st.v).second);
    const double Ht = exact_step(st.theta, fd_steps(st.theta).second);
    require_stencil(st, Hv, Ht);
    const double v = st.v;
    const double t = st.theta;

    auto level = [&](double hv, double ht) {
        SecondDerivs d;
        d.f_vv = (f(v + hv, t) - 2.0 * f0 + f(v - hv, t)) / (hv * hv);
        d.f_tt = (f(v, t + ht) - 2.0 * f0 + f(v, t - ht)) / (ht * ht);
        d.f_vt = (f(v + hv, t + ht) - f(v + hv, t - ht) - f(v - hv, t + ht) + f(v - hv, t - ht)) / (4.0 * hv * ht);
        return d;
    };
    const SecondDerivs coarse = level(Hv, Ht);
    const SecondDerivs fine = level(0.5 * Hv, 0.5 * Ht);
    return {(4.0 * fine.f_vv - coarse.f_vv) / 3.0, (4.0 * fine.f_vt - coarse.f_vt) / 3.0,
            (4.0 * fine.f_tt - coarse.f_tt) / 3.0};
}

double integrate(const std::function<double(double)>& f, double a, double b, bool smooth)
{
    if (a == b) {
        return 0.0;
    }
    // Mapped to [0, 1]: the adaptive error estimate stalls on short raw intervals.
    // Finite-difference integrands carry noise near eps^(2/3), so their
    // tolerance sits above it or the refinement never terminates early.
    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 21>;
    const double h = b - a;
    return Quadrature::integrate([&](double t) { return h * f(a + t * h); }, 0.0, 1.0, smooth ? 15 : 8,
                                 smooth ? 1e-14 : 1e-10);
}

// d s along v at fixed theta: p_theta(v, theta).
double volume_leg(const GasModel& model, double theta, double v0, double v1)
{
    return integrate([&](double v) { return first_partials(model, {v, theta}).p_theta; }, v0, v1,
                     model.has_analytic_partials());
}

// d s along theta at fixed v: e_theta(v, theta) / theta.
double temperature_leg(const GasModel& model, double v, double t0, double t1)
{
    return integrate(
        [&](double t) { return first_partials(model, {v, t}).e_theta / t; }, t0, t1, model.has_analytic_partials());
}

// Solves s(v, theta) - s(base) = ds for theta.
double theta_from_entropy_offset(const GasModel& model, const ThermoState& base, double v, double ds)
{
    validate(base);
    if (!(v > 0.0) || !std::isfinite(v) || !std::isfinite(ds)) {
        throw DomainError("entropy inversion requires v > 0 and finite s");
    }
    const double offset = volume_leg(model, base.theta, base.v, v) - ds;
    auto residual = [&](double t) { return offset + temperature_leg(model, v, base.theta, t); };

    double lo = base.theta;
    double hi = base.theta;
    double f_lo = residual(lo);
    if (f_lo == 0.0) {
        return lo;
    }
    double f_hi = f_lo;
    constexpr int kMaxGrowth = 200;
    int grown = 0;
    if (f_lo < 0.0) {
        while (f_hi < 0.0) {
            lo = hi;
            f_lo = f_hi;
            hi *= 2.0;
            f_hi = residual(hi);
            if (++grown > kMaxGrowth || !std::isfinite(f_hi)) {
                throw DomainError("entropy inversion failed to bracket theta at v=" + std::to_string(v));
            }
        }
    } else {
        while (f_lo > 0.0) {
            hi = lo;
            f_hi = f_lo;
            lo *= 0.5;
            f_lo = residual(lo);
            if (++grown > kMaxGrowth || !std::isfinite(f_lo)) {
                throw DomainError("entropy inversion failed to bracket theta at v=" + std::to_string(v));
            }
        }
    }
    if (f_lo == 0.0) {
        return lo;
    }
    if (f_hi == 0.0) {
        return hi;
    }
    std::uintmax_t max_iter = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        residual, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2),
        max_iter);
    return 0.5 * (bracket.first + bracket.second);
}

} // namespace

void validate(const ThermoState& st)
{
    if (!(st.v > 0.0) || !(st.theta > 0.0) || !std::isfinite(st.v) || !std::isfinite(st.theta)) {
        throw DomainError("thermodynamic state outside the domain v > 0, theta > 0: " + describe(st));
    }
}

void validate(const PhysicalParams& phys)
{
    if (!(phys.mu > 0.0) || !(phys.kappa > 0.0) || !std::isfinite(phys.mu) || !std::isfinite(phys.kappa)) {
        throw DomainError("viscosity and heat conductivity must be positive");
    }
}

GasModel::GasModel(ThermoState reference) : reference_(reference)
{
    validate(reference_);
}

Partials GasModel::analytic_partials(double, double) const
{
    throw std::logic_error("closure '" + name() + "' does not provide analytic partials");
}

FiniteDifferenceSteps fd_steps(double x)
{
    static const double first = std::cbrt(kEps);
    static const double second = std::pow(kEps, 1.0 / 6.0);
    const double scale = std::max(1.0, std::abs(x));
    return {first * scale, second * scale};
}

Partials first_partials(const GasModel& model, const ThermoState& st)
{
    validate(st);
    if (model.has_analytic_partials()) {
        return model.analytic_partials(st.v, st.theta);
    }
    const FirstDerivs p = first_fd(Field{model, false}, st);
    const FirstDerivs e = first_fd(Field{model, true}, st);
    Partials out;
    out.p = p.f;
    out.p_v = p.f_v;
    out.p_theta = p.f_t;
    out.e = e.f;
    out.e_v = e.f_v;
    out.e_theta = e.f_t;
    return out;
}

Partials partials(const GasModel& model, const ThermoState& st)
{
    validate(st);
    if (model.has_analytic_partials()) {
        return model.analytic_partials(st.v, st.theta);
    }
    Partials out = first_partials(model, st);
    const SecondDerivs p2 = second_fd(Field{model, false}, st, out.p);
    const SecondDerivs e2 = second_fd(Field{model, true}, st, out.e);
    out.p_vv = p2.f_vv;
    out.p_vtheta = p2.f_vt;
    out.p_thetatheta = p2.f_tt;
    out.e_vv = e2.f_vv;
    out.e_vtheta = e2.f_vt;
    out.e_thetatheta = e2.f_tt;
    return out;
}

double entropy_difference(const GasModel& model, const ThermoState& a, const ThermoState& b, PathOrder order)
{
    validate(a);
    validate(b);
    if (order == PathOrder::VolumeFirst) {
        return volume_leg(model, a.theta, a.v, b.v) + temperature_leg(model, b.v, a.theta, b.theta);
    }
    return temperature_leg(model, a.v, a.theta, b.theta) + volume_leg(model, b.theta, a.v, b.v);
}

double entropy(const GasModel& model, const ThermoState& st)
{
    return entropy_difference(model, model.reference(), st);
}

double theta_from_entropy(const GasModel& model, double v, double s)
{
    return theta_from_entropy_offset(model, model.reference(), v, s);
}

double tilde_pressure(const GasModel& model, double v, double s)
{
    return model.pressure(v, theta_from_entropy(model, v, s));
}

TildeDerivatives tilde_derivatives(const GasModel& model, const ThermoState& st)
{
    const Partials d = first_partials(model, st);
    if (!(d.p_v < 0.0) || !(d.e_theta > 0.0)) {
        throw RegimeError("basic conditions p_rho > 0, e_theta > 0 violated at " + describe(st));
    }
    const double ratio = st.theta * d.p_theta / d.e_theta;
    TildeDerivatives t;
    t.p_v = d.p_v - ratio * d.p_theta;
    t.p_s = ratio;
    t.theta_v = -ratio;
    t.theta_s = st.theta / d.e_theta;
    t.e_vv = -t.p_v;
    t.e_vs = -ratio;
    t.e_ss = st.theta / d.e_theta;
    return t;
}

SecondTildeDerivatives second_tilde_derivatives(const GasModel& model, const ThermoState& st)
{
    const TildeDerivatives first = tilde_derivatives(model, st);
    const double e_theta = st.theta / first.theta_s;

    const double Hv = exact_step(st.v, fd_steps(st.v).second);
    const double Hs = fd_steps(1.0).second * e_theta;
    if (st.v - Hv <= 0.0) {
        throw DomainError("finite-difference stencil leaves the domain at " + describe(st));
    }

    // p~ at (v + dv, s(st) + ds), anchored at st so only short paths are integrated.
    auto P = [&](double dv, double ds) {
        const double v = st.v + dv;
        return model.pressure(v, theta_from_entropy_offset(model, st, v, ds));
    };
    const double p0 = model.pressure(st.v, st.theta);

    auto level = [&](double hv, double hs) {
        SecondTildeDerivatives d;
        d.p_vv = (P(hv, 0.0) - 2.0 * p0 + P(-hv, 0.0)) / (hv * hv);
        d.p_ss = (P(0.0, hs) - 2.0 * p0 + P(0.0, -hs)) / (hs * hs);
        d.p_vs = (P(hv, hs) - P(hv, -hs) - P(-hv, hs) + P(-hv, -hs)) / (4.0 * hv * hs);
        return d;
    };
    const SecondTildeDerivatives coarse = level(Hv, Hs);
    const SecondTildeDerivatives fine = level(0.5 * Hv, 0.5 * Hs);
    return {(4.0 * fine.p_vv - coarse.p_vv) / 3.0, (4.0 * fine.p_vs - coarse.p_vs) / 3.0,
            (4.0 * fine.p_ss - coarse.p_ss) / 3.0};
}

SoundSpeed sound_speed_mach(const GasModel& model, const ThermoState& st, double u)
{
    const TildeDerivatives t = tilde_derivatives(model, st);
    if (!(t.p_v < 0.0)) {
        throw RegimeError("p~_v >= 0: sound speed undefined at " + describe(st));
    }
    SoundSpeed out;
    out.c = std::sqrt(-st.v * st.v * t.p_v);
    out.mach = std::abs(u) / out.c;
    return out;
}

ConditionReport check_conditions(const GasModel& model, const ThermoState& plus_state, double u_plus)
{
    validate(plus_state);
    if (!std::isfinite(u_plus) || u_plus == 0.0) {
        throw DomainError("far-field velocity must be finite and nonzero");
    }
    ConditionReport r;
    r.plus_state = plus_state;
    r.u_plus = u_plus;
    r.rho_plus = plus_state.rho();

    const Partials d = partials(model, plus_state);
    r.basic_ok = d.p_v < 0.0 && d.e_theta > 0.0;
    if (!r.basic_ok) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.tilde_pv = r.tilde_ps = r.mach = nan;
        r.beta1 = r.beta2 = r.beta3 = nan;
        return r;
    }

    const TildeDerivatives t = tilde_derivatives(model, plus_state);
    r.tilde_pv = t.p_v;
    r.tilde_ps = t.p_s;
    r.mach = sound_speed_mach(model, plus_state, u_plus).mach;
    r.transonic = std::abs(r.mach - 1.0) < kTransonicTolerance;

    r.p_theta_positive = d.p_theta > 0.0;
    r.p_vv_nonnegative = d.p_vv >= 0.0;
    r.p_thetatheta_nonnegative = d.p_thetatheta >= 0.0;
    r.p_vtheta_nonpositive = d.p_vtheta <= 0.0;
    r.e_vv_nonpositive = d.e_vv <= 0.0;
    r.e_thetatheta_nonpositive = d.e_thetatheta <= 0.0;
    r.transonic_extra_ok = r.p_theta_positive && r.p_vv_nonnegative && r.p_thetatheta_nonnegative &&
                           r.p_vtheta_nonpositive && r.e_vv_nonpositive && r.e_thetatheta_nonpositive;

    const SecondTildeDerivatives s2 = second_tilde_derivatives(model, plus_state);
    r.p_vv_s = s2.p_vv;
    r.p_vs_s = s2.p_vs;
    r.p_ss_s = s2.p_ss;

    const double v = plus_state.v;
    const double off_vs = s2.p_vs + t.p_s / (2.0 * v);
    r.beta1 = s2.p_vv + t.p_v / v;
    r.beta2 = r.beta1 * s2.p_ss - off_vs * off_vs;
    r.beta3 = -4.0 * v * t.p_v * r.beta2 - t.p_s * t.p_s * r.beta1;
    r.beta_ok = r.beta1 > 0.0 && r.beta2 > 0.0 && r.beta3 > 0.0;

    const double off_su = t.p_s / (2.0 * u_plus);
    r.matrix_A = {{{r.beta1, off_vs, 0.0}, {off_vs, s2.p_ss, off_su}, {0.0, off_su, r.rho_plus}}};
    const auto& A = r.matrix_A;
    r.minors[0] = A[0][0];
    r.minors[1] = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    r.minors[2] = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
                  A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
    r.minors_ok = r.minors[0] > 0.0 && r.minors[1] > 0.0 && r.minors[2] > 0.0;
    r.minor3_closed_form =
        (-4.0 * v * t.p_v * r.minors[1] - t.p_s * t.p_s * r.minors[0]) / (4.0 * u_plus * u_plus);
    return r;
}

nlohmann::json to_json(const ConditionReport& r)
{
    nlohmann::json j;
    j["v_plus"] = r.plus_state.v;
    j["theta_plus"] = r.plus_state.theta;
    j["u_plus"] = r.u_plus;
    j["rho_plus"] = r.rho_plus;
    j["mach"] = r.mach;
    j["transonic"] = r.transonic;
    j["basic_ok"] = r.basic_ok;
    j["tilde_pv"] = r.tilde_pv;
    j["tilde_ps"] = r.tilde_ps;
    j["transonic_conditions"] = {
        {"p_theta_positive", r.p_theta_positive},
        {"p_vv_nonnegative", r.p_vv_nonnegative},
        {"p_thetatheta_nonnegative", r.p_thetatheta_nonnegative},
        {"p_vtheta_nonpositive", r.p_vtheta_nonpositive},
        {"e_vv_nonpositive", r.e_vv_nonpositive},
        {"e_thetatheta_nonpositive", r.e_thetatheta_nonpositive},
        {"all", r.transonic_extra_ok},
    };
    j["p_vs_chart"] = {{"p_vv", r.p_vv_s}, {"p_vs", r.p_vs_s}, {"p_ss", r.p_ss_s}};
    j["beta"] = {{"beta1", r.beta1}, {"beta2", r.beta2}, {"beta3", r.beta3}, {"all_positive", r.beta_ok}};
    j["matrix_A"] = r.matrix_A;
    j["minors"] = r.minors;
    j["minors_positive"] = r.minors_ok;
    j["minor3_closed_form"] = r.minor3_closed_form;
    j["all_ok"] = r.all_ok();
    return j;
}

} // namespace outflow::eos
