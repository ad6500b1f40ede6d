#pragma once

// Equation-of-state layer: closures p(v,theta), e(v,theta), entropy by
// integration of the second law, (v,s)-chart derivatives, sound speed, and the
// sign conditions required by the boundary-layer and stability analysis.

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "outflow/errors.hpp"

namespace outflow::eos {

/// Thermodynamic state in the (specific volume, temperature) chart.
struct ThermoState {
    double v = 1.0;
    double theta = 1.0;

    double rho() const { return 1.0 / v; }
};

/// Throws DomainError unless v > 0, theta > 0 and both are finite.
void validate(const ThermoState& st);

struct PhysicalParams {
    double mu = 1.0;
    double kappa = 1.0;
};

void validate(const PhysicalParams& phys);

/// p, e and their partials in (v, theta).
struct Partials {
    double p = 0, e = 0;
    double p_v = 0, p_theta = 0, e_v = 0, e_theta = 0;
    double p_vv = 0, p_vtheta = 0, p_thetatheta = 0;
    double e_vv = 0, e_vtheta = 0, e_thetatheta = 0;
};

/// Pressure/energy closure. Implementations must satisfy the Maxwell relation
/// e_v = theta p_theta - p; entropy is defined by integrating
/// ds = p_theta dv + (e_theta / theta) dtheta from reference().
class GasModel {
public:
    virtual ~GasModel() = default;

    virtual std::string name() const = 0;
    virtual double pressure(double v, double theta) const = 0;
    virtual double internal_energy(double v, double theta) const = 0;

    /// Closures overriding analytic_partials() return true here.
    virtual bool has_analytic_partials() const { return false; }
    virtual Partials analytic_partials(double v, double theta) const;

    virtual nlohmann::json parameters() const = 0;

    /// State at which s := 0.
    const ThermoState& reference() const { return reference_; }

protected:
    explicit GasModel(ThermoState reference);

private:
    ThermoState reference_;
};

using GasModelPtr = std::shared_ptr<const GasModel>;

/// p = R theta / v,  e = R theta / (gamma - 1); the entropy reference is placed
/// on the isentrope p v^gamma = A at v = 1.
struct IdealPolytropicParams {
    double gamma = 1.4;
    double R = 1.0;
    double A = 1.0;
};

class IdealPolytropicGas final : public GasModel {
public:
    explicit IdealPolytropicGas(IdealPolytropicParams params);

    std::string name() const override { return "ideal-polytropic"; }
    double pressure(double v, double theta) const override;
    double internal_energy(double v, double theta) const override;
    bool has_analytic_partials() const override { return true; }
    Partials analytic_partials(double v, double theta) const override;
    nlohmann::json parameters() const override;

    const IdealPolytropicParams& params() const { return params_; }

    /// s = (R/(gamma-1)) ln(p v^gamma / A), used only as an independent check.
    double closed_form_entropy(double v, double theta) const;

private:
    IdealPolytropicParams params_;
};

// ---------------------------------------------------------------------------
// Closure registry

using ClosureFactory = std::function<GasModelPtr(const nlohmann::json& params)>;

/// Registered names: "ideal-polytropic", "van-der-waals", "power-law".
/// Factories reject unknown parameter keys with ConfigError.
GasModelPtr make_closure(const std::string& name, const nlohmann::json& params = nlohmann::json::object());
void register_closure(const std::string& name, ClosureFactory factory);
std::vector<std::string> registered_closures();

// ---------------------------------------------------------------------------
// Derivatives

/// Analytic when the closure provides them, otherwise centered differences:
/// first derivatives with h = eps^(1/3) max(1,|x|), second derivatives with
/// h = eps^(1/6) max(1,|x|) and one Richardson level.
Partials partials(const GasModel& model, const ThermoState& st);

/// Only p, e and first partials (cheaper on the finite-difference path).
Partials first_partials(const GasModel& model, const ThermoState& st);

struct FiniteDifferenceSteps {
    double first;
    double second;
};
FiniteDifferenceSteps fd_steps(double x);

// ---------------------------------------------------------------------------
// Entropy and the (v, s) chart

enum class PathOrder { VolumeFirst, TemperatureFirst };

/// s(b) - s(a) along an axis-aligned two-leg path. Both orders agree up to
/// quadrature error when the closure is Maxwell-compatible.
double entropy_difference(const GasModel& model, const ThermoState& a, const ThermoState& b,
                          PathOrder order = PathOrder::VolumeFirst);

/// s(st), normalized to 0 at model.reference().
double entropy(const GasModel& model, const ThermoState& st);

/// Inverse of s(v, .): safeguarded bracketed solve, bracket grown
/// geometrically from the reference temperature.
double theta_from_entropy(const GasModel& model, double v, double s);

/// p(v, theta(v, s)).
double tilde_pressure(const GasModel& model, double v, double s);

struct TildeDerivatives {
    double p_v = 0, p_s = 0;
    double theta_v = 0, theta_s = 0;
    double e_vv = 0, e_vs = 0, e_ss = 0;
};

/// Closed identities relating the (v,s) and (v,theta) charts. Throws
/// RegimeError when p_v < 0 or e_theta > 0 fails at st.
TildeDerivatives tilde_derivatives(const GasModel& model, const ThermoState& st);

struct SecondTildeDerivatives {
    double p_vv = 0, p_vs = 0, p_ss = 0;
};

/// Second derivatives of p~(v,s) by nested centered differencing over (v, s),
/// with theta recovered through theta_from_entropy at every stencil point.
SecondTildeDerivatives second_tilde_derivatives(const GasModel& model, const ThermoState& st);

struct SoundSpeed {
    double c = 0;
    double mach = 0;
};

/// c = sqrt(-v^2 p~_v), M = |u| / c.
SoundSpeed sound_speed_mach(const GasModel& model, const ThermoState& st, double u);

// ---------------------------------------------------------------------------
// Sign conditions at the far field

/// |M - 1| below this is classified transonic.
inline constexpr double kTransonicTolerance = 1e-8;

struct ConditionReport {
    ThermoState plus_state;
    double u_plus = 0;
    double rho_plus = 0;
    double mach = 0;
    bool transonic = false;

    bool basic_ok = false;  // p_rho > 0 and e_theta > 0
    double tilde_pv = 0;
    double tilde_ps = 0;

    // additional transonic assumptions on (v,theta) partials at the far field
    bool p_theta_positive = false;
    bool p_vv_nonnegative = false;
    bool p_thetatheta_nonnegative = false;
    bool p_vtheta_nonpositive = false;
    bool e_vv_nonpositive = false;
    bool e_thetatheta_nonpositive = false;
    bool transonic_extra_ok = false;

    // (v,s)-chart second derivatives of p at the far field
    double p_vv_s = 0, p_vs_s = 0, p_ss_s = 0;

    double beta1 = 0, beta2 = 0, beta3 = 0;
    bool beta_ok = false;

    std::array<std::array<double, 3>, 3> matrix_A{};
    std::array<double, 3> minors{};
    bool minors_ok = false;
    /// (1/(2u+)^2)(-4 v+ p~_v A2 - p~_s^2 A1); equals det A only at M+ = 1.
    double minor3_closed_form = 0;

    bool all_ok() const { return basic_ok && transonic_extra_ok && beta_ok && minors_ok; }
};

ConditionReport check_conditions(const GasModel& model, const ThermoState& plus_state, double u_plus);

nlohmann::json to_json(const ConditionReport& report);

} // namespace outflow::eos
