#pragma once

// Boundary-layer (stationary) solutions of the outflow problem. With
// u = (u+/v+) v the stationary system reduces to the planar ODE
// W' = G(W), W = (v, theta), whose equilibrium W+ is the far-field state.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "outflow/eos.hpp"

namespace outflow::stationary {

/// Far-field state (v+, theta+, u+) with its closure and transport
/// coefficients. Construction rejects u+ >= 0: the integrated mass balance
/// rho u = rho+ u+ = rho(0) u- with u- < 0 admits no solution then.
class FarFieldSpec {
public:
    FarFieldSpec(eos::GasModelPtr model, eos::PhysicalParams phys, double v_plus, double theta_plus, double u_plus);

    /// u+ = -mach * c(v+, s+).
    static FarFieldSpec from_mach(eos::GasModelPtr model, eos::PhysicalParams phys, double v_plus, double theta_plus,
                                  double mach);

    const eos::GasModel& model() const { return *model_; }
    const eos::GasModelPtr& model_ptr() const { return model_; }
    const eos::PhysicalParams& phys() const { return phys_; }

    double v_plus() const { return v_plus_; }
    double theta_plus() const { return theta_plus_; }
    double u_plus() const { return u_plus_; }
    double rho_plus() const { return 1.0 / v_plus_; }
    double p_plus() const { return plus_.p; }
    double e_plus() const { return plus_.e; }
    double s_plus() const;
    /// Mass flux rho+ u+ (negative).
    double mass_flux() const { return u_plus_ / v_plus_; }
    eos::ThermoState plus_state() const { return {v_plus_, theta_plus_}; }
    const eos::Partials& plus_partials() const { return plus_; }

private:
    eos::GasModelPtr model_;
    eos::PhysicalParams phys_;
    double v_plus_, theta_plus_, u_plus_;
    eos::Partials plus_;
};

using Vec2 = std::array<double, 2>;

/// (g1, g2)(v, theta): right-hand side of the reduced stationary ODE.
Vec2 rhs(const FarFieldSpec& spec, double v, double theta);

/// G(W+ + dW) evaluated in deviation form; below a relative size of 1e-6
/// the quadratic Taylor expansion at W+ replaces the direct difference.
Vec2 rhs_deviation(const FarFieldSpec& spec, const Vec2& dW);

/// Jacobian of G at an arbitrary state (analytic in the closure partials).
Eigen::Matrix2d jacobian(const FarFieldSpec& spec, double v, double theta);

enum class Regime { Supersonic, Subsonic, Transonic };

std::string to_string(Regime r);

struct RegimeClass {
    Regime kind = Regime::Transonic;
    double mach = 1.0;
    Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
    double det_j = 0;           // entrywise determinant of J
    double det_j_identity = 0;  // (1/(mu kappa)) (u+^2/v+^2 + p~_v) e_theta
    double trace_b = 0;
    double trace_b_identity = 0;
    double discriminant = 0;             // b^2 - 4 det J
    double discriminant_lower_bound = 0; // 4 u+^2 theta+ p_theta^2 / (mu kappa v+^2)
    double lambda1 = 0;                  // lambda1 <= lambda2
    double lambda2 = 0;
    double margin = 0;                   // |M+ - 1|
};

/// Assembles J+ entrywise and classifies the regime (|M+ - 1| below
/// eos::kTransonicTolerance is transonic). Throws RegimeError when the basic
/// closure conditions fail at W+.
RegimeClass jacobian_plus(const FarFieldSpec& spec);

/// Classification at u+ = -M c for each Mach number in [mach_lo, mach_hi].
std::vector<RegimeClass> regime_sweep(const eos::GasModelPtr& model, eos::PhysicalParams phys, double v_plus,
                                      double theta_plus, double mach_lo, double mach_hi, std::size_t samples);

/// Artifacts of the center-manifold reduction at M+ = 1. Y = B^{-1}(W - W+)
/// diagonalizes J+ to diag(0, lambda2).
struct CenterManifoldData {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
    double lambda2 = 0;
    double b1 = 0, b2 = 0;
    Eigen::Matrix2d B = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d B_inv = Eigen::Matrix2d::Identity();
    /// Closed-form a+ built from the second-order Taylor terms without the
    /// factor 1/2; only its sign is used.
    double a_plus = 0;
    /// y1^2 coefficient of -[B^{-1} G]_1 along the center direction; this is
    /// the coefficient that governs the decay y1 ~ 1/(a x).
    double a_plus_reduced = 0;
    /// y1^2 coefficients of the components of G(W+ + B (y1, 0)).
    double ftilde1_quad = 0, ftilde2_quad = 0;
    /// y1^2 coefficient of f2 (second reduced component).
    double f2_quad = 0;
    /// Center manifold y2 = h2 y1^2 + O(y1^3).
    double h2 = 0;
};

/// Throws RegimeError if the far field is not transonic and AdmissibilityError
/// if a+ <= 0.
CenterManifoldData transonic_reduction(const FarFieldSpec& spec);

/// dy1/dx on the quadratic center manifold: [B^{-1} G(W+ + B (y1, h2 y1^2))]_1.
double center_manifold_flow(const FarFieldSpec& spec, const CenterManifoldData& cm, double y1);

enum class TransonicMethod {
    /// Seed W(0) = W+ + B (y10, h2 y10^2) and integrate W' = G(W) forward;
    /// the stable mode decays, so the result is an exact trajectory.
    FullForward,
    /// W(x) = W+ + B (z, h2 z^2) with z from the scalar reduced equation.
    ReducedReconstruction,
};

struct ProfileOptions {
    double delta0 = 0.1;
    TransonicMethod method = TransonicMethod::FullForward;
    /// Supersonic seed: weights of the (fast, slow) unit stable eigenvectors.
    std::array<double, 2> supersonic_weights{1.0, 1.0};
    /// Internal RK4 step is at most step_factor / max|lambda|.
    double step_factor = 0.05;
    /// Rebuild with half the step and record the sup-norm change of v.
    bool refinement_check = true;
};

struct StationaryProfile {
    StationaryProfile(FarFieldSpec far_field, RegimeClass regime_class)
        : far(std::move(far_field)), regime(regime_class)
    {
    }

    FarFieldSpec far;
    RegimeClass regime;
    std::optional<CenterManifoldData> manifold;

    double L = 0;
    std::size_t N = 0;
    double seed = 0;  // y10 (transonic) or eps (non-degenerate)
    std::size_t substeps = 1;

    std::vector<double> x;
    std::vector<double> v, u, theta;
    std::vector<double> dv, dtheta;  // v - v+, theta - theta+ without cancellation
    std::vector<double> v_x, u_x, theta_x;
    std::vector<double> v_xx, u_xx, theta_xx;
    std::vector<double> z;  // transonic only

    double u_minus = 0;
    double theta_minus = 0;
    double delta = 0;  // |(u- - u+, theta- - theta+)|
    double refinement_change = 0;

    double dx() const { return L / static_cast<double>(N); }
};

/// Samples of y' = F(y), y(0) = y0, at x_i = i L / N, with `substeps` RK4
/// steps per cell.
std::vector<double> integrate_scalar_on_grid(const std::function<double(double)>& F, double y0, double L,
                                             std::size_t N, std::size_t substeps);

/// Seed y10 in (0, y_max] whose boundary velocity u(0) equals u_minus
/// (bracketed scalar solve along W+ + B (y, h2 y^2)).
double solve_y10_for_u_minus(const FarFieldSpec& spec, const CenterManifoldData& cm, double u_minus, double y_max);

/// L = 50 / (a y10).
double default_transonic_length(const CenterManifoldData& cm, double y10);
/// L = 30 / |slowest stable eigenvalue|.
double default_nondegenerate_length(const RegimeClass& regime);

StationaryProfile build_transonic_profile(const FarFieldSpec& spec, double y10, double L, std::size_t N,
                                          const ProfileOptions& options = {});

/// eps is the amplitude |W(0) - W+| predicted by the linearization: the
/// supersonic profile is integrated forward from W+ + eps n (n a unit
/// combination of the stable eigenvectors), the subsonic one backward from
/// W+ + eps exp(lambda1 L) r1 along the stable eigenvector.
StationaryProfile build_nondegenerate_profile(const FarFieldSpec& spec, double eps, double L, std::size_t N,
                                              const ProfileOptions& options = {});

struct ProfileReport {
    double mass_residual = 0;
    double momentum_residual = 0;
    double energy_residual = 0;
    double momentum_scale = 0;  // |rho+ u+^2 + p+|
    /// max |stored derivative - 4th-order difference of the samples|
    double derivative_consistency = 0;
    bool monotone = true;
    double v_min = 0, v_max = 0, theta_min = 0, theta_max = 0;

    // transonic tail structure
    bool has_tail = false;
    double tail_lo = 0, tail_hi = 0;
    double a1 = 0, a2 = 0;                  // mean of u_x/z^2, theta_x/z^2 on the tail
    double a1_variation = 0, a2_variation = 0;  // (max - min)/mean on the tail
    bool tail_gradients_positive = false;
    double z_lower = 0, z_upper = 0;  // inf/sup of z (1 + delta x)/delta
    double decay_slope_k0 = 0, decay_slope_k1 = 0;

    // non-degenerate decay
    double exponential_rate = 0;
};

/// Window used for algebraic-decay fits: [L/10, L].
std::pair<double, double> algebraic_window(const StationaryProfile& p);
/// Window used for exponential-rate fits: [L/3, 2L/3].
std::pair<double, double> exponential_window(const StationaryProfile& p);

ProfileReport verify_profile(const StationaryProfile& profile);

nlohmann::json to_json(const RegimeClass& r);
nlohmann::json to_json(const CenterManifoldData& cm);
nlohmann::json to_json(const ProfileReport& r);
/// Header describing a profile (regime, delta, a+, eigenvalues, boundary data).
nlohmann::json profile_header(const StationaryProfile& p, const ProfileReport& report);

} // namespace outflow::stationary
