#pragma once

// Perturbations of a stationary profile, perturbation norms and the energy
// functional along transient runs, and the decay verdict.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "outflow/eos.hpp"
#include "outflow/stationary.hpp"
#include "outflow/transient.hpp"

namespace outflow::harness {

enum class Shape { GaussianBump, CompactBump, DecayingWave };

std::string to_string(Shape s);
Shape shape_from(const std::string& s);

/// (phi, psi, zeta)(x, 0) = (a_rho, a_u, a_theta) g_k(x). The gaussian bump is
/// exp(-((x - xc)/w)^2), the compact bump exp(1 - 1/(1 - r^2)) for
/// r = (x - xc)/w in (-1, 1), the decaying wave
/// exp(-((x - xc)/w)^2) cos(2 pi (x - xc)/w + phase_k) with phases drawn from
/// `seed`.
struct PerturbationSpec {
    Shape shape = Shape::GaussianBump;
    double a_rho = 0, a_u = 0, a_theta = 0;
    double center = 20.0;
    double width = 4.0;
    std::uint64_t seed = 0;
};

void validate(const PerturbationSpec& spec);

/// Shape functions g_k and their derivatives for the three components.
class ShapeFunction {
public:
    explicit ShapeFunction(const PerturbationSpec& spec);
    double value(std::size_t component, double x) const;
    double derivative(std::size_t component, double x) const;

private:
    PerturbationSpec spec_;
    std::array<double, 3> phase_{};
};

/// Reference state (rho, u, theta) = (1/v, u, theta) sampled from the profile.
transient::FlowState profile_state(const stationary::StationaryProfile& profile);
transient::Grid1D profile_grid(const stationary::StationaryProfile& profile);
/// Dirichlet state at x = L: the profile's own value there, or the far-field
/// state (rho+, u+, theta+).
enum class RightState { Profile, FarField };

std::string to_string(RightState r);
RightState right_state_from(const std::string& s);

/// (u-, theta-) at x = 0 and the chosen state at x = L.
transient::BoundaryData profile_boundary(const stationary::StationaryProfile& profile,
                                         RightState right = RightState::Profile);

struct InitialData {
    transient::FlowState state;
    /// ||(phi, psi, zeta)||_1 from the analytic shapes (trapezoid in x).
    double h1_norm = 0;
    /// |psi|, |zeta| at x = 0 before the boundary taper.
    double raw_boundary_psi = 0, raw_boundary_zeta = 0;
};

/// Profile plus perturbation; psi, zeta are set to zero at node 0. Throws
/// AdmissibilityError if rho or theta would become non-positive.
InitialData make_initial(const stationary::StationaryProfile& profile, const PerturbationSpec& spec);

/// (e - e^) - theta^ (s - s^) + psi^2/2 + p^ (1/rho - 1/rho^) at one node.
double energy_density(const eos::GasModel& model, const transient::FlowState& reference,
                      const transient::FlowState& state, std::size_t node);

/// Size of the rounding error in energy_density: far below the threshold of
/// equivalence_constants the sign of the energy is only resolved up to this.
double energy_roundoff(const eos::GasModel& model, const transient::FlowState& reference,
                       const transient::FlowState& state, std::size_t node);

struct EquivalenceConstants {
    double c1 = 0, c2 = 0;
    std::size_t nodes = 0;
    bool energy_nonnegative = true;
};

/// inf/sup of energy/|(phi, psi, zeta)|^2 over nodes where
/// |(phi, psi, zeta)| >= relative_threshold * max_x |(phi, psi, zeta)|.
EquivalenceConstants equivalence_constants(const eos::GasModel& model, const transient::FlowState& reference,
                                           const transient::FlowState& state, double relative_threshold = 1e-2);

struct QuadraticFormReport {
    std::array<double, 3> minors{};
    bool minors_positive = false;
    double min_eigenvalue = 0;
    double minor3_determinant = 0;
    double minor3_closed_form = 0;
    double minor3_relative_difference = 0;
    std::size_t samples = 0;
    std::size_t positive_samples = 0;
    double min_normalized_value = 0;  // min f(x)/|x|^2 over the samples
    double zero_value = 0;            // f(0, 0, 0)
    bool all_samples_positive = false;
    /// f > 0 on every sample exactly when all minors are positive.
    bool sylvester_consistent = false;
    bool conditions_ok = false;
};

/// f(x) = x^T A x for x = (phi_v, chi, psi).
double quadratic_form(const eos::ConditionReport& report, const std::array<double, 3>& x);

QuadraticFormReport quadratic_form_check(const eos::ConditionReport& report, std::size_t samples = 10000,
                                         std::uint64_t seed = 1);

struct NormSeries {
    std::vector<double> times;
    std::vector<double> l2;        // ||(phi, psi, zeta)||
    std::vector<double> h1_semi;   // ||(phi_x, psi_x, zeta_x)||
    std::vector<double> sup;       // sup_x |(phi, psi, zeta)|
    std::vector<double> boundary_trace;    // |phi(0, t)|
    std::vector<double> boundary_trace_x;  // |phi_x(0, t)|
    std::vector<double> dissipation;       // int_0^t ||(psi_x, zeta_x)||^2
    std::vector<double> dissipation_phi_x;  // int_0^t ||phi_x||^2
    std::vector<double> dissipation_second; // int_0^t ||(psi_xx, zeta_xx)||^2
    std::vector<double> boundary_integral;  // int_0^t |phi(0)|^2 + |phi_x(0)|^2
    /// [||.||_1^2 + int (||phi_x||^2 + ||(psi_x, zeta_x)||_1^2) + int (|phi(0)|^2 + |phi_x(0)|^2)] / ||.(0)||_1^2
    std::vector<double> apriori_ratio;

    std::size_t size() const { return times.size(); }
};

struct EnergyReport {
    std::vector<double> times;
    std::vector<double> total;  // int rho^ energy dx
    std::vector<double> c1, c2;
    double c1_min = 0, c2_max = 0;
    /// Nonnegative at every node carrying the perturbation and above
    /// -energy_roundoff elsewhere.
    bool energy_nonnegative = true;
};

/// Norms by composite trapezoid on the solver grid with centered differences
/// (one-sided at the ends); time integrals by the trapezoid rule over the
/// observation times.
class Tracker {
public:
    Tracker(eos::GasModelPtr model, transient::FlowState reference, double dx, bool track_energy = true,
            double energy_threshold = 1e-2);

    /// Perturbation measured against the fixed reference.
    void observe(const transient::FlowState& state);
    /// Perturbation measured against a time-dependent reference.
    void observe(const transient::FlowState& state, const transient::FlowState& reference);
    transient::Observer observer();

    const NormSeries& norms() const { return norms_; }
    const EnergyReport& energy() const { return energy_; }

private:
    eos::GasModelPtr model_;
    transient::FlowState reference_;
    double dx_;
    bool track_energy_;
    double energy_threshold_;
    NormSeries norms_;
    EnergyReport energy_;
    double last_rate_diss_ = 0, last_rate_phi_ = 0, last_rate_second_ = 0, last_rate_boundary_ = 0;
    double initial_h1_sq_ = 0;
};

/// Norms of a sequence of stored snapshots.
NormSeries track(const eos::GasModelPtr& model, const transient::FlowState& reference, double dx,
                 const std::vector<transient::FlowState>& snapshots);

enum class Verdict { Converging, Stagnating, Diverging, Inconclusive };
std::string to_string(Verdict v);

struct DecayReport {
    Verdict verdict = Verdict::Inconclusive;
    double initial = 0;
    double final_value = 0;
    double ratio = 0;         // envelope(t_end) / envelope(t_0)
    double log_change = 0;
    double half_life = 0;     // first time the envelope falls to half its initial value (NaN if never)
    std::string reason;
};

/// Verdict from the backward monotone envelope env(t_i) = max_{j >= i} sup(t_j):
/// converging if log(env_end/env_0) < -0.1, otherwise diverging if
/// log(env_0/sup(t_0)) > 0.1, otherwise stagnating; fewer than three points is
/// inconclusive.
DecayReport decay_report(const NormSeries& series);

enum class Reference {
    /// Unperturbed run from the sampled profile with the same fixed time
    /// steps; discretization drift of the profile cancels in the difference.
    DiscreteBaseline,
    /// The sampled profile itself.
    Profile,
};

std::string to_string(Reference r);
Reference reference_from(const std::string& s);

struct StabilityOptions {
    bool track_energy = true;
    Reference reference = Reference::DiscreteBaseline;
    RightState right_state = RightState::Profile;
    /// Fixed step as a fraction of the smaller initial cfl_dt of the two runs
    /// (used only when the solver config has no fixed_dt).
    double dt_safety = 0.9;
};

struct StabilityResult {
    InitialData initial;
    transient::RunResult run;
    NormSeries norms;
    EnergyReport energy;
    DecayReport decay;
    double apriori_constant = 0;  // max over time of the a-priori ratio
    double fixed_dt = 0;
};

StabilityResult run_stability(const stationary::StationaryProfile& profile, const PerturbationSpec& spec,
                              const transient::SolverConfig& cfg, const StabilityOptions& options = {});

nlohmann::json to_json(const PerturbationSpec& s);
nlohmann::json to_json(const QuadraticFormReport& r);
nlohmann::json to_json(const DecayReport& r);
nlohmann::json to_json(const EquivalenceConstants& c);

} // namespace outflow::harness
