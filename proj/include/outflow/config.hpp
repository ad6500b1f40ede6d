#pragma once

// Run configuration: a JSON document with fixed sections. Unknown keys are
// rejected; to_json emits every field, so the output re-parses to the same run.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "outflow/eos.hpp"
#include "outflow/harness.hpp"
#include "outflow/stationary.hpp"
#include "outflow/transient.hpp"

namespace outflow::config {

struct GasSection {
    std::string closure = "ideal-polytropic";
    nlohmann::json params = nlohmann::json::object();
};

/// Exactly one of u_plus and mach_target; mach_target = 1 when neither is given.
struct FarFieldSection {
    double v_plus = 1.0;
    double theta_plus = 1.0;
    std::optional<double> u_plus;
    std::optional<double> mach_target;
};

struct StationarySection {
    double y10 = 0.1;    // transonic seed
    double eps = 0.01;   // non-degenerate seed amplitude
    std::optional<double> L;  // regime default when absent
    std::size_t N = 2048;
    stationary::TransonicMethod method = stationary::TransonicMethod::FullForward;
    double delta0 = 0.1;
    std::array<double, 2> supersonic_weights{1.0, 1.0};
    double step_factor = 0.05;
    bool refinement_check = true;
};

struct TransientSection {
    transient::SolverConfig solver;
    harness::RightState right_state = harness::RightState::Profile;
    harness::Reference reference = harness::Reference::DiscreteBaseline;
};

struct RegimeSweepSection {
    double mach_lo = 0.5;
    double mach_hi = 1.5;
    std::size_t samples = 101;
};

/// Grid of stability runs: perturbation amplitudes scaled by each factor, at
/// each far-field Mach number.
struct SweepSection {
    std::vector<double> amplitude_scales{0.5, 1.0, 2.0};
    std::vector<double> machs{1.0};
    std::size_t threads = 1;
};

struct OutputSection {
    std::string dir = "out";
    bool snapshots = true;
    /// Every k-th observed state goes to the snapshot file (plus the last).
    std::size_t snapshot_every = 25;
};

struct RunConfig {
    GasSection gas;
    FarFieldSection far_field;
    eos::PhysicalParams physics;
    StationarySection stationary;
    TransientSection transient;
    harness::PerturbationSpec perturbation;
    RegimeSweepSection regime_sweep;
    SweepSection sweep;
    OutputSection output;

    RunConfig();

    eos::GasModelPtr model() const;
    /// Resolves mach_target to u+ = -M c(v+, s+).
    stationary::FarFieldSpec far_field_spec() const;
    stationary::ProfileOptions profile_options() const;
};

/// Throws ConfigError on malformed input or unknown keys and
/// AdmissibilityError on u_plus >= 0.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& cfg);

} // namespace outflow::config
