#include "outflow/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "outflow/errors.hpp"

namespace outflow::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::json number(double x)
{
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

double trapezoid(const std::vector<double>& f, double dx)
{
    if (f.size() < 2) {
        return 0.0;
    }
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        s += f[i];
    }
    return s * dx;
}

// Second-order first derivative: centered inside, one-sided at the ends.
std::vector<double> d1(const std::vector<double>& f, double dx)
{
    const std::size_t n = f.size();
    std::vector<double> out(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
    }
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
    return out;
}

std::vector<double> d2(const std::vector<double>& f, double dx)
{
    const std::size_t n = f.size();
    std::vector<double> out(n);
    const double h2 = dx * dx;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    }
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    return out;
}

struct Perturbation {
    std::vector<double> phi, psi, zeta;
};

Perturbation difference(const transient::FlowState& state, const transient::FlowState& reference)
{
    if (state.size() != reference.size()) {
        throw ConfigError("state and reference sizes differ");
    }
    Perturbation p;
    const std::size_t n = state.size();
    p.phi.resize(n);
    p.psi.resize(n);
    p.zeta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.phi[i] = state.rho[i] - reference.rho[i];
        p.psi[i] = state.u[i] - reference.u[i];
        p.zeta[i] = state.theta[i] - reference.theta[i];
    }
    return p;
}

double sum_sq_integral(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c,
                       double dx)
{
    std::vector<double> f(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        f[i] = a[i] * a[i] + b[i] * b[i] + c[i] * c[i];
    }
    return trapezoid(f, dx);
}

// Instantaneous quantities entering the norm series.
struct Snapshot {
    double l2_sq = 0, h1_semi_sq = 0, sup = 0;
    double trace = 0, trace_x = 0;
    double diss = 0, phi_x_sq = 0, second_sq = 0;
};

Snapshot measure(const transient::FlowState& state, const transient::FlowState& reference, double dx)
{
    const Perturbation p = difference(state, reference);
    const std::vector<double> phx = d1(p.phi, dx), psx = d1(p.psi, dx), zex = d1(p.zeta, dx);
    const std::vector<double> psxx = d2(p.psi, dx), zexx = d2(p.zeta, dx);
    const std::vector<double> zero(p.phi.size(), 0.0);
    Snapshot s;
    s.l2_sq = sum_sq_integral(p.phi, p.psi, p.zeta, dx);
    s.h1_semi_sq = sum_sq_integral(phx, psx, zex, dx);
    for (std::size_t i = 0; i < p.phi.size(); ++i) {
        s.sup = std::max(s.sup, std::sqrt(p.phi[i] * p.phi[i] + p.psi[i] * p.psi[i] + p.zeta[i] * p.zeta[i]));
    }
    s.trace = std::abs(p.phi[0]);
    s.trace_x = std::abs(phx[0]);
    s.diss = sum_sq_integral(psx, zex, zero, dx);
    s.phi_x_sq = sum_sq_integral(phx, zero, zero, dx);
    s.second_sq = sum_sq_integral(psxx, zexx, zero, dx);
    return s;
}

} // namespace

std::string to_string(Shape s)
{
    switch (s) {
    case Shape::GaussianBump:
        return "gaussian-bump";
    case Shape::CompactBump:
        return "compact-bump";
    case Shape::DecayingWave:
        return "decaying-wave";
    }
    return "unknown";
}

Shape shape_from(const std::string& s)
{
    if (s == "gaussian-bump") {
        return Shape::GaussianBump;
    }
    if (s == "compact-bump") {
        return Shape::CompactBump;
    }
    if (s == "decaying-wave") {
        return Shape::DecayingWave;
    }
    throw ConfigError("unknown perturbation shape '" + s + "'");
}

void validate(const PerturbationSpec& spec)
{
    if (!(spec.width > 0.0) || !std::isfinite(spec.width)) {
        throw ConfigError("perturbation width must be positive");
    }
    if (!(spec.center >= 0.0) || !std::isfinite(spec.center)) {
        throw ConfigError("perturbation center must be non-negative");
    }
    for (double a : {spec.a_rho, spec.a_u, spec.a_theta}) {
        if (!std::isfinite(a)) {
            throw ConfigError("perturbation amplitudes must be finite");
        }
    }
}

ShapeFunction::ShapeFunction(const PerturbationSpec& spec) : spec_(spec)
{
    validate(spec);
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (double& p : phase_) {
        p = phase(rng);
    }
}

double ShapeFunction::value(std::size_t component, double x) const
{
    const double r = (x - spec_.center) / spec_.width;
    switch (spec_.shape) {
    case Shape::GaussianBump:
        return std::exp(-r * r);
    case Shape::CompactBump:
        return std::abs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
    case Shape::DecayingWave:
        return std::exp(-r * r) * std::cos(2.0 * std::numbers::pi * r + phase_[component]);
    }
    return 0.0;
}

double ShapeFunction::derivative(std::size_t component, double x) const
{
    const double w = spec_.width;
    const double r = (x - spec_.center) / w;
    switch (spec_.shape) {
    case Shape::GaussianBump:
        return -2.0 * r / w * std::exp(-r * r);
    case Shape::CompactBump: {
        if (std::abs(r) >= 1.0) {
            return 0.0;
        }
        const double q = 1.0 - r * r;
        return std::exp(1.0 - 1.0 / q) * (-2.0 * r / (q * q)) / w;
    }
    case Shape::DecayingWave: {
        const double k = 2.0 * std::numbers::pi;
        const double g = std::exp(-r * r);
        return g * (-2.0 * r * std::cos(k * r + phase_[component]) - k * std::sin(k * r + phase_[component])) / w;
    }
    }
    return 0.0;
}

transient::FlowState profile_state(const stationary::StationaryProfile& profile)
{
    transient::FlowState s;
    const std::size_t n = profile.v.size();
    s.rho.resize(n);
    s.u = profile.u;
    s.theta = profile.theta;
    for (std::size_t i = 0; i < n; ++i) {
        s.rho[i] = 1.0 / profile.v[i];
    }
    return s;
}

transient::Grid1D profile_grid(const stationary::StationaryProfile& profile)
{
    return transient::Grid1D::uniform(profile.L, profile.N);
}

std::string to_string(RightState r)
{
    return r == RightState::Profile ? "profile" : "far-field";
}

RightState right_state_from(const std::string& s)
{
    if (s == "profile") {
        return RightState::Profile;
    }
    if (s == "far-field") {
        return RightState::FarField;
    }
    throw ConfigError("unknown right state '" + s + "' (expected profile or far-field)");
}

transient::BoundaryData profile_boundary(const stationary::StationaryProfile& profile, RightState right)
{
    transient::BoundaryData bc;
    bc.u_minus = profile.u.front();
    bc.theta_minus = profile.theta.front();
    if (right == RightState::Profile) {
        bc.rho_right = 1.0 / profile.v.back();
        bc.u_right = profile.u.back();
        bc.theta_right = profile.theta.back();
    } else {
        bc.rho_right = 1.0 / profile.far.v_plus();
        bc.u_right = profile.far.u_plus();
        bc.theta_right = profile.far.theta_plus();
    }
    return bc;
}

InitialData make_initial(const stationary::StationaryProfile& profile, const PerturbationSpec& spec)
{
    const ShapeFunction g(spec);
    InitialData out;
    out.state = profile_state(profile);
    const std::size_t n = out.state.size();
    const std::array<double, 3> a{spec.a_rho, spec.a_u, spec.a_theta};
    std::vector<double> value_sq(n), deriv_sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = profile.x[i];
        std::array<double, 3> f{}, fx{};
        for (std::size_t k = 0; k < 3; ++k) {
            f[k] = a[k] * g.value(k, x);
            fx[k] = a[k] * g.derivative(k, x);
        }
        if (i == 0) {
            out.raw_boundary_psi = std::abs(f[1]);
            out.raw_boundary_zeta = std::abs(f[2]);
            f[1] = 0.0;
            f[2] = 0.0;
        }
        out.state.rho[i] += f[0];
        out.state.u[i] += f[1];
        out.state.theta[i] += f[2];
        if (!(out.state.rho[i] > 0.0) || !(out.state.theta[i] > 0.0)) {
            throw AdmissibilityError("perturbation amplitude too large: density or temperature non-positive at x = " +
                                     std::to_string(x));
        }
        value_sq[i] = f[0] * f[0] + f[1] * f[1] + f[2] * f[2];
        deriv_sq[i] = fx[0] * fx[0] + fx[1] * fx[1] + fx[2] * fx[2];
    }
    const double dx = profile.dx();
    out.h1_norm = std::sqrt(trapezoid(value_sq, dx) + trapezoid(deriv_sq, dx));
    return out;
}

double energy_density(const eos::GasModel& model, const transient::FlowState& reference,
                      const transient::FlowState& state, std::size_t node)
{
    const eos::ThermoState hat{1.0 / reference.rho[node], reference.theta[node]};
    const eos::ThermoState now{1.0 / state.rho[node], state.theta[node]};
    const double psi = state.u[node] - reference.u[node];
    const double de = model.internal_energy(now.v, now.theta) - model.internal_energy(hat.v, hat.theta);
    const double ds = eos::entropy_difference(model, hat, now);
    const double p_hat = model.pressure(hat.v, hat.theta);
    return de - hat.theta * ds + 0.5 * psi * psi + p_hat * (now.v - hat.v);
}

double energy_roundoff(const eos::GasModel& model, const transient::FlowState& reference,
                       const transient::FlowState& state, std::size_t node)
{
    const double v = 1.0 / state.rho[node], v_hat = 1.0 / reference.rho[node];
    const double e = model.internal_energy(v, state.theta[node]);
    const double e_hat = model.internal_energy(v_hat, reference.theta[node]);
    const double pv = model.pressure(v_hat, reference.theta[node]) * std::max(v, v_hat);
    return 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(e) + std::abs(e_hat) + pv);
}

EquivalenceConstants equivalence_constants(const eos::GasModel& model, const transient::FlowState& reference,
                                           const transient::FlowState& state, double relative_threshold)
{
    const Perturbation p = difference(state, reference);
    const std::size_t n = state.size();
    std::vector<double> mag(n);
    double max_mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mag[i] = p.phi[i] * p.phi[i] + p.psi[i] * p.psi[i] + p.zeta[i] * p.zeta[i];
        max_mag = std::max(max_mag, std::sqrt(mag[i]));
    }
    EquivalenceConstants c;
    c.c1 = std::numeric_limits<double>::infinity();
    c.c2 = 0.0;
    if (max_mag == 0.0) {
        c.c1 = kNaN;
        c.c2 = kNaN;
        return c;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::sqrt(mag[i]) < relative_threshold * max_mag) {
            continue;
        }
        const double E = energy_density(model, reference, state, i);
        if (E < 0.0) {
            c.energy_nonnegative = false;
        }
        const double q = E / mag[i];
        c.c1 = std::min(c.c1, q);
        c.c2 = std::max(c.c2, q);
        ++c.nodes;
    }
    return c;
}

double quadratic_form(const eos::ConditionReport& report, const std::array<double, 3>& x)
{
    double f = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            f += x[i] * report.matrix_A[i][j] * x[j];
        }
    }
    return f;
}

QuadraticFormReport quadratic_form_check(const eos::ConditionReport& report, std::size_t samples, std::uint64_t seed)
{
    QuadraticFormReport r;
    r.conditions_ok = report.all_ok();
    if (!report.basic_ok) {
        return r;
    }
    r.minors = report.minors;
    r.minors_positive = report.minors[0] > 0.0 && report.minors[1] > 0.0 && report.minors[2] > 0.0;
    Eigen::Matrix3d A;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            A(i, j) = report.matrix_A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    r.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(A, Eigen::EigenvaluesOnly).eigenvalues()(0);
    r.minor3_determinant = A.determinant();
    r.minor3_closed_form = report.minor3_closed_form;
    r.minor3_relative_difference =
        std::abs(r.minor3_determinant - r.minor3_closed_form) / std::max(std::abs(r.minor3_determinant), 1e-300);
    r.zero_value = quadratic_form(report, {0.0, 0.0, 0.0});

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    r.samples = samples;
    r.min_normalized_value = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < samples; ++k) {
        std::array<double, 3> x{};
        double n2 = 0.0;
        do {
            for (double& xi : x) {
                xi = normal(rng);
            }
            n2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        } while (n2 == 0.0);
        const double f = quadratic_form(report, x);
        if (f > 0.0) {
            ++r.positive_samples;
        }
        r.min_normalized_value = std::min(r.min_normalized_value, f / n2);
    }
    r.all_samples_positive = r.positive_samples == samples;
    r.sylvester_consistent = r.all_samples_positive == r.minors_positive;
    return r;
}

Tracker::Tracker(eos::GasModelPtr model, transient::FlowState reference, double dx, bool track_energy,
                 double energy_threshold)
    : model_(std::move(model)), reference_(std::move(reference)), dx_(dx), track_energy_(track_energy),
      energy_threshold_(energy_threshold)
{
    if (!model_ || !(dx > 0.0)) {
        throw ConfigError("tracker needs a closure and a positive grid spacing");
    }
}

void Tracker::observe(const transient::FlowState& state)
{
    observe(state, reference_);
}

void Tracker::observe(const transient::FlowState& state, const transient::FlowState& reference)
{
    const Snapshot s = measure(state, reference, dx_);
    const double rate_diss = s.diss;
    const double rate_phi = s.phi_x_sq;
    const double rate_second = s.second_sq;
    const double rate_boundary = s.trace * s.trace + s.trace_x * s.trace_x;

    NormSeries& n = norms_;
    if (n.times.empty()) {
        initial_h1_sq_ = s.l2_sq + s.h1_semi_sq;
        n.dissipation.push_back(0.0);
        n.dissipation_phi_x.push_back(0.0);
        n.dissipation_second.push_back(0.0);
        n.boundary_integral.push_back(0.0);
    } else {
        const double dt = state.t - n.times.back();
        if (!(dt > 0.0)) {
            throw NumericalError("observation times must be strictly increasing");
        }
        n.dissipation.push_back(n.dissipation.back() + 0.5 * dt * (last_rate_diss_ + rate_diss));
        n.dissipation_phi_x.push_back(n.dissipation_phi_x.back() + 0.5 * dt * (last_rate_phi_ + rate_phi));
        n.dissipation_second.push_back(n.dissipation_second.back() + 0.5 * dt * (last_rate_second_ + rate_second));
        n.boundary_integral.push_back(n.boundary_integral.back() + 0.5 * dt * (last_rate_boundary_ + rate_boundary));
    }
    last_rate_diss_ = rate_diss;
    last_rate_phi_ = rate_phi;
    last_rate_second_ = rate_second;
    last_rate_boundary_ = rate_boundary;

    n.times.push_back(state.t);
    n.l2.push_back(std::sqrt(s.l2_sq));
    n.h1_semi.push_back(std::sqrt(s.h1_semi_sq));
    n.sup.push_back(s.sup);
    n.boundary_trace.push_back(s.trace);
    n.boundary_trace_x.push_back(s.trace_x);
    const double numerator = s.l2_sq + s.h1_semi_sq + n.dissipation_phi_x.back() + n.dissipation.back() +
                             n.dissipation_second.back() + n.boundary_integral.back();
    n.apriori_ratio.push_back(initial_h1_sq_ > 0.0 ? numerator / initial_h1_sq_ : kNaN);

    if (track_energy_) {
        std::vector<double> density(state.size());
        bool nonneg = true;
        for (std::size_t i = 0; i < state.size(); ++i) {
            const double E = energy_density(*model_, reference, state, i);
            density[i] = reference.rho[i] * E;
            nonneg = nonneg && E >= -energy_roundoff(*model_, reference, state, i);
        }
        const EquivalenceConstants c = equivalence_constants(*model_, reference, state, energy_threshold_);
        nonneg = nonneg && c.energy_nonnegative;
        energy_.times.push_back(state.t);
        energy_.total.push_back(trapezoid(density, dx_));
        energy_.c1.push_back(c.c1);
        energy_.c2.push_back(c.c2);
        energy_.energy_nonnegative = energy_.energy_nonnegative && nonneg;
        if (std::isfinite(c.c1)) {
            energy_.c1_min = energy_.c1.size() == 1 || !std::isfinite(energy_.c1_min) ? c.c1
                                                                                       : std::min(energy_.c1_min, c.c1);
            energy_.c2_max = std::max(energy_.c2_max, c.c2);
        }
    }
}

transient::Observer Tracker::observer()
{
    return [this](const transient::FlowState& s, std::size_t) { observe(s); };
}

NormSeries track(const eos::GasModelPtr& model, const transient::FlowState& reference, double dx,
                 const std::vector<transient::FlowState>& snapshots)
{
    Tracker t(model, reference, dx, false);
    for (const transient::FlowState& s : snapshots) {
        t.observe(s);
    }
    return t.norms();
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Converging:
        return "converging";
    case Verdict::Stagnating:
        return "stagnating";
    case Verdict::Diverging:
        return "diverging";
    case Verdict::Inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

DecayReport decay_report(const NormSeries& series)
{
    DecayReport r;
    r.half_life = kNaN;
    const std::size_t n = series.sup.size();
    if (n < 3) {
        r.reason = "series too short";
        return r;
    }
    std::vector<double> env(n);
    env[n - 1] = series.sup[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        env[i] = std::max(series.sup[i], env[i + 1]);
    }
    r.initial = env.front();
    r.final_value = env.back();
    if (!(r.initial > 0.0)) {
        r.reason = "zero perturbation";
        return r;
    }
    r.ratio = r.final_value / r.initial;
    for (std::size_t i = 0; i < n; ++i) {
        if (env[i] <= 0.5 * r.initial) {
            r.half_life = series.times[i] - series.times.front();
            break;
        }
    }
    if (!(r.final_value > 0.0)) {
        r.log_change = -std::numeric_limits<double>::infinity();
        r.verdict = Verdict::Converging;
        r.reason = "envelope reached zero";
        return r;
    }
    r.log_change = std::log(r.ratio);
    // The backward envelope never increases, so growth is read off the
    // envelope maximum against the first sample.
    const double growth = std::log(r.initial / series.sup.front());
    if (r.log_change < -0.1) {
        r.verdict = Verdict::Converging;
    } else if (growth > 0.1) {
        r.verdict = Verdict::Diverging;
    } else {
        r.verdict = Verdict::Stagnating;
    }
    return r;
}

std::string to_string(Reference r)
{
    return r == Reference::DiscreteBaseline ? "discrete-baseline" : "profile";
}

Reference reference_from(const std::string& s)
{
    if (s == "discrete-baseline") {
        return Reference::DiscreteBaseline;
    }
    if (s == "profile") {
        return Reference::Profile;
    }
    throw ConfigError("unknown stability reference '" + s + "' (expected discrete-baseline or profile)");
}

StabilityResult run_stability(const stationary::StationaryProfile& profile, const PerturbationSpec& spec,
                              const transient::SolverConfig& cfg, const StabilityOptions& options)
{
    StabilityResult out;
    out.initial = make_initial(profile, spec);
    const transient::FlowState base = profile_state(profile);
    const transient::Grid1D grid = profile_grid(profile);
    const transient::BoundaryData bc = profile_boundary(profile, options.right_state);
    Tracker tracker(profile.far.model_ptr(), base, profile.dx(), options.track_energy);

    transient::SolverConfig run_cfg = cfg;
    if (options.reference == Reference::DiscreteBaseline) {
        if (run_cfg.fixed_dt == 0.0) {
            const transient::Solver probe(profile.far.model_ptr(), grid, cfg, bc);
            run_cfg.fixed_dt = options.dt_safety * std::min(probe.cfl_dt(out.initial.state), probe.cfl_dt(base));
        }
        transient::SolverConfig base_cfg = run_cfg;
        base_cfg.keep_snapshots = true;
        const transient::Solver baseline(profile.far.model_ptr(), grid, base_cfg, bc);
        const transient::RunResult reference = baseline.run(base);
        const transient::Solver solver(profile.far.model_ptr(), grid, run_cfg, bc);
        std::size_t k = 0;
        auto observer = [&](const transient::FlowState& s, std::size_t) {
            if (k >= reference.snapshots.size() || reference.snapshots[k].t != s.t) {
                throw NumericalError("perturbed and baseline runs lost step alignment at t = " + std::to_string(s.t));
            }
            tracker.observe(s, reference.snapshots[k++]);
        };
        out.run = solver.run(out.initial.state, {observer});
    } else {
        const transient::Solver solver(profile.far.model_ptr(), grid, run_cfg, bc);
        out.run = solver.run(out.initial.state, {tracker.observer()});
    }
    out.fixed_dt = run_cfg.fixed_dt;
    out.norms = tracker.norms();
    out.energy = tracker.energy();
    out.decay = decay_report(out.norms);
    for (double r : out.norms.apriori_ratio) {
        if (std::isfinite(r)) {
            out.apriori_constant = std::max(out.apriori_constant, r);
        }
    }
    return out;
}

nlohmann::json to_json(const PerturbationSpec& s)
{
    return {{"shape", to_string(s.shape)},
            {"a_rho", s.a_rho},
            {"a_u", s.a_u},
            {"a_theta", s.a_theta},
            {"center", s.center},
            {"width", s.width},
            {"seed", s.seed}};
}

nlohmann::json to_json(const QuadraticFormReport& r)
{
    return {{"minors", {number(r.minors[0]), number(r.minors[1]), number(r.minors[2])}},
            {"minors_positive", r.minors_positive},
            {"min_eigenvalue", number(r.min_eigenvalue)},
            {"minor3_determinant", number(r.minor3_determinant)},
            {"minor3_closed_form", number(r.minor3_closed_form)},
            {"minor3_relative_difference", number(r.minor3_relative_difference)},
            {"samples", r.samples},
            {"positive_samples", r.positive_samples},
            {"min_normalized_value", number(r.min_normalized_value)},
            {"all_samples_positive", r.all_samples_positive},
            {"sylvester_consistent", r.sylvester_consistent},
            {"conditions_ok", r.conditions_ok}};
}

nlohmann::json to_json(const DecayReport& r)
{
    return {{"verdict", to_string(r.verdict)},
            {"initial", number(r.initial)},
            {"final", number(r.final_value)},
            {"ratio", number(r.ratio)},
            {"log_change", number(r.log_change)},
            {"half_life", number(r.half_life)},
            {"reason", r.reason}};
}

nlohmann::json to_json(const EquivalenceConstants& c)
{
    return {{"c1", number(c.c1)}, {"c2", number(c.c2)}, {"nodes", c.nodes}, {"energy_nonnegative", c.energy_nonnegative}};
}

} // namespace outflow::harness
