#include "outflow/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "outflow/errors.hpp"

namespace outflow::config {

namespace {

using nlohmann::json;

std::string method_name(stationary::TransonicMethod m)
{
    return m == stationary::TransonicMethod::FullForward ? "full-forward" : "reduced-reconstruction";
}

stationary::TransonicMethod method_from(const std::string& s)
{
    if (s == "full-forward") {
        return stationary::TransonicMethod::FullForward;
    }
    if (s == "reduced-reconstruction") {
        return stationary::TransonicMethod::ReducedReconstruction;
    }
    throw ConfigError("unknown transonic method '" + s + "' (expected full-forward or reduced-reconstruction)");
}

// Reads the keys of one JSON object, remembering which were consumed.
class Section {
public:
    Section(const json& doc, std::string name) : name_(std::move(name))
    {
        if (doc.is_null()) {
            obj_ = json::object();
        } else if (!doc.is_object()) {
            throw ConfigError("section '" + name_ + "' must be an object");
        } else {
            obj_ = doc;
        }
    }

    bool has(const std::string& key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

    const json& raw(const std::string& key)
    {
        seen_.insert(key);
        return obj_.at(key);
    }

    template <class T>
    void read(const std::string& key, T& out)
    {
        if (!obj_.contains(key)) {
            return;
        }
        seen_.insert(key);
        try {
            out = obj_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(name_ + "." + key + ": wrong type");
        }
    }

    void read(const std::string& key, double& out)
    {
        if (!obj_.contains(key)) {
            return;
        }
        seen_.insert(key);
        const json& v = obj_.at(key);
        if (!v.is_number()) {
            throw ConfigError(name_ + "." + key + ": expected a number");
        }
        out = v.get<double>();
        if (!std::isfinite(out)) {
            throw ConfigError(name_ + "." + key + ": must be finite");
        }
    }

    void read(const std::string& key, std::size_t& out)
    {
        if (!obj_.contains(key)) {
            return;
        }
        seen_.insert(key);
        const json& v = obj_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw ConfigError(name_ + "." + key + ": expected a non-negative integer");
        }
        out = v.get<std::size_t>();
    }

    void read(const std::string& key, std::optional<double>& out)
    {
        if (!obj_.contains(key)) {
            return;
        }
        seen_.insert(key);
        if (obj_.at(key).is_null()) {
            out.reset();
            return;
        }
        double x = 0;
        seen_.erase(key);
        read(key, x);
        out = x;
    }

    void finish() const
    {
        for (const auto& [key, value] : obj_.items()) {
            if (!seen_.count(key)) {
                throw ConfigError("unknown key '" + name_ + "." + key + "'");
            }
        }
    }

private:
    std::string name_;
    json obj_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& message)
{
    if (!ok) {
        throw ConfigError(message);
    }
}

json optional_number(const std::optional<double>& x)
{
    return x ? json(*x) : json(nullptr);
}

} // namespace

RunConfig::RunConfig()
{
    transient.solver.t_end = 300.0;
    transient.solver.snapshot_stride = 200;
    perturbation.a_rho = 0.01;
    perturbation.a_u = 0.01;
    perturbation.a_theta = 0.01;
}

eos::GasModelPtr RunConfig::model() const
{
    return eos::make_closure(gas.closure, gas.params);
}

stationary::FarFieldSpec RunConfig::far_field_spec() const
{
    if (far_field.u_plus) {
        return stationary::FarFieldSpec(model(), physics, far_field.v_plus, far_field.theta_plus, *far_field.u_plus);
    }
    return stationary::FarFieldSpec::from_mach(model(), physics, far_field.v_plus, far_field.theta_plus,
                                               far_field.mach_target.value_or(1.0));
}

stationary::ProfileOptions RunConfig::profile_options() const
{
    stationary::ProfileOptions o;
    o.delta0 = stationary.delta0;
    o.method = stationary.method;
    o.supersonic_weights = stationary.supersonic_weights;
    o.step_factor = stationary.step_factor;
    o.refinement_check = stationary.refinement_check;
    return o;
}

RunConfig parse_config(const json& doc)
{
    if (!doc.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    RunConfig cfg;
    Section top(doc, "config");

    if (doc.contains("gas")) {
        Section s(doc.at("gas"), "gas");
        top.raw("gas");
        s.read("closure", cfg.gas.closure);
        if (s.has("params")) {
            cfg.gas.params = s.raw("params");
            require(cfg.gas.params.is_object(), "gas.params must be an object");
        }
        s.finish();
    }
    {
        require(doc.contains("far_field"), "missing section 'far_field'");
        Section s(doc.at("far_field"), "far_field");
        top.raw("far_field");
        s.read("v_plus", cfg.far_field.v_plus);
        s.read("theta_plus", cfg.far_field.theta_plus);
        s.read("u_plus", cfg.far_field.u_plus);
        s.read("mach_target", cfg.far_field.mach_target);
        s.finish();
        require(cfg.far_field.v_plus > 0 && cfg.far_field.theta_plus > 0, "far_field: v_plus and theta_plus must be positive");
        require(!(cfg.far_field.u_plus && cfg.far_field.mach_target), "far_field: give u_plus or mach_target, not both");
        if (cfg.far_field.u_plus && *cfg.far_field.u_plus >= 0.0) {
            throw AdmissibilityError("far_field.u_plus >= 0: the outflow problem has no stationary solution unless u+ < 0 "
                                     "(the mass flux rho u is constant and u(0) = u- < 0)");
        }
        if (cfg.far_field.mach_target) {
            require(*cfg.far_field.mach_target > 0, "far_field.mach_target must be positive");
        }
    }
    if (doc.contains("physics")) {
        Section s(doc.at("physics"), "physics");
        top.raw("physics");
        s.read("mu", cfg.physics.mu);
        s.read("kappa", cfg.physics.kappa);
        s.finish();
    }
    if (doc.contains("stationary")) {
        Section s(doc.at("stationary"), "stationary");
        top.raw("stationary");
        auto& st = cfg.stationary;
        s.read("y10", st.y10);
        s.read("eps", st.eps);
        s.read("L", st.L);
        s.read("N", st.N);
        std::string method = method_name(st.method);
        s.read("method", method);
        st.method = method_from(method);
        s.read("delta0", st.delta0);
        s.read("supersonic_weights", st.supersonic_weights);
        s.read("step_factor", st.step_factor);
        s.read("refinement_check", st.refinement_check);
        s.finish();
        require(st.y10 >= 0, "stationary.y10 must be non-negative");
        require(st.eps >= 0, "stationary.eps must be non-negative");
        require(!st.L || *st.L > 0, "stationary.L must be positive");
        require(st.N >= 16, "stationary.N must be at least 16");
        require(st.delta0 > 0, "stationary.delta0 must be positive");
        require(st.step_factor > 0, "stationary.step_factor must be positive");
    }
    if (doc.contains("transient")) {
        Section s(doc.at("transient"), "transient");
        top.raw("transient");
        auto& sv = cfg.transient.solver;
        s.read("cfl", sv.cfl);
        s.read("t_end", sv.t_end);
        s.read("snapshot_stride", sv.snapshot_stride);
        std::string mode = transient::to_string(sv.far_field);
        s.read("far_field_mode", mode);
        sv.far_field = transient::far_field_mode_from(mode);
        std::string conv = transient::to_string(sv.convection);
        s.read("convection", conv);
        sv.convection = transient::convection_from(conv);
        s.read("max_retries", sv.max_retries);
        s.read("fixed_dt", sv.fixed_dt);
        std::string right = harness::to_string(cfg.transient.right_state);
        s.read("right_state", right);
        cfg.transient.right_state = harness::right_state_from(right);
        std::string ref = harness::to_string(cfg.transient.reference);
        s.read("reference", ref);
        cfg.transient.reference = harness::reference_from(ref);
        s.finish();
    }
    if (doc.contains("perturbation")) {
        Section s(doc.at("perturbation"), "perturbation");
        top.raw("perturbation");
        auto& p = cfg.perturbation;
        std::string shape = harness::to_string(p.shape);
        s.read("shape", shape);
        p.shape = harness::shape_from(shape);
        s.read("a_rho", p.a_rho);
        s.read("a_u", p.a_u);
        s.read("a_theta", p.a_theta);
        s.read("center", p.center);
        s.read("width", p.width);
        s.read("seed", p.seed);
        s.finish();
    }
    if (doc.contains("regime_sweep")) {
        Section s(doc.at("regime_sweep"), "regime_sweep");
        top.raw("regime_sweep");
        s.read("mach_lo", cfg.regime_sweep.mach_lo);
        s.read("mach_hi", cfg.regime_sweep.mach_hi);
        s.read("samples", cfg.regime_sweep.samples);
        s.finish();
        require(cfg.regime_sweep.mach_lo > 0 && cfg.regime_sweep.mach_lo < cfg.regime_sweep.mach_hi,
                "regime_sweep needs 0 < mach_lo < mach_hi");
        require(cfg.regime_sweep.samples >= 2, "regime_sweep.samples must be at least 2");
    }
    if (doc.contains("sweep")) {
        Section s(doc.at("sweep"), "sweep");
        top.raw("sweep");
        s.read("amplitude_scales", cfg.sweep.amplitude_scales);
        s.read("machs", cfg.sweep.machs);
        s.read("threads", cfg.sweep.threads);
        s.finish();
        require(!cfg.sweep.amplitude_scales.empty() && !cfg.sweep.machs.empty(), "sweep grids must be non-empty");
        for (double m : cfg.sweep.machs) {
            require(m > 0 && std::isfinite(m), "sweep.machs must be positive");
        }
        require(cfg.sweep.threads >= 1, "sweep.threads must be at least 1");
    }
    if (doc.contains("output")) {
        Section s(doc.at("output"), "output");
        top.raw("output");
        s.read("dir", cfg.output.dir);
        s.read("snapshots", cfg.output.snapshots);
        s.read("snapshot_every", cfg.output.snapshot_every);
        s.finish();
        require(cfg.output.snapshot_every >= 1, "output.snapshot_every must be at least 1");
    }
    top.finish();

    eos::validate(cfg.physics);
    transient::validate(cfg.transient.solver);
    harness::validate(cfg.perturbation);
    cfg.model();  // closure name and parameters
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed config '" + path + "': " + e.what());
    }
    return parse_config(doc);
}

json to_json(const RunConfig& cfg)
{
    json far = {{"v_plus", cfg.far_field.v_plus}, {"theta_plus", cfg.far_field.theta_plus}};
    if (cfg.far_field.u_plus) {
        far["u_plus"] = *cfg.far_field.u_plus;
    } else {
        far["mach_target"] = cfg.far_field.mach_target.value_or(1.0);
    }
    const auto& st = cfg.stationary;
    const auto& sv = cfg.transient.solver;
    const auto& p = cfg.perturbation;
    return {
        {"gas", {{"closure", cfg.gas.closure}, {"params", cfg.model()->parameters()}}},
        {"far_field", far},
        {"physics", {{"mu", cfg.physics.mu}, {"kappa", cfg.physics.kappa}}},
        {"stationary",
         {{"y10", st.y10},
          {"eps", st.eps},
          {"L", optional_number(st.L)},
          {"N", st.N},
          {"method", method_name(st.method)},
          {"delta0", st.delta0},
          {"supersonic_weights", st.supersonic_weights},
          {"step_factor", st.step_factor},
          {"refinement_check", st.refinement_check}}},
        {"transient",
         {{"cfl", sv.cfl},
          {"t_end", sv.t_end},
          {"snapshot_stride", sv.snapshot_stride},
          {"far_field_mode", transient::to_string(sv.far_field)},
          {"convection", transient::to_string(sv.convection)},
          {"max_retries", sv.max_retries},
          {"fixed_dt", sv.fixed_dt},
          {"right_state", harness::to_string(cfg.transient.right_state)},
          {"reference", harness::to_string(cfg.transient.reference)}}},
        {"perturbation",
         {{"shape", harness::to_string(p.shape)},
          {"a_rho", p.a_rho},
          {"a_u", p.a_u},
          {"a_theta", p.a_theta},
          {"center", p.center},
          {"width", p.width},
          {"seed", p.seed}}},
        {"regime_sweep",
         {{"mach_lo", cfg.regime_sweep.mach_lo},
          {"mach_hi", cfg.regime_sweep.mach_hi},
          {"samples", cfg.regime_sweep.samples}}},
        {"sweep",
         {{"amplitude_scales", cfg.sweep.amplitude_scales},
          {"machs", cfg.sweep.machs},
          {"threads", cfg.sweep.threads}}},
        {"output",
         {{"dir", cfg.output.dir}, {"snapshots", cfg.output.snapshots}, {"snapshot_every", cfg.output.snapshot_every}}},
    };
}

} // namespace outflow::config
