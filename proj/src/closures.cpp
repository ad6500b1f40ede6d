#include <cmath>
#include <mutex>
#include <set>

#include "outflow/eos.hpp"

namespace outflow::eos {

IdealPolytropicGas::IdealPolytropicGas(IdealPolytropicParams params)
    : GasModel({1.0, params.A / params.R}), params_(params)
{
    if (!(params.gamma > 1.0) || !(params.R > 0.0) || !(params.A > 0.0)) {
        throw DomainError("ideal polytropic gas requires gamma > 1, R > 0, A > 0");
    }
}

double IdealPolytropicGas::pressure(double v, double theta) const
{
    return params_.R * theta / v;
}

double IdealPolytropicGas::internal_energy(double, double theta) const
{
    return params_.R * theta / (params_.gamma - 1.0);
}

Partials IdealPolytropicGas::analytic_partials(double v, double theta) const
{
    const double R = params_.R;
    Partials d;
    d.p = R * theta / v;
    d.e = R * theta / (params_.gamma - 1.0);
    d.p_v = -R * theta / (v * v);
    d.p_theta = R / v;
    d.e_v = 0.0;
    d.e_theta = R / (params_.gamma - 1.0);
    d.p_vv = 2.0 * R * theta / (v * v * v);
    d.p_vtheta = -R / (v * v);
    return d;
}

nlohmann::json IdealPolytropicGas::parameters() const
{
    return {{"gamma", params_.gamma}, {"R", params_.R}, {"A", params_.A}};
}

double IdealPolytropicGas::closed_form_entropy(double v, double theta) const
{
    const double g = params_.gamma;
    return params_.R / (g - 1.0) * std::log(pressure(v, theta) * std::pow(v, g) / params_.A);
}

namespace {

// p = R theta/(v - b) - a/v^2,  e = cv theta - a/v.
class VanDerWaalsGas final : public GasModel {
public:
    VanDerWaalsGas(double a, double b, double R, double cv, ThermoState ref)
        : GasModel(ref), a_(a), b_(b), R_(R), cv_(cv)
    {
        if (a < 0.0 || b < 0.0 || !(R > 0.0) || !(cv > 0.0) || !(ref.v > b)) {
            throw DomainError("van der Waals closure requires a, b >= 0, R, cv > 0 and v_ref > b");
        }
    }

    std::string name() const override { return "van-der-waals"; }

    double pressure(double v, double theta) const override
    {
        check(v);
        return R_ * theta / (v - b_) - a_ / (v * v);
    }

    double internal_energy(double v, double theta) const override
    {
        check(v);
        return cv_ * theta - a_ / v;
    }

    bool has_analytic_partials() const override { return true; }

    Partials analytic_partials(double v, double theta) const override
    {
        check(v);
        const double w = v - b_;
        Partials d;
        d.p = pressure(v, theta);
        d.e = internal_energy(v, theta);
        d.p_v = -R_ * theta / (w * w) + 2.0 * a_ / (v * v * v);
        d.p_theta = R_ / w;
        d.e_v = a_ / (v * v);
        d.e_theta = cv_;
        d.p_vv = 2.0 * R_ * theta / (w * w * w) - 6.0 * a_ / (v * v * v * v);
        d.p_vtheta = -R_ / (w * w);
        d.e_vv = -2.0 * a_ / (v * v * v);
        return d;
    }

    nlohmann::json parameters() const override
    {
        return {{"a", a_}, {"b", b_}, {"R", R_}, {"cv", cv_}, {"v_ref", reference().v}, {"theta_ref", reference().theta}};
    }

private:
    void check(double v) const
    {
        if (!(v > b_)) {
            throw DomainError("van der Waals closure evaluated at v <= b");
        }
    }

    double a_, b_, R_, cv_;
};

// p = K theta v^(-n),  e = cv theta. No analytic partials: exercises the
// finite-difference path.
class PowerLawGas final : public GasModel {
public:
    PowerLawGas(double K, double n, double cv, ThermoState ref) : GasModel(ref), K_(K), n_(n), cv_(cv)
    {
        if (!(K > 0.0) || !(n > 0.0) || !(cv > 0.0)) {
            throw DomainError("power-law closure requires K, n, cv > 0");
        }
    }

    std::string name() const override { return "power-law"; }
    double pressure(double v, double theta) const override { return K_ * theta * std::pow(v, -n_); }
    double internal_energy(double, double theta) const override { return cv_ * theta; }

    nlohmann::json parameters() const override
    {
        return {{"K", K_}, {"n", n_}, {"cv", cv_}, {"v_ref", reference().v}, {"theta_ref", reference().theta}};
    }

private:
    double K_, n_, cv_;
};

void reject_unknown(const std::string& closure, const nlohmann::json& params, const std::set<std::string>& allowed)
{
    if (!params.is_object()) {
        throw ConfigError("closure '" + closure + "': params must be an object");
    }
    for (const auto& [key, value] : params.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("closure '" + closure + "': unknown parameter '" + key + "'");
        }
        if (!value.is_number()) {
            throw ConfigError("closure '" + closure + "': parameter '" + key + "' must be numeric");
        }
    }
}

double get(const nlohmann::json& params, const char* key, double fallback)
{
    return params.contains(key) ? params.at(key).get<double>() : fallback;
}

struct Registry {
    std::mutex mutex;
    std::map<std::string, ClosureFactory> factories;

    Registry()
    {
        factories["ideal-polytropic"] = [](const nlohmann::json& p) -> GasModelPtr {
            reject_unknown("ideal-polytropic", p, {"gamma", "R", "A"});
            return std::make_shared<IdealPolytropicGas>(
                IdealPolytropicParams{get(p, "gamma", 1.4), get(p, "R", 1.0), get(p, "A", 1.0)});
        };
        factories["van-der-waals"] = [](const nlohmann::json& p) -> GasModelPtr {
            reject_unknown("van-der-waals", p, {"a", "b", "R", "cv", "v_ref", "theta_ref"});
            return std::make_shared<VanDerWaalsGas>(get(p, "a", 0.05), get(p, "b", 0.05), get(p, "R", 1.0),
                                                    get(p, "cv", 2.5),
                                                    ThermoState{get(p, "v_ref", 1.0), get(p, "theta_ref", 1.0)});
        };
        factories["power-law"] = [](const nlohmann::json& p) -> GasModelPtr {
            reject_unknown("power-law", p, {"K", "n", "cv", "v_ref", "theta_ref"});
            return std::make_shared<PowerLawGas>(get(p, "K", 1.0), get(p, "n", 2.0), get(p, "cv", 2.5),
                                                 ThermoState{get(p, "v_ref", 1.0), get(p, "theta_ref", 1.0)});
        };
    }
};

Registry& registry()
{
    static Registry r;
    return r;
}

} // namespace

GasModelPtr make_closure(const std::string& name, const nlohmann::json& params)
{
    ClosureFactory factory;
    {
        Registry& r = registry();
        std::lock_guard lock(r.mutex);
        const auto it = r.factories.find(name);
        if (it == r.factories.end()) {
            throw ConfigError("unknown gas closure '" + name + "'");
        }
        factory = it->second;
    }
    return factory(params.is_null() ? nlohmann::json::object() : params);
}

void register_closure(const std::string& name, ClosureFactory factory)
{
    Registry& r = registry();
    std::lock_guard lock(r.mutex);
    r.factories[name] = std::move(factory);
}

std::vector<std::string> registered_closures()
{
    Registry& r = registry();
    std::lock_guard lock(r.mutex);
    std::vector<std::string> names;
    for (const auto& [name, _] : r.factories) {
        names.push_back(name);
    }
    return names;
}

} // namespace outflow::eos
