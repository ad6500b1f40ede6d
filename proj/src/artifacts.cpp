#include "outflow/artifacts.hpp"

#include <cmath>
#include <fstream>

#include "outflow/errors.hpp"

namespace outflow::artifacts {

std::string format_double(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : columns_(header.size()), path_(path)
{
    f_ = std::fopen(path.c_str(), "w");
    if (!f_) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::fputs(header[i].c_str(), f_);
        std::fputc(i + 1 < header.size() ? ',' : '\n', f_);
    }
}

CsvWriter::~CsvWriter()
{
    if (f_) {
        std::fclose(f_);
    }
}

void CsvWriter::row(const std::vector<double>& values)
{
    if (values.size() != columns_) {
        throw ConfigError("row width mismatch in '" + path_.string() + "'");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::fputs(format_double(values[i]).c_str(), f_);
        std::fputc(i + 1 < values.size() ? ',' : '\n', f_);
    }
}

void ensure_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc)
{
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    out << doc.dump(2) << '\n';
}

void write_profile_csv(const std::filesystem::path& path, const stationary::StationaryProfile& p)
{
    CsvWriter w(path, {"x", "v", "u", "theta", "v_x", "u_x", "theta_x", "z"});
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        const double z = p.z.empty() ? 0.0 : p.z[i];
        w.row({p.x[i], p.v[i], p.u[i], p.theta[i], p.v_x[i], p.u_x[i], p.theta_x[i], z});
    }
}

void write_regime_sweep_csv(const std::filesystem::path& path, const std::vector<stationary::RegimeClass>& sweep)
{
    CsvWriter w(path, {"mach", "kind", "det_j", "det_j_identity", "trace_b", "discriminant",
                       "discriminant_lower_bound", "lambda1", "lambda2"});
    for (const auto& r : sweep) {
        const double kind = r.kind == stationary::Regime::Supersonic ? 1.0 : r.kind == stationary::Regime::Subsonic ? -1.0 : 0.0;
        w.row({r.mach, kind, r.det_j, r.det_j_identity, r.trace_b, r.discriminant, r.discriminant_lower_bound,
               r.lambda1, r.lambda2});
    }
}

void write_snapshots_csv(const std::filesystem::path& path, const transient::Grid1D& grid,
                         const std::vector<transient::FlowState>& snapshots)
{
    CsvWriter w(path, {"t", "x", "rho", "u", "theta"});
    for (const auto& s : snapshots) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            w.row({s.t, grid.x[i], s.rho[i], s.u[i], s.theta[i]});
        }
    }
}

void write_norms_csv(const std::filesystem::path& path, const harness::NormSeries& n, const harness::EnergyReport& e)
{
    const bool energy = e.times.size() == n.size();
    std::vector<std::string> header{"t", "l2", "h1_semi", "sup", "boundary_trace", "boundary_trace_x", "dissipation",
                                    "dissipation_phi_x", "dissipation_second", "boundary_integral", "apriori_ratio"};
    if (energy) {
        header.insert(header.end(), {"energy", "c1", "c2"});
    }
    CsvWriter w(path, header);
    for (std::size_t i = 0; i < n.size(); ++i) {
        std::vector<double> r{n.times[i], n.l2[i], n.h1_semi[i], n.sup[i], n.boundary_trace[i], n.boundary_trace_x[i],
                              n.dissipation[i], n.dissipation_phi_x[i], n.dissipation_second[i],
                              n.boundary_integral[i], n.apriori_ratio[i]};
        if (energy) {
            r.insert(r.end(), {e.total[i], e.c1[i], e.c2[i]});
        }
        w.row(r);
    }
}

} // namespace outflow::artifacts
