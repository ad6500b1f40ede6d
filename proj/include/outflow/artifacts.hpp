#pragma once

// CSV and JSON writers. Floats are printed with 17 significant digits so
// files round-trip exactly; nothing time-dependent is written.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "outflow/harness.hpp"
#include "outflow/stationary.hpp"
#include "outflow/transient.hpp"

namespace outflow::artifacts {

std::string format_double(double x);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);

private:
    std::FILE* f_ = nullptr;
    std::size_t columns_;
    std::filesystem::path path_;
};

void ensure_dir(const std::filesystem::path& dir);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// x, v, u, theta, v_x, u_x, theta_x, z (z = 0 off the transonic branch).
void write_profile_csv(const std::filesystem::path& path, const stationary::StationaryProfile& p);
void write_regime_sweep_csv(const std::filesystem::path& path, const std::vector<stationary::RegimeClass>& sweep);
/// Long format: t, x, rho, u, theta.
void write_snapshots_csv(const std::filesystem::path& path, const transient::Grid1D& grid,
                         const std::vector<transient::FlowState>& snapshots);
void write_norms_csv(const std::filesystem::path& path, const harness::NormSeries& norms,
                     const harness::EnergyReport& energy);

} // namespace outflow::artifacts
