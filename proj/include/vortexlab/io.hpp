#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "vortexlab/basis.hpp"
#include "vortexlab/stability.hpp"

namespace vortexlab::io {

inline constexpr const char* kToolVersion = "vortexlab 1.0.0";

/// Decimal with 17 significant digits (round-trip safe for doubles).
std::string num17(double v);
/// Decimal with 6 significant digits (stdout tables).
std::string num6(double v);

void write_coeff_csv(const std::filesystem::path& path, const SpectralField& f);
SpectralField read_coeff_csv(const std::filesystem::path& path);

void write_field_csv(const std::filesystem::path& path, const SpectralField& f, int grid_n);

/// Rows nu_c,mu_c,bracket_width; warnings become '#'-prefixed comment rows.
void write_neutral_csv(const std::filesystem::path& path, const CurveTrace& trace);

void write_contour_script(const std::filesystem::path& path,
                          const std::filesystem::path& field_csv, int grid_n);
void write_curve_script(const std::filesystem::path& path,
                        const std::vector<std::filesystem::path>& curve_csvs);

/// RunManifest JSON: command, parameters, versions, outputs, wall_time_s.
void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const nlohmann::json& parameters,
                    const std::vector<std::filesystem::path>& outputs,
                    double wall_time_s);

}  // namespace vortexlab::io
