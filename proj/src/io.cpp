#include "vortexlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace vortexlab::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

}  // namespace

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string num6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_coeff_csv(const std::filesystem::path& path, const SpectralField& f) {
    std::ofstream out = open_out(path);
    out << "n,m,a\n";
    for (const auto& [mo, v] : f.coeffs)
        out << mo.n << ',' << mo.m << ',' << num17(v) << '\n';
}

SpectralField read_coeff_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::string line;
    std::getline(in, line);  // header
    SpectralField f;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string cell;
        Mode mo;
        std::getline(row, cell, ',');
        mo.n = std::stoi(cell);
        std::getline(row, cell, ',');
        mo.m = std::stoi(cell);
        std::getline(row, cell, ',');
        f.coeffs[mo] = std::stod(cell);
    }
    return f;
}

void write_field_csv(const std::filesystem::path& path, const SpectralField& f, int grid_n) {
    const FlowGrid g = evaluate_field(f, grid_n);
    const double h = 2.0 * std::numbers::pi / grid_n;
    std::ofstream out = open_out(path);
    out << "x,y,psi\n";
    for (int j = 0; j < grid_n; ++j)
        for (int i = 0; i < grid_n; ++i)
            out << num17(i * h) << ',' << num17(j * h) << ',' << num17(g.at(i, j)) << '\n';
}

void write_neutral_csv(const std::filesystem::path& path, const CurveTrace& trace) {
    std::ofstream out = open_out(path);
    out << "nu_c,mu_c,bracket_width\n";
    for (const auto& w : trace.warnings) out << "# " << w << '\n';
    for (const auto& p : trace.points)
        out << num17(p.nu_c) << ',' << num17(p.mu_c) << ',' << num17(p.bracket_width)
            << '\n';
}

void write_contour_script(const std::filesystem::path& path,
                          const std::filesystem::path& field_csv, int grid_n) {
    std::ofstream out = open_out(path);
    out << "set datafile separator ','\n"
        << "set view map\n"
        << "set size square\n"
        << "set dgrid3d " << grid_n << ',' << grid_n << '\n'
        << "set pm3d interpolate 2,2\n"
        << "splot '" << field_csv.filename().string() << "' using 1:2:3 with pm3d notitle\n"
        << "pause -1\n";
}

void write_curve_script(const std::filesystem::path& path,
                        const std::vector<std::filesystem::path>& curve_csvs) {
    std::ofstream out = open_out(path);
    out << "set datafile separator ','\n"
        << "set xlabel 'nu'\n"
        << "set ylabel 'mu'\n"
        << "plot ";
    for (size_t i = 0; i < curve_csvs.size(); ++i) {
        if (i) out << ", ";
        out << '\'' << curve_csvs[i].filename().string()
            << "' using 1:2 with linespoints title '" << curve_csvs[i].stem().string()
            << '\'';
    }
    out << "\npause -1\n";
}

void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const nlohmann::json& parameters,
                    const std::vector<std::filesystem::path>& outputs,
                    double wall_time_s) {
    nlohmann::json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["versions"] = {{"tool", kToolVersion},
                     {"format", 1}};
    j["outputs"] = nlohmann::json::array();
    for (const auto& o : outputs) j["outputs"].push_back(o.string());
    j["wall_time_s"] = wall_time_s;
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace vortexlab::io
