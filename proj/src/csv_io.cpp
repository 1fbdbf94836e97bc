#include "oamsim/csv_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oamsim::io {

namespace {

FILE* open_or_throw(const std::filesystem::path& path, const char* mode) {
  FILE* f = std::fopen(path.string().c_str(), mode);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  return f;
}

} // namespace

void write_field_csv(const beams::FieldGrid& grid, const std::filesystem::path& path,
                     double wavelength) {
  FILE* f = open_or_throw(path, "w");
  for (int iy = 0; iy < grid.n; ++iy) {
    for (int ix = 0; ix < grid.n; ++ix) {
      const auto v = grid.at(iy, ix);
      std::fprintf(f, "%.17g,%.17g%s", v.real(), v.imag(), ix + 1 < grid.n ? "," : "\n");
    }
  }
  std::fclose(f);
  std::filesystem::path meta = path;
  meta += ".meta";
  FILE* m = open_or_throw(meta, "w");
  std::fprintf(m, "extent_m = %.17g\nn = %d\nwavelength_m = %.17g\n", grid.extent, grid.n,
               wavelength);
  std::fclose(m);
}

FieldFile read_field_csv(const std::filesystem::path& path) {
  std::filesystem::path meta = path;
  meta += ".meta";
  std::ifstream ms(meta);
  if (!ms) throw std::runtime_error("cannot open " + meta.string());
  double extent = 0.0, wavelength = 0.0;
  int n = 0;
  std::string line;
  while (std::getline(ms, line)) {
    std::istringstream iss(line);
    std::string key, eq;
    iss >> key >> eq;
    if (key == "extent_m") iss >> extent;
    else if (key == "n") iss >> n;
    else if (key == "wavelength_m") iss >> wavelength;
  }
  if (n < 2 || extent <= 0.0)
    throw std::runtime_error("invalid field metadata in " + meta.string());

  FieldFile out;
  out.grid = beams::FieldGrid(n, extent);
  out.wavelength = wavelength;
  std::ifstream fs(path);
  if (!fs) throw std::runtime_error("cannot open " + path.string());
  for (int iy = 0; iy < n; ++iy) {
    if (!std::getline(fs, line))
      throw std::runtime_error("truncated field CSV " + path.string());
    std::istringstream iss(line);
    std::string cell;
    for (int ix = 0; ix < n; ++ix) {
      double re = 0.0, im = 0.0;
      if (!std::getline(iss, cell, ',')) throw std::runtime_error("short row in field CSV");
      re = std::stod(cell);
      if (!std::getline(iss, cell, ',')) throw std::runtime_error("short row in field CSV");
      im = std::stod(cell);
      out.grid.at(iy, ix) = {re, im};
    }
  }
  return out;
}

void write_intensity_csv(const beams::FieldGrid& grid, const std::filesystem::path& path) {
  FILE* f = open_or_throw(path, "w");
  for (int iy = 0; iy < grid.n; ++iy) {
    for (int ix = 0; ix < grid.n; ++ix)
      std::fprintf(f, "%.17g%s", std::norm(grid.at(iy, ix)), ix + 1 < grid.n ? "," : "\n");
  }
  std::fclose(f);
}

std::vector<std::vector<double>> read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream fs(path);
  if (!fs) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(fs, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream iss(line);
    std::string cell;
    while (std::getline(iss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_trajectory_csv(const dynamics::Trajectory& traj, const std::string& coord_name,
                          const std::string& momentum_name, const std::filesystem::path& path) {
  FILE* f = open_or_throw(path, "w");
  std::fprintf(f, "t,%s,%s,re_alpha,im_alpha,photon_number\n", coord_name.c_str(),
               momentum_name.c_str());
  for (size_t i = 0; i < traj.t.size(); ++i) {
    const auto a = traj.alpha[i];
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.t[i], traj.coord[i],
                 traj.momentum[i], a.real(), a.imag(), std::norm(a));
  }
  std::fclose(f);
}

void write_spectrum_csv(const analysis::Spectrum& spec, const std::filesystem::path& path) {
  FILE* f = open_or_throw(path, "w");
  std::fprintf(f, "freq_rads,psd\n");
  for (size_t i = 0; i < spec.freqs.size(); ++i)
    std::fprintf(f, "%.17g,%.17g\n", spec.freqs[i], spec.psd[i]);
  std::fclose(f);
}

void write_sweep_csv(const analysis::PowerSweepResult& sweep, const std::filesystem::path& path) {
  FILE* f = open_or_throw(path, "w");
  std::fprintf(f, "p_in_w,seed,omega_d_rads,snr,mean_Lz\n");
  for (const auto& pt : sweep.points)
    std::fprintf(f, "%.17g,%" PRIu64 ",%.17g,%.17g,%.17g\n", pt.detection.p_in,
                 static_cast<uint64_t>(pt.seed), pt.detection.omega_d, pt.detection.snr,
                 pt.mean_Lz);
  std::fclose(f);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

} // namespace oamsim::io
