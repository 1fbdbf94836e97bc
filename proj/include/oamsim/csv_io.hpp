// Plain-text serialization: complex field grids with sidecar metadata,
// intensity maps, trajectories, spectra and sweep summaries, all CSV.
#pragma once

#include "oamsim/analysis.hpp"
#include "oamsim/beams.hpp"
#include "oamsim/dynamics.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace oamsim::io {

/// Field CSV: n rows, each with n interleaved re,im pairs (2n values). The
/// sidecar <path>.meta records extent_m, n and wavelength_m as key = value.
void write_field_csv(const beams::FieldGrid& grid, const std::filesystem::path& path,
                     double wavelength);

struct FieldFile {
  beams::FieldGrid grid;
  double wavelength = 0.0;
};

FieldFile read_field_csv(const std::filesystem::path& path);

/// Intensity map |v|^2, n x n CSV.
void write_intensity_csv(const beams::FieldGrid& grid, const std::filesystem::path& path);

std::vector<std::vector<double>> read_matrix_csv(const std::filesystem::path& path);

/// Header: t,<coord>,<momentum>,re_alpha,im_alpha,photon_number.
void write_trajectory_csv(const dynamics::Trajectory& traj, const std::string& coord_name,
                          const std::string& momentum_name, const std::filesystem::path& path);

/// Header: freq_rads,psd.
void write_spectrum_csv(const analysis::Spectrum& spec, const std::filesystem::path& path);

/// Header: p_in_w,seed,omega_d_rads,snr,mean_Lz.
void write_sweep_csv(const analysis::PowerSweepResult& sweep, const std::filesystem::path& path);

/// 64-bit FNV-1a over a byte string; the scenario content digest.
std::uint64_t fnv1a64(const std::string& bytes);

} // namespace oamsim::io
