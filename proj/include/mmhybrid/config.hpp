// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmhybrid/arrays.hpp"
#include "mmhybrid/channel.hpp"

namespace mmhybrid {

enum class CampaignKind { snr_sweep, angle_spread_sweep, coverage };
enum class ChannelModel { single_path, clustered };
enum class ElevationModel { uniform, horizon };
enum class BeamMode { continuous, codebook };

std::string to_string(CampaignKind k);

struct ArraySpec {
  int rows = 1;
  int cols = 1;
  double spacing = 0.5;

  int count() const { return rows * cols; }
  ArrayGeometry build() const { return upa_geometry(rows, cols, spacing); }
};

struct ChannelSpec {
  ChannelModel model = ChannelModel::single_path;
  int clusters = 3;
  int rays_per_cluster = 6;
  double angle_spread_deg = 0.0;  // overridden by the sweep axis in angle-spread campaigns
  double mean_gain_power = 1.0;
  ElevationModel elevation = ElevationModel::uniform;

  AngleSampling angles() const;
};

struct BeamSpec {
  BeamMode mode = BeamMode::continuous;
  int bs_az = 16;
  int bs_el = 8;
  int ms_az = 8;
  int ms_el = 4;
  int bs_phase_bits = 0;
  int ms_phase_bits = 0;
};

struct CoverageConfig {
  double bs_density_per_km2 = 100.0;
  double ms_density_multiplier = 30.0;
  double window_side_m = 1000.0;
  std::vector<int> users_per_cell{2, 3, 4, 5};
  double los_decay_m = 141.0;
  double pathloss_exponent_los = 2.0;
  double pathloss_exponent_nlos = 4.0;
  double carrier_ghz = 28.0;  // sets the free-space loss at 1 m
  double tx_power_dbm = 30.0;
  double noise_figure_db = 7.0;
  double bandwidth_hz = 100e6;
  std::size_t user_samples = 10000;

  double reference_loss_db() const;
  double noise_power_dbm() const;
  double mean_bs_spacing_m() const;
};

struct CampaignConfig {
  CampaignKind kind = CampaignKind::snr_sweep;
  ArraySpec bs_array{8, 8, 0.5};
  ArraySpec ms_array{4, 4, 0.5};
  int users = 4;
  int rf_chains = 4;
  double snr_db = 10.0;  // overridden by the sweep axis in SNR campaigns
  ChannelSpec channel;
  BeamSpec beams;
  // SNR in dB, angle spread in degrees, or rate threshold in bits/s/Hz.
  std::vector<double> sweep;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string output = "results";
  CoverageConfig coverage;

  void validate() const;  // throws std::invalid_argument
};

// Unknown keys are rejected at every level.
CampaignConfig parse_campaign_config(const nlohmann::json& j);
CampaignConfig load_campaign_config(const std::filesystem::path& path);
nlohmann::json to_json(const CampaignConfig& cfg);

}  // namespace mmhybrid
