// SPDX-License-Identifier: Apache-2.0
#include "mmhybrid/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string_view>

namespace mmhybrid {

using nlohmann::json;

std::string to_string(CampaignKind k) {
  switch (k) {
    case CampaignKind::snr_sweep: return "snr_sweep";
    case CampaignKind::angle_spread_sweep: return "angle_spread_sweep";
    case CampaignKind::coverage: return "coverage";
  }
  return "unknown";
}

AngleSampling ChannelSpec::angles() const {
  return elevation == ElevationModel::horizon ? AngleSampling::fixed_elevation(0.0)
                                              : AngleSampling{};
}

double CoverageConfig::reference_loss_db() const {
  const double wavelength_m = 299792458.0 / (carrier_ghz * 1e9);
  return 20.0 * std::log10(4.0 * kPi / wavelength_m);
}

double CoverageConfig::noise_power_dbm() const {
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double CoverageConfig::mean_bs_spacing_m() const {
  return 1000.0 / std::sqrt(bs_density_per_km2);
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

void reject_unknown(const json& j, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) fail("unknown key '" + key + "' in " + std::string(where));
  }
}

template <class T>
void read(const json& j, const char* key, T& out, std::string_view where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(std::string(where) + "." + key + ": " + e.what());
  }
}

template <class E>
E read_enum(const json& j, const char* key, E current, std::string_view where,
            std::initializer_list<std::pair<std::string_view, E>> names) {
  if (!j.contains(key)) return current;
  if (!j.at(key).is_string()) fail(std::string(where) + "." + key + " must be a string");
  const auto s = j.at(key).get<std::string>();
  for (const auto& [name, value] : names) {
    if (s == name) return value;
  }
  fail("invalid value '" + s + "' for " + std::string(where) + "." + key);
}

ArraySpec parse_array(const json& j, std::string_view where, ArraySpec a) {
  reject_unknown(j, where, {"rows", "cols", "spacing"});
  read(j, "rows", a.rows, where);
  read(j, "cols", a.cols, where);
  read(j, "spacing", a.spacing, where);
  return a;
}

json array_json(const ArraySpec& a) {
  return {{"rows", a.rows}, {"cols", a.cols}, {"spacing", a.spacing}};
}

}  // namespace

void CampaignConfig::validate() const {
  if (bs_array.rows < 1 || bs_array.cols < 1 || ms_array.rows < 1 || ms_array.cols < 1) {
    fail("array dimensions must be >= 1");
  }
  if (!(bs_array.spacing > 0.0) || !(ms_array.spacing > 0.0)) fail("array spacing must be positive");
  if (users < 1) fail("users must be >= 1");
  if (rf_chains < users) fail("rf_chains must be >= users");
  if (rf_chains > bs_array.count()) fail("rf_chains must not exceed the BS antenna count");
  if (sweep.empty()) fail("sweep must be non-empty");
  for (double v : sweep) {
    if (!std::isfinite(v)) fail("sweep values must be finite");
  }
  if (trials < 1) fail("trials must be >= 1");
  if (workers < 0) fail("workers must be >= 0");
  if (!(channel.mean_gain_power > 0.0)) fail("channel.mean_gain_power must be positive");
  if (channel.clusters < 1 || channel.rays_per_cluster < 1) fail("channel cluster/ray counts must be >= 1");
  if (!(channel.angle_spread_deg >= 0.0)) fail("channel.angle_spread_deg must be >= 0");
  if (beams.mode == BeamMode::codebook) {
    if (beams.bs_az < 1 || beams.bs_el < 1 || beams.ms_az < 1 || beams.ms_el < 1) {
      fail("codebook grids must be non-empty");
    }
  } else if (channel.model != ChannelModel::single_path) {
    fail("continuous beams require the single_path channel model");
  }
  if (beams.bs_phase_bits < 0 || beams.bs_phase_bits > 30 || beams.ms_phase_bits < 0 ||
      beams.ms_phase_bits > 30) {
    fail("phase bits must be in [0, 30]");
  }
  if (kind == CampaignKind::angle_spread_sweep) {
    if (channel.model != ChannelModel::clustered) fail("angle_spread_sweep needs the clustered channel");
    for (double v : sweep) {
      if (v < 0.0) fail("angle spreads must be >= 0");
    }
  }
  if (kind == CampaignKind::coverage) {
    const auto& c = coverage;
    if (channel.model != ChannelModel::single_path) fail("coverage uses single_path channels");
    if (!(c.bs_density_per_km2 > 0.0) || !(c.ms_density_multiplier > 0.0)) {
      fail("coverage densities must be positive");
    }
    if (c.window_side_m < 10.0 * c.mean_bs_spacing_m()) {
      fail("coverage.window_side_m must be at least 10x the mean BS spacing");
    }
    if (c.users_per_cell.empty()) fail("coverage.users_per_cell must be non-empty");
    for (int n : c.users_per_cell) {
      if (n < 1 || n > rf_chains) fail("coverage.users_per_cell entries must be in [1, rf_chains]");
    }
    if (!(c.los_decay_m > 0.0) || !(c.carrier_ghz > 0.0) || !(c.bandwidth_hz > 0.0)) {
      fail("coverage.los_decay_m, carrier_ghz and bandwidth_hz must be positive");
    }
    if (c.user_samples < 1) fail("coverage.user_samples must be >= 1");
  }
}

CampaignConfig parse_campaign_config(const json& j) {
  reject_unknown(j, "config",
                 {"campaign", "bs_array", "ms_array", "users", "rf_chains", "snr_db", "channel",
                  "beams", "sweep", "trials", "seed", "workers", "output", "coverage"});
  if (!j.contains("campaign")) fail("missing 'campaign'");
  if (!j.contains("sweep")) fail("missing 'sweep'");
  CampaignConfig c;
  c.kind = read_enum(j, "campaign", c.kind, "config",
                     {{"snr_sweep", CampaignKind::snr_sweep},
                      {"angle_spread_sweep", CampaignKind::angle_spread_sweep},
                      {"coverage", CampaignKind::coverage}});
  if (j.contains("bs_array")) c.bs_array = parse_array(j.at("bs_array"), "bs_array", c.bs_array);
  if (j.contains("ms_array")) c.ms_array = parse_array(j.at("ms_array"), "ms_array", c.ms_array);
  read(j, "users", c.users, "config");
  c.rf_chains = c.users;
  read(j, "rf_chains", c.rf_chains, "config");
  read(j, "snr_db", c.snr_db, "config");
  read(j, "sweep", c.sweep, "config");
  read(j, "trials", c.trials, "config");
  read(j, "seed", c.seed, "config");
  read(j, "workers", c.workers, "config");
  read(j, "output", c.output, "config");

  if (j.contains("channel")) {
    const json& ch = j.at("channel");
    reject_unknown(ch, "channel",
                   {"model", "clusters", "rays_per_cluster", "angle_spread_deg",
                    "mean_gain_power", "elevation"});
    c.channel.model = read_enum(ch, "model", c.channel.model, "channel",
                                {{"single_path", ChannelModel::single_path},
                                 {"clustered", ChannelModel::clustered}});
    read(ch, "clusters", c.channel.clusters, "channel");
    read(ch, "rays_per_cluster", c.channel.rays_per_cluster, "channel");
    read(ch, "angle_spread_deg", c.channel.angle_spread_deg, "channel");
    read(ch, "mean_gain_power", c.channel.mean_gain_power, "channel");
    c.channel.elevation = read_enum(ch, "elevation", c.channel.elevation, "channel",
                                    {{"uniform", ElevationModel::uniform},
                                     {"horizon", ElevationModel::horizon}});
  }
  if (j.contains("beams")) {
    const json& b = j.at("beams");
    reject_unknown(b, "beams",
                   {"mode", "bs_grid", "ms_grid", "bs_phase_bits", "ms_phase_bits"});
    c.beams.mode = read_enum(b, "mode", c.beams.mode, "beams",
                             {{"continuous", BeamMode::continuous},
                              {"codebook", BeamMode::codebook}});
    auto grid = [&](const char* key, int& az, int& el) {
      if (!b.contains(key)) return;
      std::vector<int> g;
      read(b, key, g, "beams");
      if (g.size() != 2) fail(std::string("beams.") + key + " must be [n_azimuth, n_elevation]");
      az = g[0];
      el = g[1];
    };
    grid("bs_grid", c.beams.bs_az, c.beams.bs_el);
    grid("ms_grid", c.beams.ms_az, c.beams.ms_el);
    read(b, "bs_phase_bits", c.beams.bs_phase_bits, "beams");
    read(b, "ms_phase_bits", c.beams.ms_phase_bits, "beams");
  }
  if (j.contains("coverage")) {
    const json& cv = j.at("coverage");
    reject_unknown(cv, "coverage",
                   {"bs_density_per_km2", "ms_density_multiplier", "window_side_m",
                    "users_per_cell", "los_decay_m", "pathloss_exponent_los",
                    "pathloss_exponent_nlos", "carrier_ghz", "tx_power_dbm", "noise_figure_db",
                    "bandwidth_hz", "user_samples"});
    auto& o = c.coverage;
    read(cv, "bs_density_per_km2", o.bs_density_per_km2, "coverage");
    read(cv, "ms_density_multiplier", o.ms_density_multiplier, "coverage");
    read(cv, "window_side_m", o.window_side_m, "coverage");
    read(cv, "users_per_cell", o.users_per_cell, "coverage");
    read(cv, "los_decay_m", o.los_decay_m, "coverage");
    read(cv, "pathloss_exponent_los", o.pathloss_exponent_los, "coverage");
    read(cv, "pathloss_exponent_nlos", o.pathloss_exponent_nlos, "coverage");
    read(cv, "carrier_ghz", o.carrier_ghz, "coverage");
    read(cv, "tx_power_dbm", o.tx_power_dbm, "coverage");
    read(cv, "noise_figure_db", o.noise_figure_db, "coverage");
    read(cv, "bandwidth_hz", o.bandwidth_hz, "coverage");
    read(cv, "user_samples", o.user_samples, "coverage");
  }
  c.validate();
  return c;
}

CampaignConfig load_campaign_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + path.string() + ": " + e.what());
  }
  return parse_campaign_config(j);
}

json to_json(const CampaignConfig& c) {
  json j;
  j["campaign"] = to_string(c.kind);
  j["bs_array"] = array_json(c.bs_array);
  j["ms_array"] = array_json(c.ms_array);
  j["users"] = c.users;
  j["rf_chains"] = c.rf_chains;
  j["snr_db"] = c.snr_db;
  j["channel"] = {
      {"model", c.channel.model == ChannelModel::single_path ? "single_path" : "clustered"},
      {"clusters", c.channel.clusters},
      {"rays_per_cluster", c.channel.rays_per_cluster},
      {"angle_spread_deg", c.channel.angle_spread_deg},
      {"mean_gain_power", c.channel.mean_gain_power},
      {"elevation", c.channel.elevation == ElevationModel::uniform ? "uniform" : "horizon"}};
  j["beams"] = {{"mode", c.beams.mode == BeamMode::continuous ? "continuous" : "codebook"},
                {"bs_grid", {c.beams.bs_az, c.beams.bs_el}},
                {"ms_grid", {c.beams.ms_az, c.beams.ms_el}},
                {"bs_phase_bits", c.beams.bs_phase_bits},
                {"ms_phase_bits", c.beams.ms_phase_bits}};
  j["sweep"] = c.sweep;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["output"] = c.output;
  if (c.kind == CampaignKind::coverage) {
    const auto& o = c.coverage;
    j["coverage"] = {{"bs_density_per_km2", o.bs_density_per_km2},
                     {"ms_density_multiplier", o.ms_density_multiplier},
                     {"window_side_m", o.window_side_m},
                     {"users_per_cell", o.users_per_cell},
                     {"los_decay_m", o.los_decay_m},
                     {"pathloss_exponent_los", o.pathloss_exponent_los},
                     {"pathloss_exponent_nlos", o.pathloss_exponent_nlos},
                     {"carrier_ghz", o.carrier_ghz},
                     {"tx_power_dbm", o.tx_power_dbm},
                     {"noise_figure_db", o.noise_figure_db},
                     {"bandwidth_hz", o.bandwidth_hz},
                     {"user_samples", o.user_samples}};
  }
  return j;
}

}  // namespace mmhybrid
