// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmhybrid/config.hpp"
#include "mmhybrid/metrics.hpp"

namespace mmhybrid {

struct ResultRow {
  double axis = 0.0;
  std::string series;
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t count = 0;

  bool operator==(const ResultRow&) const = default;
};

struct ResultTable {
  std::string axis_name;
  std::vector<ResultRow> rows;
  std::uint64_t discarded = 0;  // trials or drops dropped (singular ZF, empty drop)

  const ResultRow* find(double axis, const std::string& series) const;
  std::vector<std::string> series_names() const;  // in first-appearance order
};

// Rates of one trial, averaged over its users. lower_bound is only defined
// for single-path channels with continuous beams.
struct TrialRates {
  double hybrid = 0.0;
  double single_user = 0.0;
  double beamsteering = 0.0;
  std::optional<double> lower_bound;
};

// Draws the users of one trial from the campaign's channel model.
ChannelEnsemble draw_users(const CampaignConfig& cfg, double angle_spread_rad, Rng& rng);

// Two-stage hybrid design, analog-only beamsteering on the same RF beams, and
// the interference-free rate of each user's stage-1 beam pair. Throws
// SingularChannelError when ZF is not possible.
TrialRates evaluate_trial(const CampaignConfig& cfg, std::span<const ChannelMatrix> users,
                          double snr_db, const Codebook* f_cb, const Codebook* w_cb);

// Series: hybrid, single_user, beamsteering, and lower_bound when defined.
ResultTable run_snr_sweep(const CampaignConfig& cfg);
// Series: hybrid, single_user, beamsteering. Sweep values in degrees.
ResultTable run_angle_spread_sweep(const CampaignConfig& cfg);
// Series hybrid_n<k> and beamsteering_n<k>: P(R_u >= eta) per threshold.
ResultTable run_coverage(const CampaignConfig& cfg);

ResultTable run_campaign(const CampaignConfig& cfg);

// Per-user rates collected by the coverage simulation for one users-per-cell
// value, paired hybrid/beamsteering on identical users.
struct CoverageSamples {
  std::vector<double> hybrid;
  std::vector<double> beamsteering;
  std::size_t drops = 0;
  std::size_t discarded_drops = 0;
};
CoverageSamples simulate_coverage_users(const CampaignConfig& cfg, int users_per_cell,
                                        std::uint64_t point);

}  // namespace mmhybrid
