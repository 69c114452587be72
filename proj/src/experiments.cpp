// SPDX-License-Identifier: Apache-2.0
#include "mmhybrid/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mmhybrid/montecarlo.hpp"

namespace mmhybrid {

const ResultRow* ResultTable::find(double axis, const std::string& series) const {
  for (const auto& r : rows) {
    if (r.axis == axis && r.series == series) return &r;
  }
  return nullptr;
}

std::vector<std::string> ResultTable::series_names() const {
  std::vector<std::string> names;
  for (const auto& r : rows) {
    if (std::find(names.begin(), names.end(), r.series) == names.end()) names.push_back(r.series);
  }
  return names;
}

ChannelEnsemble draw_users(const CampaignConfig& cfg, double angle_spread_rad, Rng& rng) {
  const ArrayGeometry bs = cfg.bs_array.build();
  const ArrayGeometry ms = cfg.ms_array.build();
  const AngleSampling angles = cfg.channel.angles();
  ChannelEnsemble users;
  users.reserve(static_cast<std::size_t>(cfg.users));
  for (int u = 0; u < cfg.users; ++u) {
    if (cfg.channel.model == ChannelModel::single_path) {
      users.push_back(draw_single_path(bs, ms, cfg.channel.mean_gain_power, rng, angles));
    } else {
      const ClusterParams cp{cfg.channel.clusters, cfg.channel.rays_per_cluster,
                             angle_spread_rad};
      users.push_back(draw_clustered(bs, ms, cp, cfg.channel.mean_gain_power, rng, angles));
    }
  }
  return users;
}

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double deg_to_rad(double deg) { return deg * kPi / 180.0; }

struct Codebooks {
  std::optional<Codebook> bs;
  std::optional<Codebook> ms;
};

Codebooks make_codebooks(const CampaignConfig& cfg) {
  Codebooks cbs;
  if (cfg.beams.mode == BeamMode::codebook) {
    cbs.bs = build_beamsteering_codebook(cfg.bs_array.build(), cfg.beams.bs_az, cfg.beams.bs_el,
                                         cfg.beams.bs_phase_bits);
    cbs.ms = build_beamsteering_codebook(cfg.ms_array.build(), cfg.beams.ms_az, cfg.beams.ms_el,
                                         cfg.beams.ms_phase_bits);
  }
  return cbs;
}

// Runs one sweep point and appends its rows in series order.
void run_point(const CampaignConfig& cfg, const Codebooks& cbs, std::uint64_t point,
               double axis, double snr_db, double spread_rad, ResultTable& table) {
  const std::string tag = to_string(cfg.kind);
  auto trial = [&](std::size_t t) -> std::optional<TrialRates> {
    Rng rng(derive_seed(cfg.seed, tag, point, t));
    const ChannelEnsemble users = draw_users(cfg, spread_rad, rng);
    try {
      return evaluate_trial(cfg, users, snr_db, cbs.bs ? &*cbs.bs : nullptr,
                            cbs.ms ? &*cbs.ms : nullptr);
    } catch (const SingularChannelError&) {
      return std::nullopt;
    }
  };
  const auto results = run_trials<TrialRates>(cfg.trials, trial, cfg.workers);

  RunningStats hybrid, single, steer, bound;
  bool has_bound = false;
  for (const auto& r : results) {
    if (!r) {
      ++table.discarded;
      continue;
    }
    hybrid.add(r->hybrid);
    single.add(r->single_user);
    steer.add(r->beamsteering);
    if (r->lower_bound) {
      has_bound = true;
      bound.add(*r->lower_bound);
    }
  }
  auto row = [&](const char* name, const RunningStats& s) {
    table.rows.push_back(ResultRow{axis, name, s.mean(), s.stderr_mean(), s.count()});
  };
  row("hybrid", hybrid);
  row("single_user", single);
  row("beamsteering", steer);
  if (has_bound) row("lower_bound", bound);
}

}  // namespace

TrialRates evaluate_trial(const CampaignConfig& cfg, std::span<const ChannelMatrix> users,
                          double snr_db, const Codebook* f_cb, const Codebook* w_cb) {
  const SystemConfig sc{cfg.bs_array.count(), cfg.ms_array.count(), cfg.rf_chains,
                        static_cast<int>(users.size()), snr_db};
  const bool codebook = cfg.beams.mode == BeamMode::codebook;
  if (codebook && (f_cb == nullptr || w_cb == nullptr)) {
    throw std::invalid_argument("evaluate_trial: codebook mode needs both codebooks");
  }
  auto [rf, comb] = codebook ? design_rf_codebook(users, *f_cb, *w_cb)
                             : design_rf_continuous(users);
  const EffectiveChannel eff = effective_channel(users, comb, rf);
  const BasebandPrecoder zf = zf_baseband(eff, rf);
  const BasebandPrecoder analog = analog_only_precoder(rf);

  TrialRates out;
  out.hybrid = mean_of(per_user_rates(users, comb, rf.f_rf, zf.f_bb, sc));
  out.beamsteering = mean_of(per_user_rates(users, comb, rf.f_rf, analog.f_bb, sc));
  const double rho = sc.snr() / sc.n_users;
  std::vector<double> single(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    const auto ui = static_cast<Eigen::Index>(u);
    single[u] = std::log2(1.0 + rho * std::norm(eff.h_bar(ui, ui)));
  }
  out.single_user = mean_of(single);

  const bool single_path = std::all_of(users.begin(), users.end(),
                                       [](const ChannelMatrix& c) { return c.paths.size() == 1; });
  if (single_path && !codebook) {
    std::vector<Complex> alphas;
    std::vector<Direction> aods;
    for (const auto& ch : users) {
      alphas.push_back(ch.paths.front().gain);
      aods.push_back(ch.paths.front().aod);
    }
    out.lower_bound = mean_of(rate_lower_bound(alphas, aods, users.front().bs_geom, sc).rates);
  }
  return out;
}

ResultTable run_snr_sweep(const CampaignConfig& cfg) {
  cfg.validate();
  ResultTable table;
  table.axis_name = "SNR (dB)";
  const Codebooks cbs = make_codebooks(cfg);
  const double spread = deg_to_rad(cfg.channel.angle_spread_deg);
  for (std::size_t p = 0; p < cfg.sweep.size(); ++p) {
    run_point(cfg, cbs, p, cfg.sweep[p], cfg.sweep[p], spread, table);
  }
  return table;
}

ResultTable run_angle_spread_sweep(const CampaignConfig& cfg) {
  cfg.validate();
  ResultTable table;
  table.axis_name = "angle spread (deg)";
  const Codebooks cbs = make_codebooks(cfg);
  for (std::size_t p = 0; p < cfg.sweep.size(); ++p) {
    run_point(cfg, cbs, p, cfg.sweep[p], cfg.snr_db, deg_to_rad(cfg.sweep[p]), table);
  }
  return table;
}

ResultTable run_campaign(const CampaignConfig& cfg) {
  switch (cfg.kind) {
    case CampaignKind::snr_sweep: return run_snr_sweep(cfg);
    case CampaignKind::angle_spread_sweep: return run_angle_spread_sweep(cfg);
    case CampaignKind::coverage: return run_coverage(cfg);
  }
  throw std::invalid_argument("run_campaign: unknown campaign kind");
}

}  // namespace mmhybrid
