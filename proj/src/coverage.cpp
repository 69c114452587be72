// SPDX-License-Identifier: Apache-2.0
// Poisson cellular deployment: path-loss association, per-cell hybrid or
// beamsteering precoding, uncoordinated inter-cell interference.
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mmhybrid/experiments.hpp"
#include "mmhybrid/montecarlo.hpp"

namespace mmhybrid {

namespace {

constexpr std::size_t kDropsPerWave = 8;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Cell {
  std::vector<std::size_t> users;  // indices into DropState::served
  CMatrix tx_hybrid;               // F_RF F_BB, N_BS x U_b
  CMatrix tx_steer;
  bool zf_ok = true;
};

struct ServedUser {
  std::size_t cell = 0;
  std::size_t slot = 0;  // column within the serving cell
  CVector w;
  std::vector<PathComponent> links;  // one per cell, indexed like DropState::cells
};

struct DropRates {
  std::vector<double> hybrid;
  std::vector<double> steer;
};

std::vector<Point2> draw_ppp(Rng& rng, double mean_count, double side) {
  std::poisson_distribution<long> count(mean_count);
  std::uniform_real_distribution<double> coord(0.0, side);
  const long n = count(rng);
  std::vector<Point2> pts(static_cast<std::size_t>(n));
  for (auto& p : pts) {
    p.x = coord(rng);
    p.y = coord(rng);
  }
  return pts;
}

std::optional<DropRates> simulate_drop(const CampaignConfig& cfg, int users_per_cell,
                                       const Codebook* f_cb, const Codebook* w_cb,
                                       std::uint64_t seed) {
  const CoverageConfig& cv = cfg.coverage;
  Rng rng(seed);
  const double side = cv.window_side_m;
  const double area_km2 = (side / 1000.0) * (side / 1000.0);
  const auto bss = draw_ppp(rng, cv.bs_density_per_km2 * area_km2, side);
  const auto mss = draw_ppp(rng, cv.bs_density_per_km2 * cv.ms_density_multiplier * area_km2, side);
  if (bss.empty() || mss.empty()) return std::nullopt;

  const std::size_t n_b = bss.size();
  const std::size_t n_m = mss.size();
  // Path loss of every MS-BS link with an independent LOS/NLOS state.
  std::vector<double> pl_db(n_m * n_b);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double ref = cv.reference_loss_db();
  for (std::size_t m = 0; m < n_m; ++m) {
    for (std::size_t b = 0; b < n_b; ++b) {
      const double r = std::max(1.0, std::hypot(mss[m].x - bss[b].x, mss[m].y - bss[b].y));
      const bool los = unit(rng) < std::exp(-r / cv.los_decay_m);
      const double exponent = los ? cv.pathloss_exponent_los : cv.pathloss_exponent_nlos;
      pl_db[m * n_b + b] = ref + 10.0 * exponent * std::log10(r);
    }
  }
  std::vector<std::vector<std::size_t>> associated(n_b);
  for (std::size_t m = 0; m < n_m; ++m) {
    const auto first = pl_db.begin() + static_cast<std::ptrdiff_t>(m * n_b);
    const auto best = std::min_element(first, first + static_cast<std::ptrdiff_t>(n_b)) - first;
    associated[static_cast<std::size_t>(best)].push_back(m);
  }

  // Each BS serves a random subset of its associated users.
  std::vector<std::size_t> active;       // BS indices with users
  std::vector<std::size_t> served_ms;    // MS index per served user
  std::vector<Cell> cells;
  std::vector<ServedUser> served;
  for (std::size_t b = 0; b < n_b; ++b) {
    auto& pool = associated[b];
    if (pool.empty()) continue;
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t k = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(users_per_cell));
    Cell cell;
    for (std::size_t i = 0; i < k; ++i) {
      cell.users.push_back(served.size());
      ServedUser su;
      su.cell = cells.size();
      su.slot = i;
      served.push_back(std::move(su));
      served_ms.push_back(pool[i]);
    }
    active.push_back(b);
    cells.push_back(std::move(cell));
  }
  if (served.empty()) return std::nullopt;

  const AngleSampling horizon = AngleSampling::fixed_elevation(0.0);
  for (std::size_t i = 0; i < served.size(); ++i) {
    auto& su = served[i];
    su.links.resize(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double power = std::pow(10.0, -pl_db[served_ms[i] * n_b + active[c]] / 10.0);
      su.links[c].gain = draw_complex_gaussian(rng, power);
      su.links[c].aod = draw_direction(rng, horizon);
      su.links[c].aoa = draw_direction(rng, horizon);
    }
  }

  const ArrayGeometry bs_geom = cfg.bs_array.build();
  const ArrayGeometry ms_geom = cfg.ms_array.build();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    Cell& cell = cells[c];
    ChannelEnsemble own;
    for (std::size_t idx : cell.users) {
      own.push_back(make_channel({served[idx].links[c]}, bs_geom, ms_geom));
    }
    auto [rf, comb] = f_cb != nullptr ? design_rf_codebook(own, *f_cb, *w_cb)
                                      : design_rf_continuous(own);
    for (std::size_t k = 0; k < cell.users.size(); ++k) served[cell.users[k]].w = comb.w[k];
    const BasebandPrecoder analog = analog_only_precoder(rf);
    cell.tx_steer = rf.f_rf * analog.f_bb;
    try {
      const BasebandPrecoder zf = zf_baseband(effective_channel(own, comb, rf), rf);
      cell.tx_hybrid = rf.f_rf * zf.f_bb;
    } catch (const SingularChannelError&) {
      // The cell still radiates (beamsteering) but its users are not sampled.
      cell.zf_ok = false;
      cell.tx_hybrid = cell.tx_steer;
    }
  }

  const double snr = db_to_linear(cv.tx_power_dbm - cv.noise_power_dbm());
  const double array_amp = std::sqrt(static_cast<double>(bs_geom.size() * ms_geom.size()));
  DropRates out;
  for (const auto& su : served) {
    if (!cells[su.cell].zf_ok) continue;
    double sig_h = 0.0, int_h = 0.0, sig_s = 0.0, int_s = 0.0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const PathComponent& link = su.links[c];
      // w^* H = sqrt(N_BS N_MS) alpha (w^* a_MS) a_BS^*
      const Complex scale =
          array_amp * link.gain * su.w.dot(steering_vector(ms_geom, link.aoa));
      const Eigen::RowVectorXcd a_bs = steering_vector(bs_geom, link.aod).adjoint();
      const Eigen::RowVectorXcd row_h = scale * (a_bs * cells[c].tx_hybrid);
      const Eigen::RowVectorXcd row_s = scale * (a_bs * cells[c].tx_steer);
      const double rho = snr / static_cast<double>(cells[c].users.size());
      for (Eigen::Index n = 0; n < row_h.size(); ++n) {
        const bool desired = c == su.cell && static_cast<std::size_t>(n) == su.slot;
        (desired ? sig_h : int_h) += rho * std::norm(row_h[n]);
        (desired ? sig_s : int_s) += rho * std::norm(row_s[n]);
      }
    }
    out.hybrid.push_back(std::log2(1.0 + sig_h / (int_h + 1.0)));
    out.steer.push_back(std::log2(1.0 + sig_s / (int_s + 1.0)));
  }
  return out;
}

}  // namespace

CoverageSamples simulate_coverage_users(const CampaignConfig& cfg, int users_per_cell,
                                        std::uint64_t point) {
  cfg.validate();
  std::optional<Codebook> f_cb, w_cb;
  if (cfg.beams.mode == BeamMode::codebook) {
    f_cb = build_beamsteering_codebook(cfg.bs_array.build(), cfg.beams.bs_az, cfg.beams.bs_el,
                                       cfg.beams.bs_phase_bits);
    w_cb = build_beamsteering_codebook(cfg.ms_array.build(), cfg.beams.ms_az, cfg.beams.ms_el,
                                       cfg.beams.ms_phase_bits);
  }
  CoverageSamples samples;
  std::size_t next_drop = 0;
  // Fixed-size waves keep the set of simulated drops independent of workers.
  while (samples.hybrid.size() < cfg.coverage.user_samples) {
    const std::size_t base = next_drop;
    auto wave = run_trials<DropRates>(
        kDropsPerWave,
        [&](std::size_t i) {
          return simulate_drop(cfg, users_per_cell, f_cb ? &*f_cb : nullptr,
                               w_cb ? &*w_cb : nullptr,
                               derive_seed(cfg.seed, "coverage", point, base + i));
        },
        cfg.workers);
    next_drop += kDropsPerWave;
    for (auto& d : wave) {
      ++samples.drops;
      if (!d || d->hybrid.empty()) {
        ++samples.discarded_drops;
        continue;
      }
      samples.hybrid.insert(samples.hybrid.end(), d->hybrid.begin(), d->hybrid.end());
      samples.beamsteering.insert(samples.beamsteering.end(), d->steer.begin(), d->steer.end());
    }
    if (samples.drops > 1000 * kDropsPerWave && samples.hybrid.empty()) {
      throw std::runtime_error("run_coverage: no users served in any drop");
    }
  }
  return samples;
}

ResultTable run_coverage(const CampaignConfig& cfg) {
  cfg.validate();
  ResultTable table;
  table.axis_name = "rate threshold (bits/s/Hz)";
  const auto& ns = cfg.coverage.users_per_cell;
  std::vector<CoverageSamples> per_n;
  for (std::size_t p = 0; p < ns.size(); ++p) {
    per_n.push_back(simulate_coverage_users(cfg, ns[p], p));
    table.discarded += per_n.back().discarded_drops;
  }
  auto coverage_row = [](double eta, std::string name, const std::vector<double>& rates) {
    const auto hits = std::count_if(rates.begin(), rates.end(), [&](double r) { return r >= eta; });
    const double n = static_cast<double>(rates.size());
    const double p = static_cast<double>(hits) / n;
    return ResultRow{eta, std::move(name), p, std::sqrt(p * (1.0 - p) / n), rates.size()};
  };
  for (double eta : cfg.sweep) {
    for (std::size_t p = 0; p < ns.size(); ++p) {
      const std::string suffix = "_n" + std::to_string(ns[p]);
      table.rows.push_back(coverage_row(eta, "hybrid" + suffix, per_n[p].hybrid));
      table.rows.push_back(coverage_row(eta, "beamsteering" + suffix, per_n[p].beamsteering));
    }
  }
  return table;
}

}  // namespace mmhybrid
