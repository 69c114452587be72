// SPDX-License-Identifier: Apache-2.0
#include "mmhybrid/metrics.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mmhybrid/montecarlo.hpp"

namespace mmhybrid {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double SystemConfig::snr() const { return db_to_linear(snr_db); }

void SystemConfig::validate() const {
  if (n_bs < 1 || n_ms < 1 || n_rf < 1 || n_users < 1) {
    throw std::invalid_argument("SystemConfig: antenna, RF chain and user counts must be positive");
  }
  if (n_users > n_rf || n_rf > n_bs) {
    throw std::invalid_argument("SystemConfig: requires n_users <= n_rf <= n_bs");
  }
  if (!std::isfinite(snr_db)) throw std::invalid_argument("SystemConfig: snr_db must be finite");
}

namespace {

void check_single_path_inputs(std::span<const Complex> alphas, std::span<const Direction> aods,
                              const SystemConfig& cfg) {
  if (alphas.size() != aods.size() || alphas.empty()) {
    throw std::invalid_argument("rate: need one gain and one AoD per user");
  }
  if (static_cast<int>(alphas.size()) != cfg.n_users) {
    throw std::invalid_argument("rate: user count does not match SystemConfig");
  }
}

double per_stream_snr(const SystemConfig& cfg) { return cfg.snr() / cfg.n_users; }

double array_gain(const SystemConfig& cfg) {
  return static_cast<double>(cfg.n_bs) * static_cast<double>(cfg.n_ms);
}

}  // namespace

double per_user_rate(std::span<const ChannelMatrix> users, const CombinerSet& combiners,
                     const CMatrix& f_rf, const CMatrix& f_bb, const SystemConfig& cfg,
                     std::size_t u) {
  if (u >= users.size() || combiners.w.size() != users.size()) {
    throw std::invalid_argument("per_user_rate: user index out of range");
  }
  const double rho = per_stream_snr(cfg);
  const Eigen::RowVectorXcd row = combiners.w[u].adjoint() * users[u].h * f_rf * f_bb;
  double signal = 0.0;
  double interference = 0.0;
  for (Eigen::Index n = 0; n < row.size(); ++n) {
    const double p = std::norm(row[n]);
    if (static_cast<std::size_t>(n) == u) {
      signal = p;
    } else {
      interference += p;
    }
  }
  return std::log2(1.0 + rho * signal / (rho * interference + 1.0));
}

std::vector<double> per_user_rates(std::span<const ChannelMatrix> users,
                                   const CombinerSet& combiners, const CMatrix& f_rf,
                                   const CMatrix& f_bb, const SystemConfig& cfg) {
  std::vector<double> r(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    r[u] = per_user_rate(users, combiners, f_rf, f_bb, cfg, u);
  }
  return r;
}

CMatrix steering_matrix(const ArrayGeometry& bs_geom, std::span<const Direction> aods) {
  CMatrix a(static_cast<Eigen::Index>(bs_geom.size()), static_cast<Eigen::Index>(aods.size()));
  for (std::size_t u = 0; u < aods.size(); ++u) {
    a.col(static_cast<Eigen::Index>(u)) = steering_vector(bs_geom, aods[u]);
  }
  return a;
}

std::vector<double> closed_form_zf_rate(std::span<const Complex> alphas,
                                        std::span<const Direction> aods,
                                        const ArrayGeometry& bs_geom, const SystemConfig& cfg) {
  check_single_path_inputs(alphas, aods, cfg);
  const CMatrix a = steering_matrix(bs_geom, aods);
  const CMatrix gram = a.adjoint() * a;
  Eigen::LDLT<CMatrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().real().minCoeff() > 0.0)) {
    throw SingularChannelError("closed_form_zf_rate: singular Gram matrix",
                               std::numeric_limits<double>::infinity());
  }
  const CMatrix inv = ldlt.solve(CMatrix::Identity(gram.rows(), gram.cols()));
  std::vector<double> r(alphas.size());
  for (std::size_t u = 0; u < alphas.size(); ++u) {
    const double d = inv(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u)).real();
    r[u] = std::log2(1.0 + per_stream_snr(cfg) * array_gain(cfg) * std::norm(alphas[u]) / d);
  }
  return r;
}

double single_user_rate(Complex alpha, const SystemConfig& cfg) {
  return std::log2(1.0 + per_stream_snr(cfg) * array_gain(cfg) * std::norm(alpha));
}

std::vector<double> beamsteering_rate(std::span<const Complex> alphas,
                                      std::span<const Direction> aods,
                                      const ArrayGeometry& bs_geom, const SystemConfig& cfg) {
  check_single_path_inputs(alphas, aods, cfg);
  const CMatrix a = steering_matrix(bs_geom, aods);
  const CMatrix beta = a.adjoint() * a;
  std::vector<double> r(alphas.size());
  for (std::size_t u = 0; u < alphas.size(); ++u) {
    const auto ui = static_cast<Eigen::Index>(u);
    double leak = 0.0;
    for (Eigen::Index n = 0; n < beta.cols(); ++n) {
      if (n != ui) leak += std::norm(beta(ui, n));
    }
    const double s = per_stream_snr(cfg) * array_gain(cfg) * std::norm(alphas[u]);
    r[u] = std::log2(1.0 + s / (s * leak + 1.0));
  }
  return r;
}

double g_factor(const CMatrix& a_bs) {
  Eigen::JacobiSVD<CMatrix> svd(a_bs);
  const auto& s = svd.singularValues();
  const double smax = s[0];
  const double smin = s[s.size() - 1];
  const double tol = smax * std::numeric_limits<double>::epsilon() * static_cast<double>(s.size());
  if (!(smin > tol)) throw std::invalid_argument("g_factor: A_BS is rank deficient");
  const double ratio = (smax * smax) / (smin * smin);
  return 4.0 / (ratio + 1.0 / ratio + 2.0);
}

LowerBound rate_lower_bound(std::span<const Complex> alphas, std::span<const Direction> aods,
                            const ArrayGeometry& bs_geom, const SystemConfig& cfg) {
  check_single_path_inputs(alphas, aods, cfg);
  LowerBound lb;
  lb.g_value = g_factor(steering_matrix(bs_geom, aods));
  lb.rates.resize(alphas.size());
  for (std::size_t u = 0; u < alphas.size(); ++u) {
    lb.rates[u] = std::log2(1.0 + per_stream_snr(cfg) * array_gain(cfg) * std::norm(alphas[u]) *
                                      lb.g_value);
  }
  return lb;
}

KantorovichResult kantorovich_check(const CMatrix& gram, double tolerance) {
  if (gram.rows() != gram.cols() || gram.rows() == 0) {
    throw std::invalid_argument("kantorovich_check: matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if ((gram - gram.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("kantorovich_check: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmin > 0.0)) throw std::invalid_argument("kantorovich_check: matrix is not positive definite");
  const CMatrix inv = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
                      eig.eigenvectors().adjoint();
  const double kappa = lmax / lmin + lmin / lmax + 2.0;
  KantorovichResult res{true, std::numeric_limits<double>::infinity()};
  for (Eigen::Index u = 0; u < gram.rows(); ++u) {
    const double bound = kappa / (4.0 * gram(u, u).real());
    const double slack = bound - inv(u, u).real();
    res.min_slack = std::min(res.min_slack, slack);
    if (slack < -tolerance * std::max(1.0, bound)) res.holds = false;
  }
  return res;
}

RateReport single_path_report(std::span<const ChannelMatrix> users, const SystemConfig& cfg) {
  std::vector<Complex> alphas;
  std::vector<Direction> aods;
  for (const auto& ch : users) {
    if (ch.paths.size() != 1) throw std::invalid_argument("single_path_report: multi-path user");
    alphas.push_back(ch.paths.front().gain);
    aods.push_back(ch.paths.front().aod);
  }
  const ArrayGeometry& bs = users.front().bs_geom;
  const HybridDesign design = run_two_stage_continuous(users, cfg.n_rf);

  RateReport rep;
  rep.per_user_rate = per_user_rates(users, design.combiners, design.rf.f_rf,
                                     design.baseband.f_bb, cfg);
  rep.sum_rate = std::accumulate(rep.per_user_rate.begin(), rep.per_user_rate.end(), 0.0);
  rep.closed_form_rate = closed_form_zf_rate(alphas, aods, bs, cfg);
  LowerBound lb = rate_lower_bound(alphas, aods, bs, cfg);
  rep.lower_bound = std::move(lb.rates);
  rep.g_value = lb.g_value;
  for (const auto& a : alphas) rep.single_user_rate.push_back(single_user_rate(a, cfg));
  rep.beamsteering_rate = beamsteering_rate(alphas, aods, bs, cfg);
  return rep;
}

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Draws the U single-path users of one trial on ULAs with horizon elevation.
ChannelEnsemble draw_ula_users(int n_bs, int n_ms, int n_users, std::uint64_t seed) {
  const ArrayGeometry bs = ula_geometry(n_bs);
  const ArrayGeometry ms = ula_geometry(n_ms);
  Rng rng(seed);
  ChannelEnsemble users;
  for (int u = 0; u < n_users; ++u) {
    users.push_back(draw_single_path(bs, ms, 1.0, rng, AngleSampling::fixed_elevation(0.0)));
  }
  return users;
}

template <class TrialFn>
GapPoint gap_point(double axis, const GapSweepConfig& cfg, TrialFn&& fn) {
  auto results = run_trials<double>(cfg.trials, fn, cfg.workers);
  GapPoint pt;
  pt.axis = axis;
  std::vector<double> kept;
  kept.reserve(results.size());
  for (const auto& r : results) {
    if (!r) {
      ++pt.discarded;
      continue;
    }
    pt.gap.add(*r);
    kept.push_back(*r);
  }
  if (!kept.empty()) pt.median_gap = median(std::move(kept));
  return pt;
}

std::optional<double> trial_gap(const GapSweepConfig& cfg, int n_bs, int n_ms, double snr_db,
                                std::size_t trial, bool versus_beamsteering) {
  const ChannelEnsemble users =
      draw_ula_users(n_bs, n_ms, cfg.n_users, derive_seed(cfg.seed, "asymptotic_gap", 0, trial));
  SystemConfig sc{n_bs, n_ms, cfg.n_users, cfg.n_users, snr_db};
  try {
    const RateReport rep = single_path_report(users, sc);
    std::vector<double> gap(users.size());
    for (std::size_t u = 0; u < users.size(); ++u) {
      gap[u] = versus_beamsteering ? rep.per_user_rate[u] - rep.beamsteering_rate[u]
                                   : rep.single_user_rate[u] - rep.per_user_rate[u];
    }
    return mean_of(gap);
  } catch (const SingularChannelError&) {
    return std::nullopt;
  }
}

}  // namespace

GapDiagnostics asymptotic_gap_diagnostics(const GapSweepConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("asymptotic_gap_diagnostics: trials must be >= 1");
  GapDiagnostics out;
  for (double snr : cfg.snr_db_values) {
    out.single_user_gap_vs_snr.push_back(gap_point(snr, cfg, [&](std::size_t t) {
      return trial_gap(cfg, cfg.n_bs, cfg.n_ms, snr, t, false);
    }));
  }
  for (int n_bs : cfg.n_bs_values) {
    out.single_user_gap_vs_n_bs.push_back(gap_point(n_bs, cfg, [&](std::size_t t) {
      return trial_gap(cfg, n_bs, cfg.n_ms, cfg.snr_db, t, false);
    }));
  }
  for (int n_ms : cfg.n_ms_values) {
    out.beamsteering_gap_vs_n_ms.push_back(gap_point(n_ms, cfg, [&](std::size_t t) {
      return trial_gap(cfg, cfg.n_bs, n_ms, cfg.snr_db, t, true);
    }));
  }
  return out;
}

}  // namespace mmhybrid
