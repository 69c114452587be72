// SPDX-License-Identifier: Apache-2.0
#include "mmhybrid/precoding.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <omp.h>

namespace mmhybrid {

namespace {

void check_codebooks(const ChannelMatrix& ch, const Codebook& f_cb, const Codebook& w_cb) {
  if (f_cb.size() == 0 || w_cb.size() == 0) {
    throw std::invalid_argument("stage1_select: codebooks must be non-empty");
  }
  if (f_cb.vectors.front().size() != ch.h.cols() || w_cb.vectors.front().size() != ch.h.rows()) {
    throw std::invalid_argument("stage1_select: codebook dimensions do not match the channel");
  }
}

Stage1Result make_result(const Codebook& f_cb, const Codebook& w_cb, std::size_t wi,
                         std::size_t vi, double objective) {
  Stage1Result r;
  r.v = f_cb.vectors[vi];
  r.g = w_cb.vectors[wi];
  r.bs = BeamChoice{vi, f_cb.grid[vi]};
  r.ms = BeamChoice{wi, w_cb.grid[wi]};
  r.objective = objective;
  return r;
}

// Work size (complex MACs) above which the stage-1 rows are split across threads.
constexpr double kParallelSearchWork = 3e4;

void check_users(std::span<const ChannelMatrix> users, int n_rf) {
  if (users.empty()) throw std::invalid_argument("run_two_stage: no users");
  const auto u = static_cast<int>(users.size());
  if (n_rf != 0 && u > n_rf) {
    throw std::invalid_argument("run_two_stage: " + std::to_string(u) +
                                " users exceed " + std::to_string(n_rf) + " RF chains");
  }
  const auto n_bs = users.front().h.cols();
  for (const auto& ch : users) {
    if (ch.h.cols() != n_bs) {
      throw std::invalid_argument("run_two_stage: users must share the BS array");
    }
  }
}

std::pair<RfPrecoder, CombinerSet> collect(std::span<const ChannelMatrix> users,
                                           const std::vector<Stage1Result>& picks) {
  RfPrecoder rf;
  CombinerSet comb;
  rf.f_rf.resize(users.front().h.cols(), static_cast<Eigen::Index>(users.size()));
  for (std::size_t u = 0; u < picks.size(); ++u) {
    rf.f_rf.col(static_cast<Eigen::Index>(u)) = picks[u].v;
    rf.selections.push_back(picks[u].bs);
    comb.w.push_back(picks[u].g);
    comb.selections.push_back(picks[u].ms);
  }
  return {std::move(rf), std::move(comb)};
}

}  // namespace

Stage1Result stage1_select(const ChannelMatrix& ch, const Codebook& f_cb, const Codebook& w_cb) {
  check_codebooks(ch, f_cb, w_cb);
  // H v for every BS beam once; each combiner row is then a single product.
  const CMatrix hv = ch.h * f_cb.as_matrix();
  const CMatrix w_mat = w_cb.as_matrix();
  const auto n_w = static_cast<Eigen::Index>(w_cb.size());
  const auto n_f = static_cast<Eigen::Index>(f_cb.size());
  Eigen::MatrixXd table(n_w, n_f);

  const double work = static_cast<double>(n_w) * static_cast<double>(n_f) *
                      static_cast<double>(ch.h.rows());
  const bool go_parallel = work > kParallelSearchWork && !omp_in_parallel();
#pragma omp parallel for schedule(static) if (go_parallel)
  for (Eigen::Index i = 0; i < n_w; ++i) {
    table.row(i) = (w_mat.col(i).adjoint() * hv).cwiseAbs();
  }

  std::size_t best_w = 0;
  std::size_t best_v = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < n_w; ++i) {
    for (Eigen::Index j = 0; j < n_f; ++j) {
      if (table(i, j) > best) {
        best = table(i, j);
        best_w = static_cast<std::size_t>(i);
        best_v = static_cast<std::size_t>(j);
      }
    }
  }
  return make_result(f_cb, w_cb, best_w, best_v, best);
}

Stage1Result stage1_select_reference(const ChannelMatrix& ch, const Codebook& f_cb,
                                     const Codebook& w_cb) {
  check_codebooks(ch, f_cb, w_cb);
  std::size_t best_w = 0;
  std::size_t best_v = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < w_cb.size(); ++i) {
    for (std::size_t j = 0; j < f_cb.size(); ++j) {
      Complex acc{0.0, 0.0};
      for (Eigen::Index r = 0; r < ch.h.rows(); ++r) {
        Complex hv{0.0, 0.0};
        for (Eigen::Index c = 0; c < ch.h.cols(); ++c) hv += ch.h(r, c) * f_cb.vectors[j][c];
        acc += std::conj(w_cb.vectors[i][r]) * hv;
      }
      const double obj = std::abs(acc);
      if (obj > best) {
        best = obj;
        best_w = i;
        best_v = j;
      }
    }
  }
  return make_result(f_cb, w_cb, best_w, best_v, best);
}

Stage1Result stage1_continuous(const PathComponent& path, const ArrayGeometry& bs_geom,
                               const ArrayGeometry& ms_geom) {
  Stage1Result r;
  r.v = steering_vector(bs_geom, path.aod);
  r.g = steering_vector(ms_geom, path.aoa);
  r.bs = BeamChoice{std::nullopt, path.aod};
  r.ms = BeamChoice{std::nullopt, path.aoa};
  r.objective = std::sqrt(static_cast<double>(bs_geom.size() * ms_geom.size())) *
                std::abs(path.gain);
  return r;
}

Stage1Result stage1_continuous(const ChannelMatrix& ch) {
  if (ch.paths.size() != 1) {
    throw std::invalid_argument("stage1_continuous: requires a single-path channel, got " +
                                std::to_string(ch.paths.size()) + " paths");
  }
  return stage1_continuous(ch.paths.front(), ch.bs_geom, ch.ms_geom);
}

std::pair<RfPrecoder, CombinerSet> design_rf_codebook(std::span<const ChannelMatrix> users,
                                                      const Codebook& f_cb,
                                                      const Codebook& w_cb) {
  check_users(users, 0);
  std::vector<Stage1Result> picks;
  picks.reserve(users.size());
  for (const auto& ch : users) picks.push_back(stage1_select(ch, f_cb, w_cb));
  return collect(users, picks);
}

std::pair<RfPrecoder, CombinerSet> design_rf_continuous(std::span<const ChannelMatrix> users) {
  check_users(users, 0);
  std::vector<Stage1Result> picks;
  picks.reserve(users.size());
  for (const auto& ch : users) picks.push_back(stage1_continuous(ch));
  return collect(users, picks);
}

EffectiveChannel effective_channel(std::span<const ChannelMatrix> users,
                                   const CombinerSet& combiners, const RfPrecoder& rf) {
  const auto n_users = static_cast<Eigen::Index>(users.size());
  if (combiners.w.size() != users.size() || rf.f_rf.cols() != n_users) {
    throw std::invalid_argument("effective_channel: user count mismatch");
  }
  EffectiveChannel eff{CMatrix(n_users, rf.f_rf.cols())};
  for (Eigen::Index u = 0; u < n_users; ++u) {
    const auto& h = users[static_cast<std::size_t>(u)].h;
    const auto& w = combiners.w[static_cast<std::size_t>(u)];
    if (h.rows() != w.size() || h.cols() != rf.f_rf.rows()) {
      throw std::invalid_argument("effective_channel: dimension mismatch for user " +
                                  std::to_string(u));
    }
    eff.h_bar.row(u) = (w.adjoint() * h) * rf.f_rf;
  }
  return eff;
}

double condition_number(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return std::numeric_limits<double>::infinity();
  const double smin = s[s.size() - 1];
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

BasebandPrecoder zf_baseband(const EffectiveChannel& eff, const RfPrecoder& rf,
                             double max_condition) {
  const CMatrix& h = eff.h_bar;
  if (h.rows() != h.cols() || h.cols() != rf.f_rf.cols()) {
    throw std::invalid_argument("zf_baseband: effective channel must be U x U");
  }
  const double cond = condition_number(h);
  if (!(cond <= max_condition)) {
    throw SingularChannelError(
        "zf_baseband: effective channel condition number " + std::to_string(cond) +
            " exceeds " + std::to_string(max_condition) + " (coincident user directions?)",
        cond);
  }
  // For square nonsingular H, H^*(H H^*)^{-1} = H^{-1}. Solving H X = I with
  // one refinement step avoids squaring the condition number.
  const auto n = h.rows();
  const CMatrix eye = CMatrix::Identity(n, n);
  Eigen::PartialPivLU<CMatrix> lu(h);
  CMatrix x = lu.solve(eye);
  x += lu.solve(eye - h * x);

  BasebandPrecoder bb{std::move(x), RVector(n)};
  for (Eigen::Index u = 0; u < n; ++u) {
    const double norm = (rf.f_rf * bb.f_bb.col(u)).norm();
    bb.f_bb.col(u) /= norm;
    bb.lambda[u] = 1.0 / norm;
  }
  return bb;
}

BasebandPrecoder analog_only_precoder(const RfPrecoder& rf) {
  const auto n = rf.f_rf.cols();
  BasebandPrecoder bb{CMatrix::Zero(n, n), RVector(n)};
  for (Eigen::Index u = 0; u < n; ++u) {
    const double s = 1.0 / rf.f_rf.col(u).norm();
    bb.f_bb(u, u) = s;
    bb.lambda[u] = s;
  }
  return bb;
}

HybridDesign run_two_stage(std::span<const ChannelMatrix> users, const Codebook& f_cb,
                            const Codebook& w_cb, int n_rf, double max_condition) {
  check_users(users, n_rf);
  auto [rf, comb] = design_rf_codebook(users, f_cb, w_cb);
  EffectiveChannel eff = effective_channel(users, comb, rf);
  BasebandPrecoder bb = zf_baseband(eff, rf, max_condition);
  return HybridDesign{std::move(rf), std::move(comb), std::move(bb), std::move(eff)};
}

HybridDesign run_two_stage_continuous(std::span<const ChannelMatrix> users, int n_rf,
                                       double max_condition) {
  check_users(users, n_rf);
  auto [rf, comb] = design_rf_continuous(users);
  EffectiveChannel eff = effective_channel(users, comb, rf);
  BasebandPrecoder bb = zf_baseband(eff, rf, max_condition);
  return HybridDesign{std::move(rf), std::move(comb), std::move(bb), std::move(eff)};
}

}  // namespace mmhybrid
