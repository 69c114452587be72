// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmhybrid/precoding.hpp"
#include "mmhybrid/stats.hpp"

namespace mmhybrid {

// Noise variance is normalised to one, so SNR = P.
struct SystemConfig {
  int n_bs = 64;
  int n_ms = 16;
  int n_rf = 4;
  int n_users = 4;
  double snr_db = 0.0;

  double snr() const;
  void validate() const;  // throws std::invalid_argument
};

double db_to_linear(double db);

// Exact rate of user u from the precoders:
//   log2(1 + (SNR/U)|w_u^* H_u F_RF f_u|^2 / ((SNR/U) sum_{n!=u} |w_u^* H_u F_RF f_n|^2 + 1))
double per_user_rate(std::span<const ChannelMatrix> users, const CombinerSet& combiners,
                     const CMatrix& f_rf, const CMatrix& f_bb, const SystemConfig& cfg,
                     std::size_t u);
std::vector<double> per_user_rates(std::span<const ChannelMatrix> users,
                                   const CombinerSet& combiners, const CMatrix& f_rf,
                                   const CMatrix& f_bb, const SystemConfig& cfg);

// A_BS = [a_BS(phi_1), ..., a_BS(phi_U)]
CMatrix steering_matrix(const ArrayGeometry& bs_geom, std::span<const Direction> aods);

// Closed-form ZF hybrid rate for single-path channels with matched beams:
//   log2(1 + (SNR/U) N_BS N_MS |alpha_u|^2 / [(A^* A)^{-1}]_uu)
std::vector<double> closed_form_zf_rate(std::span<const Complex> alphas,
                                        std::span<const Direction> aods,
                                        const ArrayGeometry& bs_geom, const SystemConfig& cfg);

// Interference-free rate log2(1 + (SNR/U) N_BS N_MS |alpha|^2).
double single_user_rate(Complex alpha, const SystemConfig& cfg);

// Analog-only beamsteering rate with beta_{u,n} = a_BS(phi_u)^* a_BS(phi_n).
std::vector<double> beamsteering_rate(std::span<const Complex> alphas,
                                      std::span<const Direction> aods,
                                      const ArrayGeometry& bs_geom, const SystemConfig& cfg);

// G = 4 / (s_max^2/s_min^2 + s_min^2/s_max^2 + 2) from the singular values of A_BS.
double g_factor(const CMatrix& a_bs);

struct LowerBound {
  std::vector<double> rates;  // log2(1 + (SNR/U) N_BS N_MS |alpha_u|^2 G)
  double g_value = 1.0;
};
LowerBound rate_lower_bound(std::span<const Complex> alphas, std::span<const Direction> aods,
                            const ArrayGeometry& bs_geom, const SystemConfig& cfg);

struct KantorovichResult {
  bool holds = false;
  // min_u of bound_u - [P^{-1}]_uu
  double min_slack = 0.0;
};

// Checks [P^{-1}]_uu <= (lmax/lmin + lmin/lmax + 2) / (4 P_uu) for every u of
// a Hermitian positive definite P. Throws std::invalid_argument otherwise.
KantorovichResult kantorovich_check(const CMatrix& gram, double tolerance = 1e-12);

struct RateReport {
  std::vector<double> per_user_rate;
  double sum_rate = 0.0;
  std::vector<double> closed_form_rate;
  std::vector<double> lower_bound;
  std::vector<double> single_user_rate;
  std::vector<double> beamsteering_rate;
  double g_value = 1.0;
};

// Runs the continuous-angle two-stage design on single-path users and evaluates every
// rate expression. Propagates SingularChannelError.
RateReport single_path_report(std::span<const ChannelMatrix> users, const SystemConfig& cfg);

// Monte Carlo checks of the asymptotic claims for single-path ULA systems
// with continuous beams. Sweeps share per-trial draws across their points.
struct GapSweepConfig {
  int n_users = 4;
  int n_ms = 16;
  int n_bs = 64;         // held fixed in the SNR and N_MS sweeps
  double snr_db = 10.0;  // held fixed in the N_BS and N_MS sweeps
  std::vector<double> snr_db_values{0.0, 20.0};
  std::vector<int> n_bs_values{16, 64, 256};
  std::vector<int> n_ms_values{4, 16, 64};
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  int workers = 0;
};

struct GapPoint {
  double axis = 0.0;
  RunningStats gap;  // per-user gap, averaged over users within a trial
  double median_gap = 0.0;
  std::size_t discarded = 0;
};

struct GapDiagnostics {
  std::vector<GapPoint> single_user_gap_vs_snr;   // R_single - R
  std::vector<GapPoint> single_user_gap_vs_n_bs;  // R_single - R
  std::vector<GapPoint> beamsteering_gap_vs_n_ms;  // R - R_beamsteering
};

GapDiagnostics asymptotic_gap_diagnostics(const GapSweepConfig& cfg);

}  // namespace mmhybrid
