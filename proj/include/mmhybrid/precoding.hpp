// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mmhybrid/channel.hpp"
#include "mmhybrid/codebook.hpp"

namespace mmhybrid {

using ChannelEnsemble = std::vector<ChannelMatrix>;

// Codebook entry index when chosen from a codebook, and the steering
// direction either way.
struct BeamChoice {
  std::optional<std::size_t> index;
  Direction direction;
};

struct RfPrecoder {
  CMatrix f_rf;  // N_BS x U
  std::vector<BeamChoice> selections;
};

struct CombinerSet {
  std::vector<CVector> w;  // U vectors of length N_MS
  std::vector<BeamChoice> selections;
};

struct EffectiveChannel {
  CMatrix h_bar;  // U x U, row u = w_u^* H_u F_RF
};

struct BasebandPrecoder {
  CMatrix f_bb;    // U x U
  RVector lambda;  // diagonal of the power normalisation
};

struct HybridDesign {
  RfPrecoder rf;
  CombinerSet combiners;
  BasebandPrecoder baseband;
  EffectiveChannel effective;
};

struct Stage1Result {
  CVector v;  // BS beam
  CVector g;  // MS combiner
  BeamChoice bs;
  BeamChoice ms;
  double objective = 0.0;  // |g^* H v|
};

// Raised when the effective channel is too ill-conditioned for zero forcing,
// which under continuous angles only happens for coincident user AoDs.
class SingularChannelError : public std::runtime_error {
 public:
  SingularChannelError(const std::string& what, double condition_number)
      : std::runtime_error(what), condition_number_(condition_number) {}
  double condition_number() const { return condition_number_; }

 private:
  double condition_number_;
};

inline constexpr double kDefaultMaxCondition = 1e12;

// Exhaustive joint search of max |g^* H v| over w_cb x f_cb. Ties resolve to
// the lowest (w index, v index). Rows of the objective table are evaluated in
// parallel when the search is large and not already inside a parallel region.
Stage1Result stage1_select(const ChannelMatrix& ch, const Codebook& f_cb, const Codebook& w_cb);

// Serial pair-by-pair evaluation; same tie-breaking. Kept as the reference
// for the parallel kernel.
Stage1Result stage1_select_reference(const ChannelMatrix& ch, const Codebook& f_cb,
                                     const Codebook& w_cb);

// Matched steering vectors for a single path (continuous-angle beamsteering).
Stage1Result stage1_continuous(const PathComponent& path, const ArrayGeometry& bs_geom,
                               const ArrayGeometry& ms_geom);
// Rejects channels with more than one path.
Stage1Result stage1_continuous(const ChannelMatrix& ch);

// Stage 1 for every user: F_RF columns and MS combiners.
std::pair<RfPrecoder, CombinerSet> design_rf_codebook(std::span<const ChannelMatrix> users,
                                                      const Codebook& f_cb,
                                                      const Codebook& w_cb);
std::pair<RfPrecoder, CombinerSet> design_rf_continuous(std::span<const ChannelMatrix> users);

EffectiveChannel effective_channel(std::span<const ChannelMatrix> users,
                                   const CombinerSet& combiners, const RfPrecoder& rf);

double condition_number(const CMatrix& m);

// F_BB = H^* (H H^*)^{-1}, then columns scaled so ||F_RF f_u|| = 1.
BasebandPrecoder zf_baseband(const EffectiveChannel& eff, const RfPrecoder& rf,
                             double max_condition = kDefaultMaxCondition);

// Pure beamsteering: identity baseband scaled so ||F_RF f_u|| = 1.
BasebandPrecoder analog_only_precoder(const RfPrecoder& rf);

// Both stages. n_rf = 0 means n_rf = U.
HybridDesign run_two_stage(std::span<const ChannelMatrix> users, const Codebook& f_cb,
                            const Codebook& w_cb, int n_rf = 0,
                            double max_condition = kDefaultMaxCondition);
HybridDesign run_two_stage_continuous(std::span<const ChannelMatrix> users, int n_rf = 0,
                                       double max_condition = kDefaultMaxCondition);

}  // namespace mmhybrid
