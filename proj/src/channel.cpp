// SPDX-License-Identifier: Apache-2.0
#include "mmhybrid/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace mmhybrid {

CMatrix assemble_channel(std::span<const PathComponent> paths, const ArrayGeometry& bs_geom,
                         const ArrayGeometry& ms_geom) {
  if (paths.empty()) throw std::invalid_argument("assemble_channel: empty path list");
  const auto n_bs = static_cast<Eigen::Index>(bs_geom.size());
  const auto n_ms = static_cast<Eigen::Index>(ms_geom.size());
  CMatrix h = CMatrix::Zero(n_ms, n_bs);
  for (const auto& p : paths) {
    const CVector a_ms = steering_vector(ms_geom, p.aoa);
    const CVector a_bs = steering_vector(bs_geom, p.aod);
    h.noalias() += p.gain * a_ms * a_bs.adjoint();
  }
  h *= std::sqrt(static_cast<double>(n_bs * n_ms) / static_cast<double>(paths.size()));
  return h;
}

ChannelMatrix make_channel(std::vector<PathComponent> paths, const ArrayGeometry& bs_geom,
                           const ArrayGeometry& ms_geom) {
  CMatrix h = assemble_channel(paths, bs_geom, ms_geom);
  return ChannelMatrix{std::move(h), std::move(paths), bs_geom, ms_geom};
}

Complex draw_complex_gaussian(Rng& rng, double power) {
  std::normal_distribution<double> normal(0.0, std::sqrt(power / 2.0));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

Direction draw_direction(Rng& rng, const AngleSampling& angles) {
  std::uniform_real_distribution<double> az(0.0, kTwoPi);
  const double azimuth = az(rng);
  double elevation = angles.elevation_min;
  if (!angles.elevation_fixed()) {
    std::uniform_real_distribution<double> el(angles.elevation_min, angles.elevation_max);
    elevation = el(rng);
  }
  return Direction::canonical(azimuth, elevation);
}

ChannelMatrix draw_single_path(const ArrayGeometry& bs_geom, const ArrayGeometry& ms_geom,
                               double mean_gain_power, Rng& rng, const AngleSampling& angles) {
  if (!(mean_gain_power > 0.0)) {
    throw std::invalid_argument("draw_single_path: mean gain power must be positive");
  }
  PathComponent p;
  p.gain = draw_complex_gaussian(rng, mean_gain_power);
  p.aod = draw_direction(rng, angles);
  p.aoa = draw_direction(rng, angles);
  return make_channel({p}, bs_geom, ms_geom);
}

ChannelMatrix draw_single_path(const ArrayGeometry& bs_geom, const ArrayGeometry& ms_geom,
                               double mean_gain_power, std::uint64_t seed,
                               const AngleSampling& angles) {
  Rng rng(seed);
  return draw_single_path(bs_geom, ms_geom, mean_gain_power, rng, angles);
}

double draw_laplacian(Rng& rng, double stddev) {
  if (stddev <= 0.0) return 0.0;
  std::exponential_distribution<double> expo(std::sqrt(2.0) / stddev);
  std::bernoulli_distribution sign(0.5);
  const double mag = expo(rng);
  return sign(rng) ? mag : -mag;
}

namespace {

Direction perturb(const Direction& centre, double spread, bool fixed_elevation, Rng& rng) {
  const double d_az = draw_laplacian(rng, spread);
  const double d_el = fixed_elevation ? 0.0 : draw_laplacian(rng, spread);
  return Direction::canonical(centre.azimuth + d_az, centre.elevation + d_el);
}

}  // namespace

ChannelMatrix draw_clustered(const ArrayGeometry& bs_geom, const ArrayGeometry& ms_geom,
                             const ClusterParams& clusters, double mean_gain_power, Rng& rng,
                             const AngleSampling& angles) {
  if (clusters.n_clusters < 1 || clusters.rays_per_cluster < 1) {
    throw std::invalid_argument("draw_clustered: cluster and ray counts must be >= 1");
  }
  if (!(clusters.angle_spread >= 0.0)) {
    throw std::invalid_argument("draw_clustered: angle spread must be non-negative");
  }
  if (!(mean_gain_power > 0.0)) {
    throw std::invalid_argument("draw_clustered: mean gain power must be positive");
  }
  const bool fixed_el = angles.elevation_fixed();
  std::vector<PathComponent> paths;
  paths.reserve(static_cast<std::size_t>(clusters.n_clusters) * clusters.rays_per_cluster);
  for (int c = 0; c < clusters.n_clusters; ++c) {
    const Direction aod_centre = draw_direction(rng, angles);
    const Direction aoa_centre = draw_direction(rng, angles);
    for (int r = 0; r < clusters.rays_per_cluster; ++r) {
      PathComponent p;
      p.gain = draw_complex_gaussian(rng, mean_gain_power);
      p.aod = perturb(aod_centre, clusters.angle_spread, fixed_el, rng);
      p.aoa = perturb(aoa_centre, clusters.angle_spread, fixed_el, rng);
      paths.push_back(p);
    }
  }
  return make_channel(std::move(paths), bs_geom, ms_geom);
}

ChannelMatrix draw_clustered(const ArrayGeometry& bs_geom, const ArrayGeometry& ms_geom,
                             const ClusterParams& clusters, double mean_gain_power,
                             std::uint64_t seed, const AngleSampling& angles) {
  Rng rng(seed);
  return draw_clustered(bs_geom, ms_geom, clusters, mean_gain_power, rng, angles);
}

}  // namespace mmhybrid
