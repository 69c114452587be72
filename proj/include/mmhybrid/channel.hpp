// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mmhybrid/arrays.hpp"

namespace mmhybrid {

using Rng = std::mt19937_64;

struct PathComponent {
  Complex gain;
  Direction aod;  // at the BS
  Direction aoa;  // at the MS
};

// Range from which path elevations are drawn. A degenerate range pins every
// elevation (and suppresses elevation spread in clustered channels).
struct AngleSampling {
  double elevation_min = -kPi / 2;
  double elevation_max = kPi / 2;

  static AngleSampling fixed_elevation(double el) { return {el, el}; }
  bool elevation_fixed() const { return elevation_min == elevation_max; }
};

// N_MS x N_BS narrowband channel together with the paths that generated it.
struct ChannelMatrix {
  CMatrix h;
  std::vector<PathComponent> paths;
  ArrayGeometry bs_geom;
  ArrayGeometry ms_geom;
};

// H = sqrt(N_BS N_MS / L) sum_l alpha_l a_MS(theta_l) a_BS(phi_l)^*
CMatrix assemble_channel(std::span<const PathComponent> paths, const ArrayGeometry& bs_geom,
                         const ArrayGeometry& ms_geom);

ChannelMatrix make_channel(std::vector<PathComponent> paths, const ArrayGeometry& bs_geom,
                           const ArrayGeometry& ms_geom);

// Circularly-symmetric complex Gaussian with E|x|^2 = power.
Complex draw_complex_gaussian(Rng& rng, double power);

Direction draw_direction(Rng& rng, const AngleSampling& angles = {});

// Single Rayleigh path with E|alpha|^2 = mean_gain_power and uniform angles.
ChannelMatrix draw_single_path(const ArrayGeometry& bs_geom, const ArrayGeometry& ms_geom,
                               double mean_gain_power, Rng& rng,
                               const AngleSampling& angles = {});
ChannelMatrix draw_single_path(const ArrayGeometry& bs_geom, const ArrayGeometry& ms_geom,
                               double mean_gain_power, std::uint64_t seed,
                               const AngleSampling& angles = {});

struct ClusterParams {
  int n_clusters = 3;
  int rays_per_cluster = 6;
  // Standard deviation of the per-ray Laplacian angle offset, radians.
  double angle_spread = 0.0;
};

// Multi-cluster channel: cluster centres drawn like single-path angles, ray
// offsets i.i.d. Laplacian on AoD/AoA azimuth and elevation, ray gains
// CN(0, mean_gain_power). E||H||_F^2 = mean_gain_power * N_BS * N_MS.
ChannelMatrix draw_clustered(const ArrayGeometry& bs_geom, const ArrayGeometry& ms_geom,
                             const ClusterParams& clusters, double mean_gain_power, Rng& rng,
                             const AngleSampling& angles = {});
ChannelMatrix draw_clustered(const ArrayGeometry& bs_geom, const ArrayGeometry& ms_geom,
                             const ClusterParams& clusters, double mean_gain_power,
                             std::uint64_t seed, const AngleSampling& angles = {});

// Zero-mean Laplacian sample with the given standard deviation.
double draw_laplacian(Rng& rng, double stddev);

}  // namespace mmhybrid
