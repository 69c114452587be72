// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <vector>

#include "mmhybrid/types.hpp"

namespace mmhybrid {

// Propagation direction. Azimuth in [0, 2pi), elevation in [-pi/2, pi/2]
// measured from the x-y plane. Unit wave vector:
//   k = (cos el * cos az, cos el * sin az, sin el)
struct Direction {
  double azimuth = 0.0;
  double elevation = 0.0;

  // Wraps arbitrary angles into the canonical ranges. Elevations past a pole
  // are reflected back and the azimuth is rotated by pi.
  static Direction canonical(double azimuth, double elevation);

  Eigen::Vector3d wave_vector() const;
};

// Element positions in carrier-wavelength units. Copies share the position
// storage, so geometries can be passed around by value.
class ArrayGeometry {
 public:
  explicit ArrayGeometry(std::vector<Eigen::Vector3d> positions);

  std::size_t size() const { return positions_->size(); }
  const std::vector<Eigen::Vector3d>& positions() const { return *positions_; }

 private:
  std::shared_ptr<const std::vector<Eigen::Vector3d>> positions_;
};

// n elements along the y axis at 0, d, 2d, ... Broadside is azimuth 0.
ArrayGeometry ula_geometry(int n, double spacing = 0.5);

// Vertical planar array in the y-z plane: element (r, c) sits at
// (0, c * spacing, r * spacing). upa_geometry(1, n, d) equals ula_geometry(n, d).
ArrayGeometry upa_geometry(int rows, int cols, double spacing = 0.5);

// a_i = exp(j 2pi <k(dir), p_i>) / sqrt(N)
CVector steering_vector(const ArrayGeometry& geom, const Direction& dir);

}  // namespace mmhybrid
