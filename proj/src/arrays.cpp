// SPDX-License-Identifier: Apache-2.0
#include "mmhybrid/arrays.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mmhybrid {

Direction Direction::canonical(double azimuth, double elevation) {
  if (!std::isfinite(azimuth) || !std::isfinite(elevation)) {
    throw std::invalid_argument("Direction: angles must be finite");
  }
  // Fold elevation into (-pi, pi] first, then reflect across the poles.
  double el = std::remainder(elevation, kTwoPi);
  double az = azimuth;
  if (el > kPi / 2) {
    el = kPi - el;
    az += kPi;
  } else if (el < -kPi / 2) {
    el = -kPi - el;
    az += kPi;
  }
  az = std::fmod(az, kTwoPi);
  if (az < 0.0) az += kTwoPi;
  if (az >= kTwoPi) az = 0.0;
  return Direction{az, el};
}

Eigen::Vector3d Direction::wave_vector() const {
  const double ce = std::cos(elevation);
  return {ce * std::cos(azimuth), ce * std::sin(azimuth), std::sin(elevation)};
}

ArrayGeometry::ArrayGeometry(std::vector<Eigen::Vector3d> positions) {
  if (positions.empty()) {
    throw std::invalid_argument("ArrayGeometry: at least one element required");
  }
  for (const auto& p : positions) {
    if (!p.allFinite()) {
      throw std::invalid_argument("ArrayGeometry: element positions must be finite");
    }
  }
  positions_ = std::make_shared<const std::vector<Eigen::Vector3d>>(std::move(positions));
}

ArrayGeometry ula_geometry(int n, double spacing) {
  if (n < 1) throw std::invalid_argument("ula_geometry: n must be >= 1, got " + std::to_string(n));
  if (!(spacing > 0.0)) throw std::invalid_argument("ula_geometry: spacing must be positive");
  std::vector<Eigen::Vector3d> pos;
  pos.reserve(n);
  for (int i = 0; i < n; ++i) pos.emplace_back(0.0, i * spacing, 0.0);
  return ArrayGeometry(std::move(pos));
}

ArrayGeometry upa_geometry(int rows, int cols, double spacing) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("upa_geometry: dimensions must be >= 1, got " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!(spacing > 0.0)) throw std::invalid_argument("upa_geometry: spacing must be positive");
  std::vector<Eigen::Vector3d> pos;
  pos.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) pos.emplace_back(0.0, c * spacing, r * spacing);
  }
  return ArrayGeometry(std::move(pos));
}

CVector steering_vector(const ArrayGeometry& geom, const Direction& dir) {
  const Eigen::Vector3d k = dir.wave_vector();
  const auto& pos = geom.positions();
  const double scale = 1.0 / std::sqrt(static_cast<double>(pos.size()));
  CVector a(static_cast<Eigen::Index>(pos.size()));
  for (std::size_t i = 0; i < pos.size(); ++i) {
    a[static_cast<Eigen::Index>(i)] = std::polar(scale, kTwoPi * k.dot(pos[i]));
  }
  return a;
}

}  // namespace mmhybrid
