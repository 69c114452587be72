// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "mmhybrid/arrays.hpp"
#include "mmhybrid/channel.hpp"

namespace mmhybrid::test {

inline Direction random_direction(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> az(0.0, kTwoPi);
  std::uniform_real_distribution<double> el(-kPi / 2, kPi / 2);
  return Direction{az(rng), el(rng)};
}

inline CVector random_cvector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (auto& x : v) x = Complex(g(rng), g(rng));
  return v;
}

inline CMatrix random_cmatrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> g;
  CMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

// Channel wrapper around an arbitrary matrix (no generating paths).
inline ChannelMatrix raw_channel(CMatrix h) {
  const auto n_bs = static_cast<int>(h.cols());
  const auto n_ms = static_cast<int>(h.rows());
  return ChannelMatrix{std::move(h), {}, ula_geometry(n_bs), ula_geometry(n_ms)};
}

// ULA directions whose spatial frequencies pi*sin(az) sit on the N-point DFT grid.
inline Direction dft_direction(int n, int k) {
  return Direction{std::asin(2.0 * k / n), 0.0};
}

}  // namespace mmhybrid::test
