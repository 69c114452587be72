// SPDX-License-Identifier: Apache-2.0
#include "mmhybrid/codebook.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace mmhybrid {

namespace {
constexpr int kMaxPhaseBits = 30;
}

CMatrix Codebook::as_matrix() const {
  if (vectors.empty()) return {};
  CMatrix m(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  return m;
}

CVector quantize_phases(const CVector& v, int bits) {
  if (bits < 0 || bits > kMaxPhaseBits) {
    throw std::invalid_argument("quantize_phases: bits must be in [0, 30]");
  }
  const double scale = v.size() > 0 ? 1.0 / std::sqrt(static_cast<double>(v.size())) : 0.0;
  CVector out(v.size());
  if (bits == 0) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = std::polar(scale, std::arg(v[i]));
    return out;
  }
  const std::int64_t levels = std::int64_t{1} << bits;
  const double step = kTwoPi / static_cast<double>(levels);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double phase = std::arg(v[i]);
    if (phase < 0.0) phase += kTwoPi;
    const double x = phase / step;
    auto m = static_cast<std::int64_t>(std::floor(x));
    if (x - static_cast<double>(m) > 0.5) ++m;
    m %= levels;
    out[i] = std::polar(scale, static_cast<double>(m) * step);
  }
  return out;
}

Codebook build_beamsteering_codebook(const ArrayGeometry& geom, int n_az, int n_el,
                                     int phase_bits) {
  if (n_az < 1 || n_el < 1) {
    throw std::invalid_argument("build_beamsteering_codebook: grid must be non-empty");
  }
  if (phase_bits < 0 || phase_bits > kMaxPhaseBits) {
    throw std::invalid_argument("build_beamsteering_codebook: phase bits must be in [0, 30]");
  }
  Codebook cb{{}, {}, phase_bits, geom};
  cb.vectors.reserve(static_cast<std::size_t>(n_az) * n_el);
  cb.grid.reserve(cb.vectors.capacity());
  for (int e = 0; e < n_el; ++e) {
    const double el = -kPi / 2 + (e + 0.5) * kPi / n_el;
    for (int k = 0; k < n_az; ++k) {
      const Direction dir{kTwoPi * k / n_az, el};
      cb.grid.push_back(dir);
      CVector a = steering_vector(geom, dir);
      cb.vectors.push_back(phase_bits == 0 ? std::move(a) : quantize_phases(a, phase_bits));
    }
  }
  return cb;
}

}  // namespace mmhybrid
