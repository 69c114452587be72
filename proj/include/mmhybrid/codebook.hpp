// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mmhybrid/arrays.hpp"

namespace mmhybrid {

// Beamsteering codebook over an azimuth x elevation product grid. Entry
// index = el_index * n_az + az_index.
struct Codebook {
  std::vector<CVector> vectors;
  std::vector<Direction> grid;
  int phase_bits = 0;  // 0 = unquantized phase shifters
  ArrayGeometry geom;

  std::size_t size() const { return vectors.size(); }
  // Codebook vectors as matrix columns, N x N_Q.
  CMatrix as_matrix() const;
};

// Azimuths 2pi k / n_az, elevations at the centres of n_el equal slices of
// [-pi/2, pi/2] (n_el = 1 gives the horizon).
Codebook build_beamsteering_codebook(const ArrayGeometry& geom, int n_az, int n_el,
                                     int phase_bits);

// Snaps every entry to exp(j phi) / sqrt(N), phi on the 2^bits uniform phase
// grid; ties go to the lower grid point. bits = 0 keeps the exact phases.
CVector quantize_phases(const CVector& v, int bits);

}  // namespace mmhybrid
