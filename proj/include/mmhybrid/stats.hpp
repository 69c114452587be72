// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace mmhybrid {

// Welford accumulator with Chan's pairwise merge.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased; 0 for fewer than two samples
  double stddev() const;
  double stderr_mean() const;
  // Half-width of the normal-approximation 95% confidence interval.
  double ci95() const { return 1.959963984540054 * stderr_mean(); }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

double median(std::vector<double> values);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t hash_tag(std::string_view tag);
// Per-trial seed: independent of scheduling and worker count.
std::uint64_t derive_seed(std::uint64_t master, std::string_view campaign, std::uint64_t point,
                          std::uint64_t trial);

}  // namespace mmhybrid
