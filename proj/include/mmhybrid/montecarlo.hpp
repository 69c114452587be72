// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <vector>

#include <omp.h>

namespace mmhybrid {

// Trial outcomes indexed by trial number; std::nullopt marks a discarded trial.
template <class Record>
using TrialResults = std::vector<std::optional<Record>>;

// Runs fn(i) for i in [0, n) on an OpenMP team of `workers` threads
// (0 = OpenMP default). Each trial owns its inputs, so the result vector is
// identical to run_trials_serial for any worker count. The first exception
// by trial index is rethrown after the team joins.
template <class Record, class TrialFn>
TrialResults<Record> run_trials(std::size_t n, TrialFn&& fn, int workers = 0) {
  TrialResults<Record> out(n);
  std::vector<std::exception_ptr> errors(n);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// Reference loop for run_trials.
template <class Record, class TrialFn>
TrialResults<Record> run_trials_serial(std::size_t n, TrialFn&& fn) {
  TrialResults<Record> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  return out;
}

}  // namespace mmhybrid
