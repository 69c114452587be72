// SPDX-License-Identifier: Apache-2.0
// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mmhybrid/config.hpp"
#include "mmhybrid/experiments.hpp"
#include "mmhybrid/io.hpp"
#include "mmhybrid/metrics.hpp"
#include "mmhybrid/montecarlo.hpp"

using namespace mmhybrid;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = MMHYBRID_CONFIG_DIR;
constexpr double kZ95 = 1.959963984540054;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double time_limit_s, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit_s > 0 && secs > time_limit_s) {
    o.pass = false;
    o.detail += fmt("; exceeded the %.0f s runtime limit", time_limit_s);
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

ChannelEnsemble single_path_users(const ArrayGeometry& bs, const ArrayGeometry& ms, int u,
                                  std::uint64_t seed) {
  Rng rng(seed);
  ChannelEnsemble users;
  for (int i = 0; i < u; ++i) users.push_back(draw_single_path(bs, ms, 1.0, rng));
  return users;
}

double snr_for(std::uint64_t seed) {
  // Spread draws over -10..30 dB.
  return -10.0 + 40.0 * static_cast<double>(seed >> 11) * 0x1.0p-53;
}

std::string csv_text(const ResultTable& t) {
  std::ostringstream os;
  write_csv(t, os);
  return os.str();
}

struct CampaignRun {
  CampaignConfig cfg;
  ResultTable table;
};

// Held for the determinism criterion.
std::vector<CampaignRun> campaign_runs;

}  // namespace

int main() {
  const auto bs64 = upa_geometry(8, 8);
  const auto ms16 = upa_geometry(4, 4);

  criterion(1, "formula equivalence", 30, [&] {
    double worst = 0.0;
    std::size_t singular = 0;
    for (std::size_t t = 0; t < 10000; ++t) {
      const auto seed = derive_seed(1, "acceptance_equivalence", 0, t);
      try {
        const auto rep = single_path_report(single_path_users(bs64, ms16, 4, seed),
                                            {64, 16, 4, 4, snr_for(seed)});
        for (int u = 0; u < 4; ++u) {
          worst = std::max(worst, std::abs(rep.per_user_rate[u] - rep.closed_form_rate[u]));
        }
      } catch (const SingularChannelError&) {
        ++singular;
      }
    }
    return Outcome{worst <= 1e-6 && singular == 0,
                   fmt("max |pipeline - closed form| = %.3g bits/s/Hz over 10^4 draws, %zu singular",
                       worst, singular)};
  });

  criterion(2, "lower bound validity", 60, [&] {
    double min_slack = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    for (std::size_t t = 0; t < 100000; ++t) {
      const auto seed = derive_seed(1, "acceptance_bound", 0, t);
      const auto users = single_path_users(bs64, ms16, 4, seed);
      std::vector<Complex> alphas;
      std::vector<Direction> aods;
      for (const auto& u : users) {
        alphas.push_back(u.paths[0].gain);
        aods.push_back(u.paths[0].aod);
      }
      const SystemConfig sc{64, 16, 4, 4, snr_for(seed)};
      const auto rate = closed_form_zf_rate(alphas, aods, bs64, sc);
      const auto lb = rate_lower_bound(alphas, aods, bs64, sc);
      for (int u = 0; u < 4; ++u) {
        const double slack = rate[u] - lb.rates[u];
        min_slack = std::min(min_slack, slack);
        if (slack < -1e-9) ++violations;
      }
    }
    return Outcome{violations == 0,
                   fmt("%zu violations in 4x10^5 user rates, min slack %.3g", violations, min_slack)};
  });

  criterion(3, "bound tightness at orthogonality", 0, [&] {
    const auto bs = ula_geometry(64);
    const auto ms = ula_geometry(16);
    Rng rng(3);
    double worst_g = 0.0, worst_rate = 0.0;
    for (int t = 0; t < 1000; ++t) {
      std::vector<int> ks(63);
      std::iota(ks.begin(), ks.end(), -31);
      std::shuffle(ks.begin(), ks.end(), rng);
      ChannelEnsemble users;
      for (int u = 0; u < 4; ++u) {
        const Direction aod{std::asin(2.0 * ks[u] / 64.0), 0.0};
        users.push_back(make_channel({{draw_complex_gaussian(rng, 1.0), aod, draw_direction(rng)}}, bs, ms));
      }
      const auto rep = single_path_report(users, {64, 16, 4, 4, -10.0 + t % 40});
      worst_g = std::max(worst_g, std::abs(rep.g_value - 1.0));
      for (int u = 0; u < 4; ++u) {
        worst_rate = std::max({worst_rate, std::abs(rep.lower_bound[u] - rep.per_user_rate[u]),
                               std::abs(rep.single_user_rate[u] - rep.per_user_rate[u]),
                               std::abs(rep.closed_form_rate[u] - rep.per_user_rate[u])});
      }
    }
    return Outcome{worst_g <= 1e-9 && worst_rate <= 1e-9,
                   fmt("max |G - 1| = %.3g, max rate mismatch = %.3g over 1000 DFT draws", worst_g,
                       worst_rate)};
  });

  criterion(4, "Kantorovich inequality", 0, [&] {
    std::size_t violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < 100000; ++t) {
      Rng rng(derive_seed(1, "acceptance_kantorovich", 0, t));
      std::vector<Direction> aods;
      for (int u = 0; u < 4; ++u) aods.push_back(draw_direction(rng));
      const CMatrix a = steering_matrix(bs64, aods);
      const auto r = kantorovich_check(a.adjoint() * a);
      if (!r.holds) ++violations;
      min_slack = std::min(min_slack, r.min_slack);
    }
    return Outcome{violations == 0,
                   fmt("%zu violations in 10^5 Gram matrices, min slack %.3g", violations, min_slack)};
  });

  criterion(5, "zero-forcing correctness", 0, [&] {
    double worst_residual = 0.0, worst_power = 0.0;
    std::size_t conditioned = 0;
    for (std::size_t t = 0; t < 10000; ++t) {
      const auto users = single_path_users(bs64, ms16, 4, derive_seed(1, "acceptance_zf", 0, t));
      const auto d = run_two_stage_continuous(users);
      worst_power = std::max(worst_power, std::abs((d.rf.f_rf * d.baseband.f_bb).squaredNorm() - 4.0));
      if (condition_number(d.effective.h_bar) > 1e6) continue;
      ++conditioned;
      const CMatrix hf = d.effective.h_bar * d.baseband.f_bb;
      for (int u = 0; u < 4; ++u) {
        for (int n = 0; n < 4; ++n) {
          if (n != u) worst_residual = std::max(worst_residual, std::abs(hf(u, n)) / std::abs(hf(u, u)));
        }
      }
    }
    return Outcome{worst_residual <= 1e-9 && worst_power <= 1e-9,
                   fmt("max relative residual %.3g on %zu well-conditioned draws, max power error %.3g",
                       worst_residual, conditioned, worst_power)};
  });

  GapDiagnostics gaps;
  criterion(6, "asymptotic optimality in N_BS", 300, [&] {
    GapSweepConfig g;
    g.trials = 10000;
    gaps = asymptotic_gap_diagnostics(g);
    const auto& p = gaps.single_user_gap_vs_n_bs;
    bool decreasing = true;
    std::string list;
    for (std::size_t i = 0; i < p.size(); ++i) {
      list += fmt("%s N_BS=%g: %.4f", i ? "," : "", p[i].axis, p[i].median_gap);
      if (i > 0 && !(p[i].median_gap < p[i - 1].median_gap)) decreasing = false;
    }
    return Outcome{decreasing && p.back().median_gap < 0.05, "median gap" + list};
  });

  criterion(7, "SNR-independent gap", 0, [&] {
    const auto& p = gaps.single_user_gap_vs_snr;
    const double diff = std::abs(p[1].gap.mean() - p[0].gap.mean());
    return Outcome{diff < 0.1, fmt("E gap %.4f +/- %.4f at %g dB, %.4f +/- %.4f at %g dB, |diff| = %.4f",
                                   p[0].gap.mean(), p[0].gap.ci95(), p[0].axis, p[1].gap.mean(),
                                   p[1].gap.ci95(), p[1].axis, diff)};
  });

  criterion(8, "beamsteering divergence in N_MS", 0, [&] {
    const auto& p = gaps.beamsteering_gap_vs_n_ms;
    bool increasing = true;
    std::string list;
    for (std::size_t i = 0; i < p.size(); ++i) {
      list += fmt("%s N_MS=%g: %.3f +/- %.3f", i ? "," : "", p[i].axis, p[i].gap.mean(),
                  p[i].gap.ci95());
      if (i > 0 && !(p[i].gap.mean() > p[i - 1].gap.mean())) increasing = false;
    }
    return Outcome{increasing, "E[R - R_BS]" + list};
  });

  criterion(9, "SNR sweep curve ordering", 120, [&] {
    CampaignRun run{load_campaign_config(kConfigs / "snr_sweep.json"), {}};
    run.table = run_campaign(run.cfg);
    const auto& t = run.table;
    bool ordered = true, widening = true;
    double prev_gap = -std::numeric_limits<double>::infinity();
    std::string gaps_text;
    for (double snr : run.cfg.sweep) {
      const double h = t.find(snr, "hybrid")->mean;
      if (!(t.find(snr, "lower_bound")->mean <= h && h <= t.find(snr, "single_user")->mean)) {
        ordered = false;
      }
      if (snr < 0) continue;
      const double gap = h - t.find(snr, "beamsteering")->mean;
      gaps_text += fmt(" %.3f", gap);
      if (!(gap > prev_gap)) widening = false;
      prev_gap = gap;
    }
    const auto trials = t.find(run.cfg.sweep.front(), "hybrid")->count;
    campaign_runs.push_back(std::move(run));
    return Outcome{ordered && widening && trials + t.discarded / 7 >= 10000,
                   fmt("bound <= hybrid <= single-user at all points: %s; hybrid - beamsteering for "
                       "SNR >= 0 dB:%s",
                       ordered ? "yes" : "no", gaps_text.c_str())};
  });

  criterion(10, "angle-spread sweep ordering", 0, [&] {
    CampaignRun run{load_campaign_config(kConfigs / "angle_spread_sweep.json"), {}};
    run.table = run_campaign(run.cfg);
    const auto& t = run.table;
    bool ok = true;
    std::string text;
    std::uint64_t min_kept = std::numeric_limits<std::uint64_t>::max();
    for (double s : run.cfg.sweep) {
      const auto* h = t.find(s, "hybrid");
      const auto* b = t.find(s, "beamsteering");
      min_kept = std::min(min_kept, h->count);
      if (h->count < 1000) ok = false;
      const double margin = (h->mean - kZ95 * h->std_error) - (b->mean + kZ95 * b->std_error);
      text += fmt(" %g deg: %.3f vs %.3f;", s, h->mean, b->mean);
      if (!(h->mean >= b->mean)) ok = false;
      if (s <= 10.0 && !(margin > 0)) ok = false;
    }
    campaign_runs.push_back(std::move(run));
    return Outcome{ok, fmt("min %llu non-singular trials/point;",
                           static_cast<unsigned long long>(min_kept)) +
                           " hybrid vs beamsteering, CIs separated up to 10 deg:" + text};
  });

  criterion(11, "coverage curves", 0, [&] {
    CampaignRun run{load_campaign_config(kConfigs / "coverage.json"), {}};
    run.table = run_campaign(run.cfg);
    const auto& t = run.table;
    const auto& cv = run.cfg.coverage;
    bool valid = true;
    for (const auto& name : t.series_names()) {
      double prev = 1.0;
      for (double eta : run.cfg.sweep) {
        const auto* r = t.find(eta, name);
        if (!(r->mean >= 0.0 && r->mean <= prev && r->count >= cv.user_samples)) valid = false;
        prev = r->mean;
      }
    }
    // Paired hybrid - beamsteering indicator difference for n = 4.
    const auto it = std::find(cv.users_per_cell.begin(), cv.users_per_cell.end(), 4);
    if (it == cv.users_per_cell.end()) return Outcome{false, "config has no n = 4 point"};
    const auto s4 = simulate_coverage_users(run.cfg, 4,
                                            static_cast<std::uint64_t>(it - cv.users_per_cell.begin()));
    bool dominates = true;
    double worst_upper = std::numeric_limits<double>::infinity();
    for (double eta : run.cfg.sweep) {
      RunningStats d;
      for (std::size_t i = 0; i < s4.hybrid.size(); ++i) {
        d.add((s4.hybrid[i] >= eta ? 1.0 : 0.0) - (s4.beamsteering[i] >= eta ? 1.0 : 0.0));
      }
      const double upper = d.mean() + kZ95 * d.stderr_mean();
      worst_upper = std::min(worst_upper, upper);
      if (upper < 0) dominates = false;
    }
    // Degradation from n = 2 to n = 5, summed over the threshold grid.
    auto area = [&](const std::string& name, double& var) {
      double a = 0.0;
      var = 0.0;
      for (double eta : run.cfg.sweep) {
        const auto* r = t.find(eta, name);
        a += r->mean;
        var += r->std_error * r->std_error;  // thresholds treated as independent
      }
      return a;
    };
    double v_h2, v_h5, v_b2, v_b5;
    const double ah2 = area("hybrid_n2", v_h2), ah5 = area("hybrid_n5", v_h5);
    const double ab2 = area("beamsteering_n2", v_b2), ab5 = area("beamsteering_n5", v_b5);
    const double dh = ah2 - ah5;
    const double db = ab2 - ab5;
    // Fraction of the n = 2 area kept at n = 5, delta-method CI.
    const double kh = ah5 / ah2, kb = ab5 / ab2;
    const double ci_kh = kZ95 * kh * std::sqrt(v_h5 / (ah5 * ah5) + v_h2 / (ah2 * ah2));
    const double ci_kb = kZ95 * kb * std::sqrt(v_b5 / (ab5 * ab5) + v_b2 / (ab2 * ab2));
    std::string report = fmt(
        "valid CCDFs: %s; n=4 hybrid >= beamsteering at all thresholds: %s (min upper 95%% bound "
        "%.4f); coverage-area loss n=2->5: hybrid %.3f +/- %.3f, beamsteering %.3f +/- %.3f",
        valid ? "yes" : "no", dominates ? "yes" : "no", worst_upper, dh,
        kZ95 * std::sqrt(v_h2 + v_h5), db, kZ95 * std::sqrt(v_b2 + v_b5));
    report += fmt("; area kept at n=5: hybrid %.3f +/- %.3f, beamsteering %.3f +/- %.3f", kh, ci_kh,
                  kb, ci_kb);
    for (double eta : {2.0, 4.0, 6.0}) {
      const auto* h2 = t.find(eta, "hybrid_n2");
      const auto* h5 = t.find(eta, "hybrid_n5");
      const auto* b2 = t.find(eta, "beamsteering_n2");
      const auto* b5 = t.find(eta, "beamsteering_n5");
      if (!h2 || !h5 || !b2 || !b5) continue;
      report += fmt("; eta=%g: hybrid %.3f->%.3f, beamsteering %.3f->%.3f", eta, h2->mean, h5->mean,
                    b2->mean, b5->mean);
    }
    campaign_runs.push_back(std::move(run));
    return Outcome{valid && dominates, report};
  });

  criterion(12, "determinism across worker counts", 0, [&] {
    if (campaign_runs.size() != 3) return Outcome{false, "campaign runs missing"};
    std::string text;
    bool same = true;
    for (auto& run : campaign_runs) {
      const std::string ref = csv_text(run.table);
      for (int workers : {1, 3}) {
        run.cfg.workers = workers;
        const bool eq = csv_text(run_campaign(run.cfg)) == ref;
        same = same && eq;
        text += fmt(" %s/w%d:%s", to_string(run.cfg.kind).c_str(), workers, eq ? "same" : "DIFFERENT");
      }
    }
    return Outcome{same, "results.csv bytes vs default team:" + text};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures == 0 ? 0 : 1;
}
