// SPDX-License-Identifier: Apache-2.0
#include "mmhybrid/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include <json.hpp>

namespace mmhybrid {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

template <class T>
T parse_number(std::string_view s, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number '" +
                             std::string(s) + "'");
  }
  return value;
}

constexpr std::string_view kHeader = "axis,series,mean,stderr,count";

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_csv(const ResultTable& table, std::ostream& out) {
  out << kHeader << '\n';
  for (const auto& r : table.rows) {
    out << format_double(r.axis) << ',' << r.series << ',' << format_double(r.mean) << ','
        << format_double(r.std_error) << ',' << r.count << '\n';
  }
}

void emit_csv(const ResultTable& table, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_csv(table, out);
  finish(out, path);
}

ResultTable parse_csv(std::istream& in) {
  ResultTable t;
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw std::runtime_error("csv: missing or unexpected header");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 5) throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 5 fields");
    t.rows.push_back(ResultRow{parse_number<double>(f[0], line_no), std::string(f[1]),
                               parse_number<double>(f[2], line_no),
                               parse_number<double>(f[3], line_no),
                               parse_number<std::uint64_t>(f[4], line_no)});
  }
  return t;
}

ResultTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_csv(in);
}

void emit_plot_script(const ResultTable& table, const std::filesystem::path& path,
                      const std::string& csv_name) {
  auto out = open_out(path);
  out << "# gnuplot -p " << path.filename().string() << "\n"
      << "set datafile separator ','\n"
      << "set key outside right\n"
      << "set grid\n"
      << "set xlabel '" << table.axis_name << "'\n"
      << "set ylabel 'mean'\n";
  const auto names = table.series_names();
  if (names.empty()) {
    out << "# no data rows\n";
  } else {
    out << "plot \\\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto& s = names[i];
      out << "  '" << csv_name << "' every ::1 using 1:(strcol(2) eq '" << s
          << "' ? $3 : NaN):4 with yerrorlines title '" << s << "'"
          << (i + 1 < names.size() ? ", \\\n" : "\n");
    }
  }
  finish(out, path);
}

void emit_manifest(const CampaignConfig& cfg, const ResultTable& table,
                   const std::filesystem::path& path) {
  nlohmann::json j;
  j["tool"] = "mmhybrid";
  j["version"] = kToolVersion;
  j["campaign"] = to_string(cfg.kind);
  j["seed"] = cfg.seed;
  j["config"] = to_json(cfg);
  j["rows"] = table.rows.size();
  j["discarded"] = table.discarded;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

void write_channel_csv(std::span<const ChannelMatrix> users, std::ostream& out) {
  out << "user,path,re_gain,im_gain,aod_az,aod_el,aoa_az,aoa_el\n";
  for (std::size_t u = 0; u < users.size(); ++u) {
    for (std::size_t l = 0; l < users[u].paths.size(); ++l) {
      const auto& p = users[u].paths[l];
      out << u << ',' << l << ',' << format_double(p.gain.real()) << ','
          << format_double(p.gain.imag()) << ',' << format_double(p.aod.azimuth) << ','
          << format_double(p.aod.elevation) << ',' << format_double(p.aoa.azimuth) << ','
          << format_double(p.aoa.elevation) << '\n';
    }
  }
}

ChannelEnsemble read_channel_csv(std::istream& in, const ArrayGeometry& bs_geom,
                                 const ArrayGeometry& ms_geom) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("channel csv: empty input");
  std::vector<std::vector<PathComponent>> per_user;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) throw std::runtime_error("channel csv line " + std::to_string(line_no) + ": expected 8 fields");
    const auto u = parse_number<std::size_t>(f[0], line_no);
    if (u >= per_user.size()) per_user.resize(u + 1);
    PathComponent p;
    p.gain = {parse_number<double>(f[2], line_no), parse_number<double>(f[3], line_no)};
    p.aod = {parse_number<double>(f[4], line_no), parse_number<double>(f[5], line_no)};
    p.aoa = {parse_number<double>(f[6], line_no), parse_number<double>(f[7], line_no)};
    per_user[u].push_back(p);
  }
  ChannelEnsemble users;
  for (auto& paths : per_user) users.push_back(make_channel(std::move(paths), bs_geom, ms_geom));
  return users;
}

void write_codebook_csv(const Codebook& cb, std::ostream& out) {
  out << "index,azimuth,elevation";
  const Eigen::Index n = cb.vectors.empty() ? 0 : cb.vectors.front().size();
  for (Eigen::Index i = 0; i < n; ++i) out << ",re" << i << ",im" << i;
  out << '\n';
  for (std::size_t k = 0; k < cb.size(); ++k) {
    out << k << ',' << format_double(cb.grid[k].azimuth) << ','
        << format_double(cb.grid[k].elevation);
    for (Eigen::Index i = 0; i < n; ++i) {
      out << ',' << format_double(cb.vectors[k][i].real()) << ','
          << format_double(cb.vectors[k][i].imag());
    }
    out << '\n';
  }
}

void write_precoder_csv(const HybridDesign& design, std::ostream& out) {
  out << "matrix,row,col,re,im\n";
  auto dump = [&](const std::string& name, const CMatrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        out << name << ',' << r << ',' << c << ',' << format_double(m(r, c).real()) << ','
            << format_double(m(r, c).imag()) << '\n';
      }
    }
  };
  dump("F_RF", design.rf.f_rf);
  dump("F_BB", design.baseband.f_bb);
  for (std::size_t u = 0; u < design.combiners.w.size(); ++u) {
    dump("w" + std::to_string(u), design.combiners.w[u]);
  }
}

}  // namespace mmhybrid
