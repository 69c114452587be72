// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "mmhybrid/config.hpp"
#include "mmhybrid/experiments.hpp"

namespace mmhybrid {

inline constexpr const char* kToolVersion = "1.0.0";

// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

// Header "axis,series,mean,stderr,count" followed by one row per ResultRow.
void write_csv(const ResultTable& table, std::ostream& out);
void emit_csv(const ResultTable& table, const std::filesystem::path& path);
ResultTable parse_csv(std::istream& in);
ResultTable read_csv(const std::filesystem::path& path);

// Gnuplot script drawing one line (with error bars) per series of csv_name.
void emit_plot_script(const ResultTable& table, const std::filesystem::path& path,
                      const std::string& csv_name = "results.csv");

void emit_manifest(const CampaignConfig& cfg, const ResultTable& table,
                   const std::filesystem::path& path);

// One record per path: user,path,re_gain,im_gain,aod_az,aod_el,aoa_az,aoa_el
void write_channel_csv(std::span<const ChannelMatrix> users, std::ostream& out);
ChannelEnsemble read_channel_csv(std::istream& in, const ArrayGeometry& bs_geom,
                                 const ArrayGeometry& ms_geom);

// index,azimuth,elevation,re0,im0,re1,im1,...
void write_codebook_csv(const Codebook& cb, std::ostream& out);

// matrix,row,col,re,im with matrix in {F_RF, F_BB, w<u>}
void write_precoder_csv(const HybridDesign& design, std::ostream& out);

}  // namespace mmhybrid
