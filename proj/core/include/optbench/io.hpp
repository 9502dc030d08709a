#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optbench/harness.hpp"

namespace optbench {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_real(double x);

inline constexpr std::string_view kTrajectoryCsvHeader = "iteration,loss,theta,grad_norm,mean_dfc";

/// Header line plus one `\n`-terminated row per record.
std::string format_trajectory_csv(const Trajectory& traj);
/// Throws IoError naming `path` when the file cannot be written.
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

/// Parses the records back; spec and metadata are not part of the file.
Trajectory parse_trajectory_csv(std::string_view text);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

/// Standalone SVG 1.1 line chart: one polyline per series, axes with min/max
/// tick labels and a legend. Output depends only on the input values.
std::string format_svg_lines(const std::vector<Series>& series, std::string_view title = {});
void render_svg_lines(const std::vector<Series>& series, const std::filesystem::path& path,
                      std::string_view title = {});

/// Writes `content` verbatim, throwing IoError with the path on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace optbench
