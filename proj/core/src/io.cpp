#include "optbench/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "optbench/errors.hpp"

namespace optbench {
namespace {

double parse_real(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  // from_chars rejects a leading '+', never emitted by format_real.
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    if (field == "inf") return INFINITY;
    if (field == "-inf") return -INFINITY;
    if (field == "nan") return NAN;
    throw IoError("trajectory CSV line " + std::to_string(line) + ": bad number '" +
                  std::string(field) + "'");
  }
  return value;
}

std::string escape_xml(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Fixed-precision coordinates keep the SVG compact and byte-stable.
std::string coord(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                 std::chars_format::fixed, 2);
  return std::string(buf.data(), res.ptr);
}

constexpr std::array<std::string_view, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string format_real(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string format_trajectory_csv(const Trajectory& traj) {
  std::string out(kTrajectoryCsvHeader);
  out += '\n';
  for (const auto& r : traj.records) {
    out += std::to_string(r.t);
    for (double v : {r.loss, r.theta, r.grad_norm, r.mean_dfc}) {
      out += ',';
      out += format_real(v);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  write_text_file(path, format_trajectory_csv(traj));
}

Trajectory parse_trajectory_csv(std::string_view text) {
  Trajectory traj;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line_no == 1) {
      if (line != kTrajectoryCsvHeader) {
        throw IoError("trajectory CSV: unexpected header '" + std::string(line) + "'");
      }
      continue;
    }
    if (line.empty()) continue;
    std::array<std::string_view, 5> fields;
    std::size_t start = 0;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const auto comma = line.find(',', start);
      if ((comma == std::string_view::npos) != (k == fields.size() - 1)) {
        throw IoError("trajectory CSV line " + std::to_string(line_no) + ": expected 5 fields");
      }
      fields[k] = line.substr(start, comma == std::string_view::npos ? comma : comma - start);
      start = comma + 1;
    }
    TrajectoryRecord r;
    r.t = static_cast<long>(parse_real(fields[0], line_no));
    r.loss = parse_real(fields[1], line_no);
    r.theta = parse_real(fields[2], line_no);
    r.grad_norm = parse_real(fields[3], line_no);
    r.mean_dfc = parse_real(fields[4], line_no);
    traj.records.push_back(r);
  }
  if (line_no == 0) throw IoError("trajectory CSV: empty input");
  return traj;
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trajectory_csv(buf.str());
}

std::string format_svg_lines(const std::vector<Series>& series, std::string_view title) {
  if (series.empty()) throw UsageError("render_svg_lines: no series given");
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    if (s.points.empty()) throw UsageError("render_svg_lines: series '" + s.name + "' is empty");
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmin <= xmax)) xmin = 0.0, xmax = 1.0;
  if (!(ymin <= ymax)) ymin = 0.0, ymax = 1.0;
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  constexpr double width = 640, height = 400;
  constexpr double left = 70, right = 150, top = 40, bottom = 50;
  constexpr double plot_w = width - left - right, plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * plot_h; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  if (!title.empty()) {
    svg << "<text x=\"" << coord(left + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << escape_xml(title) << "</text>\n";
  }
  // axes
  svg << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(top + plot_h) << "\" x2=\""
      << coord(left + plot_w) << "\" y2=\"" << coord(top + plot_h)
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(top) << "\" x2=\"" << coord(left)
      << "\" y2=\"" << coord(top + plot_h) << "\" stroke=\"black\"/>\n";
  const auto label = [&](double x, double y, std::string_view anchor, double value) {
    svg << "<text x=\"" << coord(x) << "\" y=\"" << coord(y) << "\" text-anchor=\"" << anchor
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_real(value)
        << "</text>\n";
  };
  label(left, top + plot_h + 18, "start", xmin);
  label(left + plot_w, top + plot_h + 18, "end", xmax);
  label(left - 6, top + plot_h, "end", ymin);
  label(left - 6, top + 10, "end", ymax);

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto colour = kPalette[k % kPalette.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& [x, y] : series[k].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      svg << (first ? "" : " ") << coord(px(x)) << ',' << coord(py(y));
      first = false;
    }
    svg << "\"/>\n";
    const double ly = top + 14.0 + 18.0 * static_cast<double>(k);
    const double lx = left + plot_w + 12.0;
    svg << "<line x1=\"" << coord(lx) << "\" y1=\"" << coord(ly - 4) << "\" x2=\""
        << coord(lx + 20) << "\" y2=\"" << coord(ly - 4) << "\" stroke=\"" << colour
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << coord(lx + 26) << "\" y=\"" << coord(ly)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(series[k].name)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void render_svg_lines(const std::vector<Series>& series, const std::filesystem::path& path,
                      std::string_view title) {
  write_text_file(path, format_svg_lines(series, title));
}

}  // namespace optbench
