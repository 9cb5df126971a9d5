#ifndef TALGEBRA_BENCH_REPORT_HPP
#define TALGEBRA_BENCH_REPORT_HPP

// Report files written by emit_reports:
//
//   psnr_table.csv       variant,d,psnr_db   (one row per variant and d)
//   psnr_heatmap.svg     variants x d grid colored by dB, with legend
//   per_image_d<d>.csv   sorted_rank,image_id,<one column per variant>,
//                        rows by ascending PCA PSNR
//   per_image_d<d>.svg   line chart of the same table
//
// Exact reconstructions print as "inf". Output depends only on the report.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "talgebra/bench/experiment.hpp"
#include "talgebra/error.hpp"

namespace talgebra::bench {

namespace detail {

inline std::string format_number(double v, int decimals) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed on " + path.string());
}

/// Piecewise-linear viridis approximation, t in [0, 1].
inline std::string color_ramp(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{{68, 1, 84},
                                                               {59, 82, 139},
                                                               {33, 145, 140},
                                                               {94, 201, 98},
                                                               {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * double(stops.size() - 1);
  const std::size_t i = std::min(std::size_t(t), stops.size() - 2);
  const double f = t - double(i);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                int(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                int(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                int(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

inline std::pair<double, double> finite_range(const std::vector<double>& values) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) return {0.0, 1.0};
  if (hi - lo < 1e-9) hi = lo + 1.0;
  return {lo, hi};
}

inline const char* line_color(std::size_t i) {
  static constexpr const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  return palette[i % 8];
}

inline std::string heatmap_svg(const PsnrReport& r) {
  const int cell_w = 72, cell_h = 30, left = 90, top = 40, legend_h = 70;
  const int width = left + cell_w * int(r.dims.size()) + 20;
  const int height = top + cell_h * int(r.variants.size()) + legend_h;
  std::vector<double> all;
  for (const auto& row : r.aggregate) all.insert(all.end(), row.begin(), row.end());
  const auto [lo, hi] = finite_range(all);

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<text x=\"" << left << "\" y=\"16\" font-size=\"13\">PSNR (dB) by variant and feature "
       "dimension d</text>\n";
  for (std::size_t j = 0; j < r.dims.size(); ++j) {
    s << "<text x=\"" << left + int(j) * cell_w + cell_w / 2 << "\" y=\"" << top - 6
      << "\" text-anchor=\"middle\">d=" << r.dims[j] << "</text>\n";
  }
  for (std::size_t i = 0; i < r.variants.size(); ++i) {
    const int y = top + int(i) * cell_h;
    s << "<text x=\"" << left - 6 << "\" y=\"" << y + cell_h / 2 + 4
      << "\" text-anchor=\"end\">" << r.variants[i] << "</text>\n";
    for (std::size_t j = 0; j < r.dims.size(); ++j) {
      const double v = r.aggregate[i][j];
      const double t = std::isfinite(v) ? (v - lo) / (hi - lo) : 1.0;
      const int x = left + int(j) * cell_w;
      s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w << "\" height=\""
        << cell_h << "\" fill=\"" << color_ramp(t) << "\"/>\n";
      s << "<text x=\"" << x + cell_w / 2 << "\" y=\"" << y + cell_h / 2 + 4
        << "\" text-anchor=\"middle\" fill=\"" << (t > 0.6 ? "#000000" : "#ffffff") << "\">"
        << format_number(v, 2) << "</text>\n";
    }
  }
  // Legend: discrete swatches with their dB values.
  const int ly = top + cell_h * int(r.variants.size()) + 20;
  const int swatches = 6;
  for (int k = 0; k < swatches; ++k) {
    const double t = double(k) / double(swatches - 1);
    const int x = left + k * 60;
    s << "<rect x=\"" << x << "\" y=\"" << ly << "\" width=\"60\" height=\"14\" fill=\""
      << color_ramp(t) << "\"/>\n";
    s << "<text x=\"" << x << "\" y=\"" << ly + 28 << "\">" << format_number(lo + t * (hi - lo), 1)
      << " dB</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

inline std::string per_image_svg(const PsnrReport& r, std::size_t dim_pos,
                                 const std::vector<std::size_t>& order) {
  const int width = 900, height = 440, left = 60, right = 130, top = 30, bottom = 50;
  const int plot_w = width - left - right, plot_h = height - top - bottom;
  std::vector<double> all;
  for (std::size_t v = 0; v < r.variants.size(); ++v) {
    all.insert(all.end(), r.per_image[v][dim_pos].begin(), r.per_image[v][dim_pos].end());
  }
  const auto [lo, hi] = finite_range(all);
  const std::size_t n = order.size();
  auto px = [&](std::size_t rank) {
    return left + (n > 1 ? double(rank) * plot_w / double(n - 1) : plot_w / 2.0);
  };
  auto py = [&](double v) {
    const double t = std::isfinite(v) ? (v - lo) / (hi - lo) : 1.0;
    return top + plot_h * (1.0 - std::clamp(t, 0.0, 1.0));
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<text x=\"" << left << "\" y=\"18\" font-size=\"13\">Per-image PSNR, d = "
    << r.dims[dim_pos] << " (images sorted by PCA PSNR)</text>\n";
  s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
    << plot_h << "\" fill=\"none\" stroke=\"#444444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    s << "<text x=\"" << left - 6 << "\" y=\"" << format_number(py(v) + 4, 1)
      << "\" text-anchor=\"end\">" << format_number(v, 1) << "</text>\n";
  }
  s << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15
    << "\" text-anchor=\"middle\">sorted image index</text>\n";
  for (std::size_t v = 0; v < r.variants.size(); ++v) {
    s << "<polyline fill=\"none\" stroke=\"" << line_color(v) << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t rank = 0; rank < n; ++rank) {
      if (rank) s << ' ';
      s << format_number(px(rank), 2) << ',' << format_number(py(r.per_image[v][dim_pos][order[rank]]), 2);
    }
    s << "\"/>\n";
    const int ly = top + 14 + int(v) * 18;
    s << "<line x1=\"" << width - right + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
      << width - right + 34 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << line_color(v)
      << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << width - right + 40 << "\" y=\"" << ly << "\">" << r.variants[v]
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace detail

/// Writes the CSV and SVG reports into `out_dir` (created if missing) and
/// returns the written paths.
inline std::vector<std::filesystem::path> emit_reports(const PsnrReport& r,
                                                       const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;

  std::ostringstream table;
  table << "variant,d,psnr_db\n";
  for (std::size_t v = 0; v < r.variants.size(); ++v) {
    for (std::size_t j = 0; j < r.dims.size(); ++j) {
      table << r.variants[v] << ',' << r.dims[j] << ',' << detail::format_number(r.aggregate[v][j], 6)
            << '\n';
    }
  }
  written.push_back(out_dir / "psnr_table.csv");
  detail::write_text(written.back(), table.str());

  written.push_back(out_dir / "psnr_heatmap.svg");
  detail::write_text(written.back(), detail::heatmap_svg(r));

  for (std::size_t j = 0; j < r.dims.size(); ++j) {
    const auto order = r.sorted_order(j);
    std::ostringstream csv;
    csv << "sorted_rank,image_id";
    for (const auto& name : r.variants) csv << ',' << name;
    csv << '\n';
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      csv << rank + 1 << ',' << r.image_ids[order[rank]];
      for (std::size_t v = 0; v < r.variants.size(); ++v) {
        csv << ',' << detail::format_number(r.per_image[v][j][order[rank]], 6);
      }
      csv << '\n';
    }
    const std::string stem = "per_image_d" + std::to_string(r.dims[j]);
    written.push_back(out_dir / (stem + ".csv"));
    detail::write_text(written.back(), csv.str());
    written.push_back(out_dir / (stem + ".svg"));
    detail::write_text(written.back(), detail::per_image_svg(r, j, order));
  }
  return written;
}

}  // namespace talgebra::bench

#endif  // TALGEBRA_BENCH_REPORT_HPP
