#ifndef TALGEBRA_BENCH_PGM_HPP
#define TALGEBRA_BENCH_PGM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "talgebra/compound.hpp"
#include "talgebra/error.hpp"

namespace talgebra::bench {

/// Binary PGM (P5, maxval 255); values are rounded and clamped to [0, 255].
inline void write_pgm(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
  std::vector<std::uint8_t> bytes(img.pixels().size());
  std::transform(img.pixels().begin(), img.pixels().end(), bytes.begin(), [](double v) {
    return std::uint8_t(std::clamp(std::lround(v), 0L, 255L));
  });
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw IoError("write failed on " + path.string());
}

/// Image from a column-major raster vector.
template <class Vec>
Image image_from_raster(const Vec& v, std::size_t rows, std::size_t cols) {
  Image img(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) img(r + 1, c + 1) = double(v(Eigen::Index(c * rows + r)));
  }
  return img;
}

}  // namespace talgebra::bench

#endif  // TALGEBRA_BENCH_PGM_HPP
