#ifndef TALGEBRA_BENCH_IDX_HPP
#define TALGEBRA_BENCH_IDX_HPP

// IDX files (the MNIST distribution format): big-endian u32 header fields,
// images magic 0x00000803 with (count, rows, cols), labels magic 0x00000801
// with (count), then one unsigned byte per pixel or label.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "talgebra/compound.hpp"
#include "talgebra/error.hpp"

namespace talgebra::bench {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

struct LabeledImage {
  Image image;
  int label = 0;
};

namespace detail {

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes, std::size_t offset,
                               const std::filesystem::path& path) {
  if (offset + 4 > bytes.size()) {
    throw FormatError("truncated IDX header in " + path.string(), bytes.size());
  }
  return (std::uint32_t(bytes[offset]) << 24) | (std::uint32_t(bytes[offset + 1]) << 16) |
         (std::uint32_t(bytes[offset + 2]) << 8) | std::uint32_t(bytes[offset + 3]);
}

inline void check_magic(std::uint32_t found, std::uint32_t expected,
                        const std::filesystem::path& path) {
  if (found != expected) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "bad IDX magic 0x%08x (expected 0x%08x)", found, expected);
    throw FormatError(std::string(buf) + " in " + path.string(), 0);
  }
}

}  // namespace detail

/// Reads an IDX image file and its label file into (image, label) pairs.
inline std::vector<LabeledImage> load_idx(const std::filesystem::path& images_path,
                                          const std::filesystem::path& labels_path) {
  const auto img = detail::read_file(images_path);
  detail::check_magic(detail::read_be32(img, 0, images_path), kIdxImagesMagic, images_path);
  const std::size_t count = detail::read_be32(img, 4, images_path);
  const std::size_t rows = detail::read_be32(img, 8, images_path);
  const std::size_t cols = detail::read_be32(img, 12, images_path);
  if (rows == 0 || cols == 0) throw FormatError("zero image dimension in " + images_path.string(), 8);
  const std::size_t pixels = rows * cols;
  if (img.size() < 16 + count * pixels) {
    throw FormatError("truncated IDX image data in " + images_path.string(), img.size());
  }

  const auto lab = detail::read_file(labels_path);
  detail::check_magic(detail::read_be32(lab, 0, labels_path), kIdxLabelsMagic, labels_path);
  const std::size_t label_count = detail::read_be32(lab, 4, labels_path);
  if (label_count != count) {
    throw FormatError("label count " + std::to_string(label_count) + " != image count " +
                          std::to_string(count) + " in " + labels_path.string(),
                      4);
  }
  if (lab.size() < 8 + count) {
    throw FormatError("truncated IDX label data in " + labels_path.string(), lab.size());
  }

  std::vector<LabeledImage> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto* p = img.data() + 16 + i * pixels;
    out.push_back({Image(rows, cols, std::vector<double>(p, p + pixels)), int(lab[8 + i])});
  }
  return out;
}

}  // namespace talgebra::bench

#endif  // TALGEBRA_BENCH_IDX_HPP
