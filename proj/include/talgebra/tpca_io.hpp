#ifndef TALGEBRA_TPCA_IO_HPP
#define TALGEBRA_TPCA_IO_HPP

// Binary TPCA model files. All fields little-endian:
//
//   char[8]  magic "TALGTPCA"
//   u32      format version (1)
//   u32      bytes per real component (4 or 8)
//   u64      order N, then N x u64 extents
//   u64      D, u64 K, u64 stored slice count S
//   slice_count x { u64 stored index, u8 conjugate flag }
//   S x { D complex mean, D real eigenvalues, D*D complex basis (column-major) }
//
// A complex value is two reals (re, im).

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <type_traits>
#include <vector>

#include "talgebra/error.hpp"
#include "talgebra/tpca.hpp"

namespace talgebra {

inline constexpr char kModelMagic[8] = {'T', 'A', 'L', 'G', 'T', 'P', 'C', 'A'};
inline constexpr std::uint32_t kModelVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "model files are written in host byte order; big-endian hosts are unsupported");

namespace detail {

class BinaryWriter {
 public:
  explicit BinaryWriter(const std::filesystem::path& path)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  }
  template <class T>
  void put(const T& v) {
    bytes(&v, sizeof(T));
  }
  void bytes(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!out_) throw IoError("write failed on " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::filesystem::path& path)
      : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open " + path.string());
  }
  template <class T>
  T get() {
    T v;
    bytes(&v, sizeof(T));
    return v;
  }
  void bytes(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw FormatError("truncated model file " + path_.string(), offset_ + in_.gcount());
    }
    offset_ += n;
  }
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::uint64_t offset_ = 0;
};

}  // namespace detail

template <class Real>
void save_model(const TpcaModel<Real>& model, const std::filesystem::path& path) {
  detail::BinaryWriter w(path);
  w.bytes(kModelMagic, sizeof(kModelMagic));
  w.put(kModelVersion);
  w.put(static_cast<std::uint32_t>(sizeof(Real)));
  w.put(static_cast<std::uint64_t>(model.shape().order()));
  for (std::size_t d : model.shape().dims()) w.put(static_cast<std::uint64_t>(d));
  w.put(static_cast<std::uint64_t>(model.dim()));
  w.put(static_cast<std::uint64_t>(model.train_count()));
  w.put(static_cast<std::uint64_t>(model.stored().size()));
  for (const auto& r : model.refs()) {
    w.put(static_cast<std::uint64_t>(r.stored));
    w.put(static_cast<std::uint8_t>(r.conjugate ? 1 : 0));
  }
  for (const auto& s : model.stored()) {
    w.bytes(s.mean.data(), sizeof(Complex<Real>) * std::size_t(s.mean.size()));
    w.bytes(s.eigenvalues.data(), sizeof(Real) * std::size_t(s.eigenvalues.size()));
    w.bytes(s.basis.data(), sizeof(Complex<Real>) * std::size_t(s.basis.size()));
  }
}

/// Loads a model written by save_model with the same precision.
template <class Real>
TpcaModel<Real> load_model(const std::filesystem::path& path) {
  detail::BinaryReader r(path);
  char magic[8];
  r.bytes(magic, sizeof(magic));
  if (std::memcmp(magic, kModelMagic, sizeof(magic)) != 0) {
    throw FormatError("not a TPCA model file: " + path.string(), 0);
  }
  if (const auto v = r.get<std::uint32_t>(); v != kModelVersion) {
    throw FormatError("unsupported model version " + std::to_string(v), 8);
  }
  if (const auto bytes = r.get<std::uint32_t>(); bytes != sizeof(Real)) {
    throw FormatError("model precision is " + std::to_string(bytes * 16) +
                          "-bit complex; load it with the matching precision",
                      12);
  }
  const auto order = r.get<std::uint64_t>();
  if (order > 64) throw FormatError("implausible t-scalar order", r.offset() - 8);
  std::vector<std::size_t> dims(order);
  for (auto& d : dims) d = static_cast<std::size_t>(r.get<std::uint64_t>());
  TShape shape;
  try {
    shape = TShape(dims);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what(), r.offset());
  }
  const auto dim = static_cast<std::size_t>(r.get<std::uint64_t>());
  const auto train_count = static_cast<std::size_t>(r.get<std::uint64_t>());
  const auto stored_count = static_cast<std::size_t>(r.get<std::uint64_t>());
  if (stored_count > shape.slice_count()) {
    throw FormatError("more stored slices than multi-indices", r.offset() - 8);
  }
  std::vector<SliceRef> refs(shape.slice_count());
  for (auto& ref : refs) {
    ref.stored = static_cast<std::size_t>(r.get<std::uint64_t>());
    ref.conjugate = r.get<std::uint8_t>() != 0;
    if (ref.stored >= stored_count) throw FormatError("dangling slice reference", r.offset() - 9);
  }
  const auto n = Eigen::Index(dim);
  std::vector<TpcaSlice<Real>> stored(stored_count);
  for (auto& s : stored) {
    s.mean.resize(n);
    s.eigenvalues.resize(n);
    s.basis.resize(n, n);
    r.bytes(s.mean.data(), sizeof(Complex<Real>) * dim);
    r.bytes(s.eigenvalues.data(), sizeof(Real) * dim);
    r.bytes(s.basis.data(), sizeof(Complex<Real>) * dim * dim);
  }
  return TpcaModel<Real>(std::move(shape), dim, train_count, std::move(stored), std::move(refs));
}

}  // namespace talgebra

#endif  // TALGEBRA_TPCA_IO_HPP
