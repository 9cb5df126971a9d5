#ifndef TALGEBRA_FOURIER_STORE_HPP
#define TALGEBRA_FOURIER_STORE_HPP

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "talgebra/error.hpp"
#include "talgebra/linalg.hpp"
#include "talgebra/tmat.hpp"

namespace talgebra {

enum class StoreMode { memory, disk };

/// Holds a chosen subset of Fourier slices for a sequence of transformed
/// t-vectors and hands them back slice by slice as D x count matrices.
///
/// Each appended item occupies one contiguous record of
/// slice_ids().size() * D complex values (slice-major). In disk mode the
/// records go to a temporary file that is removed when the store dies, so a
/// slice batch costs one read per item.
template <class Real>
class FourierSliceStore {
 public:
  using C = Complex<Real>;

  FourierSliceStore(std::size_t dim, std::vector<std::size_t> slice_ids, StoreMode mode,
                    const std::filesystem::path& cache_dir = {})
      : dim_(dim), slice_ids_(std::move(slice_ids)), mode_(mode) {
    if (mode_ == StoreMode::disk) {
      const auto dir = cache_dir.empty() ? std::filesystem::temp_directory_path() : cache_dir;
      static std::atomic<unsigned> counter{0};
      std::random_device rd;
      path_ = dir / ("talgebra-slices-" + std::to_string(rd()) + "-" +
                     std::to_string(counter++) + ".bin");
      out_.open(path_, std::ios::binary | std::ios::trunc);
      if (!out_) throw IoError("cannot create slice cache " + path_.string());
    }
  }

  FourierSliceStore(const FourierSliceStore&) = delete;
  FourierSliceStore& operator=(const FourierSliceStore&) = delete;

  ~FourierSliceStore() {
    if (!path_.empty()) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(path_, ec);
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t count() const noexcept { return count_; }
  const std::vector<std::size_t>& slice_ids() const noexcept { return slice_ids_; }
  StoreMode mode() const noexcept { return mode_; }

  void append(const FourierStack<Real>& stack) {
    if (stack.rows() != dim_ || stack.cols() != 1) {
      throw std::invalid_argument("FourierSliceStore: expected a transformed t-vector of length " +
                                  std::to_string(dim_));
    }
    record_.resize(slice_ids_.size() * dim_);
    for (std::size_t p = 0; p < slice_ids_.size(); ++p) {
      const auto src = stack.slice(slice_ids_[p]);
      for (std::size_t d = 0; d < dim_; ++d) record_[p * dim_ + d] = src(Eigen::Index(d), 0);
    }
    if (mode_ == StoreMode::memory) {
      memory_.insert(memory_.end(), record_.begin(), record_.end());
    } else {
      out_.write(reinterpret_cast<const char*>(record_.data()),
                 static_cast<std::streamsize>(record_.size() * sizeof(C)));
      if (!out_) throw IoError("write failed on slice cache " + path_.string());
    }
    ++count_;
  }

  /// Matrices for slice positions [first, last) of slice_ids(); column j is item j.
  std::vector<CMatrix<Real>> load(std::size_t first, std::size_t last) const {
    const std::size_t width = last - first;
    std::vector<CMatrix<Real>> out(width, CMatrix<Real>(Eigen::Index(dim_), Eigen::Index(count_)));
    const std::size_t record = slice_ids_.size() * dim_;
    if (mode_ == StoreMode::memory) {
      for (std::size_t item = 0; item < count_; ++item) {
        const C* base = memory_.data() + item * record + first * dim_;
        for (std::size_t p = 0; p < width; ++p) {
          std::copy(base + p * dim_, base + (p + 1) * dim_, out[p].col(Eigen::Index(item)).data());
        }
      }
      return out;
    }
    out_.flush();
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw IoError("cannot reopen slice cache " + path_.string());
    std::vector<C> chunk(width * dim_);
    for (std::size_t item = 0; item < count_; ++item) {
      in.seekg(static_cast<std::streamoff>((item * record + first * dim_) * sizeof(C)));
      in.read(reinterpret_cast<char*>(chunk.data()),
              static_cast<std::streamsize>(chunk.size() * sizeof(C)));
      if (!in) throw IoError("short read on slice cache " + path_.string());
      for (std::size_t p = 0; p < width; ++p) {
        std::copy(chunk.begin() + std::ptrdiff_t(p * dim_),
                  chunk.begin() + std::ptrdiff_t((p + 1) * dim_),
                  out[p].col(Eigen::Index(item)).data());
      }
    }
    return out;
  }

 private:
  std::size_t dim_;
  std::vector<std::size_t> slice_ids_;
  StoreMode mode_;
  std::size_t count_ = 0;
  std::vector<C> record_;
  std::vector<C> memory_;
  std::filesystem::path path_;
  mutable std::ofstream out_;
};

}  // namespace talgebra

#endif  // TALGEBRA_FOURIER_STORE_HPP
