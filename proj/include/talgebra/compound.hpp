#ifndef TALGEBRA_COMPOUND_HPP
#define TALGEBRA_COMPOUND_HPP

// Compound images: every pixel replaced by a t-scalar built from its
// neighborhood.
//
//  * nested (strategy 1): a 3x3 neighborhood applied `reuses` times, giving a
//    3x3x...x3 t-scalar of order 2*reuses. Every nesting level reads the
//    source image extended by zeros on an infinite plane, so the entry at
//    (i1, j1, ..., ik, jk) is img(r + sum(i - 2), c + sum(j - 2)).
//  * window (strategy 2): one w x w window, w odd.
//
// The entry at the central multi-index is always the pixel itself.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "talgebra/linalg.hpp"
#include "talgebra/tcore.hpp"
#include "talgebra/tmat.hpp"

namespace talgebra {

/// Monochrome image with raw intensities (0-255 scale), row-major storage.
class Image {
 public:
  Image() = default;
  Image(std::size_t rows, std::size_t cols) : Image(rows, cols, std::vector<double>(rows * cols)) {}
  Image(std::size_t rows, std::size_t cols, std::vector<double> pixels)
      : rows_(rows), cols_(cols), pixels_(std::move(pixels)) {
    if (rows_ * cols_ == 0) throw std::invalid_argument("Image: empty image");
    if (pixels_.size() != rows_ * cols_) {
      throw std::invalid_argument("Image: pixel count does not match " + std::to_string(rows_) +
                                  "x" + std::to_string(cols_));
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<double>& pixels() const noexcept { return pixels_; }

  /// 1-based access.
  double& operator()(std::size_t r, std::size_t c) { return pixels_[(r - 1) * cols_ + (c - 1)]; }
  double operator()(std::size_t r, std::size_t c) const {
    return pixels_[(r - 1) * cols_ + (c - 1)];
  }

  /// 0-based access on the zero-extended plane.
  double padded(long r, long c) const noexcept {
    if (r < 0 || c < 0 || r >= long(rows_) || c >= long(cols_)) return 0.0;
    return pixels_[std::size_t(r) * cols_ + std::size_t(c)];
  }

  bool operator==(const Image&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> pixels_;
};

struct CompoundStrategy {
  enum class Kind { plain, nested, window };
  Kind kind = Kind::plain;
  std::size_t parameter = 0;  ///< reuses for nested, width for window

  bool operator==(const CompoundStrategy&) const = default;
};

/// A R x C t-matrix of compound pixels plus how it was built.
template <class Real = double>
struct CompoundImage {
  TMatrix<Real> matrix;
  CompoundStrategy strategy;
};

namespace detail {

/// Fills every spatial slice k with the image shifted by offsets(k).
template <class Real, class OffsetFn>
CompoundImage<Real> shifted_stack(const Image& img, const TShape& shape, CompoundStrategy strategy,
                                  OffsetFn offsets) {
  TMatrix<Real> m(shape, img.rows(), img.cols());
  for (std::size_t k = 0; k < shape.slice_count(); ++k) {
    const auto [dr, dc] = offsets(shape.multi_index(k));
    for (std::size_t r = 0; r < img.rows(); ++r) {
      for (std::size_t c = 0; c < img.cols(); ++c) {
        m.raw(k, r, c) = Real(img.padded(long(r) + dr, long(c) + dc));
      }
    }
  }
  return {std::move(m), strategy};
}

}  // namespace detail

/// Order-one compound image with shape (1,): each pixel as its own t-scalar.
template <class Real = double>
CompoundImage<Real> plain_extend(const Image& img) {
  return detail::shifted_stack<Real>(img, TShape{1}, {CompoundStrategy::Kind::plain, 0},
                                     [](const MultiIndex&) { return std::pair<long, long>{0, 0}; });
}

/// Strategy 1: nested 3x3 neighborhoods, t-scalar shape 3 x ... x 3 (2 * reuses axes).
template <class Real = double>
CompoundImage<Real> strategy1_extend(const Image& img, std::size_t reuses) {
  if (reuses < 1) throw std::invalid_argument("strategy1_extend: reuses must be >= 1");
  return detail::shifted_stack<Real>(
      img, TShape::repeated(3, 2 * reuses), {CompoundStrategy::Kind::nested, reuses},
      [](const MultiIndex& idx) {
        long dr = 0;
        long dc = 0;
        for (std::size_t a = 0; a < idx.size(); a += 2) {
          dr += long(idx[a]) - 2;
          dc += long(idx[a + 1]) - 2;
        }
        return std::pair<long, long>{dr, dc};
      });
}

/// Strategy 2: one w x w window centered on the pixel, w odd and >= 3.
template <class Real = double>
CompoundImage<Real> strategy2_extend(const Image& img, std::size_t window) {
  if (window < 3 || window % 2 == 0) {
    throw std::invalid_argument("strategy2_extend: window must be odd and >= 3, got " +
                                std::to_string(window));
  }
  const long half = long(window / 2);
  return detail::shifted_stack<Real>(img, TShape{window, window},
                                     {CompoundStrategy::Kind::window, window},
                                     [half](const MultiIndex& idx) {
                                       return std::pair<long, long>{long(idx[0]) - 1 - half,
                                                                    long(idx[1]) - 1 - half};
                                     });
}

/// Column-major raster: compound pixel (r, c) becomes entry (c - 1) * R + r.
template <class Real>
TVector<Real> image_to_tvector(const CompoundImage<Real>& cimg) {
  const auto& m = cimg.matrix;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  TVector<Real> v(m.shape(), rows * cols, 1);
  for (std::size_t k = 0; k < m.slice_count(); ++k) {
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) v.raw(k, c * rows + r, 0) = m.raw(k, r, c);
    }
  }
  return v;
}

/// Inverse of image_to_tvector for a `rows` x `cols` compound image.
template <class Real>
TMatrix<Real> tvector_to_image(const TVector<Real>& v, std::size_t rows, std::size_t cols) {
  if (!v.is_vector() || v.rows() != rows * cols) {
    throw std::invalid_argument("tvector_to_image: length does not match " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }
  TMatrix<Real> m(v.shape(), rows, cols);
  for (std::size_t k = 0; k < v.slice_count(); ++k) {
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) m.raw(k, r, c) = v.raw(k, c * rows + r, 0);
    }
  }
  return m;
}

/// Column-major raster vector of a plain image; the PCA path's vectorizer.
template <class Real = double>
RVector<Real> vectorize(const Image& img) {
  RVector<Real> v(Eigen::Index(img.rows() * img.cols()));
  for (std::size_t c = 0; c < img.cols(); ++c) {
    for (std::size_t r = 0; r < img.rows(); ++r) {
      v(Eigen::Index(c * img.rows() + r)) = Real(img(r + 1, c + 1));
    }
  }
  return v;
}

/// Component `idx` of every entry of a t-vector.
template <class Real>
CVector<Real> spatial_slice(const TVector<Real>& x, const MultiIndex& idx) {
  if (!x.is_vector()) throw std::invalid_argument("spatial_slice: expected a t-vector");
  if (!x.shape().contains(idx)) {
    throw std::invalid_argument("spatial_slice: index out of bounds for shape " +
                                x.shape().to_string());
  }
  return x.slice(x.shape().linear(idx)).col(0);
}

/// Spatial slice at ((I1+1)/2, ..., (IN+1)/2); every extent must be odd.
template <class Real>
CVector<Real> central_spatial_slice(const TVector<Real>& x) {
  return spatial_slice(x, x.shape().center());
}

}  // namespace talgebra

#endif  // TALGEBRA_COMPOUND_HPP
