#ifndef TALGEBRA_TMAT_HPP
#define TALGEBRA_TMAT_HPP

// T-matrices and t-vectors: D1 x D2 arrays of t-scalars stored as one
// order-(N+2) array in C^{I1 x ... x IN x D1 x D2}, last index fastest.
// With that layout the component-k spatial slice (and, after transforming,
// the k-th Fourier slice) is a contiguous row-major D1 x D2 block.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "talgebra/linalg.hpp"
#include "talgebra/parallel.hpp"
#include "talgebra/tcore.hpp"

namespace talgebra {

namespace detail {

/// Shared storage for spatial t-matrices and Fourier stacks.
template <class Real>
class SlicedArray {
 public:
  using value_type = Complex<Real>;
  using RowMajor = Eigen::Matrix<value_type, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using SliceMap = Eigen::Map<RowMajor>;
  using ConstSliceMap = Eigen::Map<const RowMajor>;

  SlicedArray() : rows_(1), cols_(1), data_(1) {}
  SlicedArray(TShape shape, std::size_t rows, std::size_t cols)
      : shape_(std::move(shape)), rows_(rows), cols_(cols) {
    if (rows_ < 1 || cols_ < 1) throw std::invalid_argument("t-matrix dimensions must be >= 1");
    data_.resize(shape_.slice_count() * rows_ * cols_);
  }
  SlicedArray(TShape shape, std::size_t rows, std::size_t cols, std::vector<value_type> data)
      : SlicedArray(std::move(shape), rows, cols) {
    if (data.size() != data_.size()) {
      throw std::invalid_argument("t-matrix data length does not match its dimensions");
    }
    data_ = std::move(data);
  }

  const TShape& shape() const noexcept { return shape_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t slice_count() const noexcept { return shape_.slice_count(); }
  std::span<const value_type> data() const noexcept { return data_; }
  std::span<value_type> data() noexcept { return data_; }

  SliceMap slice(std::size_t k) {
    return SliceMap(data_.data() + k * rows_ * cols_, Eigen::Index(rows_), Eigen::Index(cols_));
  }
  ConstSliceMap slice(std::size_t k) const {
    return ConstSliceMap(data_.data() + k * rows_ * cols_, Eigen::Index(rows_),
                         Eigen::Index(cols_));
  }

  /// Component k of entry (r, c); r and c are 0-based here.
  value_type& raw(std::size_t k, std::size_t r, std::size_t c) {
    return data_[(k * rows_ + r) * cols_ + c];
  }
  const value_type& raw(std::size_t k, std::size_t r, std::size_t c) const {
    return data_[(k * rows_ + r) * cols_ + c];
  }

  bool operator==(const SlicedArray&) const = default;

 protected:
  void check_entry(std::size_t r, std::size_t c) const {
    if (r < 1 || r > rows_ || c < 1 || c > cols_) {
      throw std::invalid_argument("t-matrix entry (" + std::to_string(r) + "," +
                                  std::to_string(c) + ") out of range");
    }
  }

  TShape shape_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<value_type> data_;
};

}  // namespace detail

/// A D1 x D2 matrix over the t-algebra. Entry indices are 1-based.
template <class Real = double>
class TMatrix : public detail::SlicedArray<Real> {
  using Base = detail::SlicedArray<Real>;

 public:
  using typename Base::value_type;
  using Base::Base;

  bool is_vector() const noexcept { return this->cols_ == 1; }

  TScalar<Real> entry(std::size_t r, std::size_t c) const {
    this->check_entry(r, c);
    TScalar<Real> out(this->shape_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = this->raw(k, r - 1, c - 1);
    return out;
  }

  void set_entry(std::size_t r, std::size_t c, const TScalar<Real>& v) {
    this->check_entry(r, c);
    detail::require_same_shape(this->shape_, v.shape(), "TMatrix::set_entry");
    for (std::size_t k = 0; k < v.size(); ++k) this->raw(k, r - 1, c - 1) = v[k];
  }

  value_type& at(const MultiIndex& idx, std::size_t r, std::size_t c) {
    this->check_entry(r, c);
    return this->raw(this->shape_.linear(idx), r - 1, c - 1);
  }
  const value_type& at(const MultiIndex& idx, std::size_t r, std::size_t c) const {
    this->check_entry(r, c);
    return this->raw(this->shape_.linear(idx), r - 1, c - 1);
  }

  bool operator==(const TMatrix&) const = default;
};

/// A t-vector is a t-matrix with one column.
template <class Real = double>
using TVector = TMatrix<Real>;

template <class Real = double>
TVector<Real> make_tvector(const TShape& shape, std::size_t length) {
  return TVector<Real>(shape, length, 1);
}

/// The K_slice complex D1 x D2 matrices of a transformed t-matrix, in
/// canonical multi-index order.
template <class Real = double>
class FourierStack : public detail::SlicedArray<Real> {
  using Base = detail::SlicedArray<Real>;

 public:
  using Base::Base;
  bool operator==(const FourierStack&) const = default;
};

template <class Real = double>
TMatrix<Real> tmat_zero(const TShape& shape, std::size_t rows, std::size_t cols) {
  return TMatrix<Real>(shape, rows, cols);
}

/// diag(E, ..., E).
template <class Real = double>
TMatrix<Real> tmat_identity(const TShape& shape, std::size_t dim) {
  TMatrix<Real> out(shape, dim, dim);
  for (std::size_t d = 0; d < dim; ++d) out.raw(0, d, d) = Real(1);
  return out;
}

template <class Real>
TMatrix<Real> tmat_add(const TMatrix<Real>& a, const TMatrix<Real>& b) {
  detail::require_same_shape(a.shape(), b.shape(), "tmat_add");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("tmat_add: dimension mismatch");
  }
  TMatrix<Real> out = a;
  auto dst = out.data();
  auto src = b.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return out;
}

/// Applies the multi-way DFT to every t-scalar entry and regroups the result
/// into Fourier slices.
template <class Real>
FourierStack<Real> to_fourier_stack(const TMatrix<Real>& a) {
  auto src = a.data();
  FourierStack<Real> out(a.shape(), a.rows(), a.cols(),
                         std::vector<Complex<Real>>(src.begin(), src.end()));
  detail::transform_axes<Real>(out.data(), a.shape(), a.rows() * a.cols(), false);
  return out;
}

template <class Real>
TMatrix<Real> from_fourier_stack(const FourierStack<Real>& s) {
  auto src = s.data();
  TMatrix<Real> out(s.shape(), s.rows(), s.cols(),
                    std::vector<Complex<Real>>(src.begin(), src.end()));
  detail::transform_axes<Real>(out.data(), s.shape(), s.rows() * s.cols(), true);
  return out;
}

/// Product over the t-algebra, evaluated as one canonical product per slice.
template <class Real>
TMatrix<Real> tmat_mul(const TMatrix<Real>& a, const TMatrix<Real>& b, int parallelism = 1) {
  detail::require_same_shape(a.shape(), b.shape(), "tmat_mul");
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("tmat_mul: inner dimensions differ (" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + ")");
  }
  const FourierStack<Real> fa = to_fourier_stack(a);
  const FourierStack<Real> fb = to_fourier_stack(b);
  FourierStack<Real> fc(a.shape(), a.rows(), b.cols());
  parallel_for(fc.slice_count(), parallelism,
               [&](std::size_t k) { fc.slice(k).noalias() = fa.slice(k) * fb.slice(k); });
  return from_fourier_stack(fc);
}

/// Transpose with t-scalar conjugation of every entry.
template <class Real>
TMatrix<Real> tmat_conj_transpose(const TMatrix<Real>& a) {
  const TShape& shape = a.shape();
  TMatrix<Real> out(shape, a.cols(), a.rows());
  for (std::size_t k = 0; k < shape.slice_count(); ++k) {
    const std::size_t m = shape.mirror(k);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      for (std::size_t c = 0; c < a.cols(); ++c) out.raw(m, c, r) = std::conj(a.raw(k, r, c));
    }
  }
  return out;
}

template <class Real>
struct Tsvd {
  TMatrix<Real> u;  ///< unitary: U* o U = I
  TMatrix<Real> s;  ///< diagonal, slices real and descending
};

/// TSVD of a Hermitian PSD t-matrix, G = U o S o U*, computed as one
/// Hermitian eigendecomposition per Fourier slice.
template <class Real>
Tsvd<Real> tsvd_hermitian(const TMatrix<Real>& g, int parallelism = 1) {
  if (g.rows() != g.cols()) throw std::invalid_argument("tsvd_hermitian: matrix is not square");
  const FourierStack<Real> fg = to_fourier_stack(g);
  FourierStack<Real> fu(g.shape(), g.rows(), g.cols());
  FourierStack<Real> fs(g.shape(), g.rows(), g.cols());
  parallel_for(fg.slice_count(), parallelism, [&](std::size_t k) {
    const CMatrix<Real> slice = fg.slice(k);
    const auto eig = detail::sorted_hermitian_eigen(slice);
    fu.slice(k) = eig.vectors;
    auto sk = fs.slice(k);
    for (Eigen::Index j = 0; j < eig.values.size(); ++j) sk(j, j) = eig.values(j);
  });
  return {from_fourier_stack(fu), from_fourier_stack(fs)};
}

}  // namespace talgebra

#endif  // TALGEBRA_TMAT_HPP
