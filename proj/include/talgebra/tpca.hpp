#ifndef TALGEBRA_TPCA_HPP
#define TALGEBRA_TPCA_HPP

// Canonical PCA and its generalization over the t-algebra (TPCA).
//
// TPCA is fitted slice by slice in the Fourier domain: every multi-index gets
// its own mean, covariance (1/(K-1) normalization) and Hermitian
// eigendecomposition. Features are kept full length; truncation to the
// leading d directions happens at reconstruction, so one model serves every d.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "talgebra/fourier_store.hpp"
#include "talgebra/linalg.hpp"
#include "talgebra/parallel.hpp"
#include "talgebra/tcore.hpp"
#include "talgebra/tmat.hpp"

namespace talgebra {

// ---------------------------------------------------------------------------
// Canonical PCA

template <class Real = double>
struct PcaModel {
  RVector<Real> mean;
  RMatrix<Real> basis;  ///< columns are principal directions, eigenvalues descending
  RVector<Real> eigenvalues;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

template <class Real>
PcaModel<Real> pca_fit(std::span<const RVector<Real>> train) {
  if (train.size() < 2) throw std::invalid_argument("pca_fit: need at least two training vectors");
  const Eigen::Index dim = train.front().size();
  const auto k = static_cast<Eigen::Index>(train.size());
  RMatrix<Real> samples(dim, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (train[std::size_t(j)].size() != dim) {
      throw std::invalid_argument("pca_fit: training vectors have different lengths");
    }
    samples.col(j) = train[std::size_t(j)];
  }
  PcaModel<Real> model;
  model.mean = samples.rowwise().mean();
  samples.colwise() -= model.mean;
  const RMatrix<Real> cov = (samples * samples.transpose()) / Real(k - 1);
  auto eig = detail::sorted_hermitian_eigen<Real>(cov);
  model.basis = std::move(eig.vectors);
  model.eigenvalues = std::move(eig.values);
  return model;
}

/// U^T (y - mean), full length.
template <class Real>
RVector<Real> pca_transform(const PcaModel<Real>& model, const RVector<Real>& y) {
  if (y.size() != model.mean.size()) throw std::invalid_argument("pca_transform: length mismatch");
  return model.basis.transpose() * (y - model.mean);
}

/// U[:, 1:d] f[1:d] + mean.
template <class Real>
RVector<Real> pca_reconstruct(const PcaModel<Real>& model, const RVector<Real>& feature,
                              std::size_t d) {
  const auto dim = model.dim();
  if (d < 1 || d > dim) {
    throw std::invalid_argument("pca_reconstruct: d must lie in [1, " + std::to_string(dim) + "]");
  }
  if (feature.size() != model.mean.size()) {
    throw std::invalid_argument("pca_reconstruct: feature length mismatch");
  }
  const auto n = Eigen::Index(d);
  return model.basis.leftCols(n) * feature.head(n) + model.mean;
}

// ---------------------------------------------------------------------------
// TPCA

/// Model for one Fourier slice.
template <class Real = double>
struct TpcaSlice {
  CVector<Real> mean;
  CMatrix<Real> basis;  ///< unitary, columns ordered by descending eigenvalue
  RVector<Real> eigenvalues;
};

/// Where the model for a multi-index lives: a stored slice, optionally
/// complex-conjugated (mirror frequencies of real training data).
struct SliceRef {
  std::size_t stored = 0;
  bool conjugate = false;
  bool operator==(const SliceRef&) const = default;
};

struct TpcaOptions {
  int parallelism = 1;
  StoreMode store = StoreMode::memory;
  std::filesystem::path cache_dir;
  /// Upper bound on the training samples loaded per slice batch.
  std::size_t memory_budget = std::size_t{1} << 30;
  /// For real training data, fit only one slice of each conjugate pair.
  bool exploit_symmetry = true;
};

template <class Real = double>
class TpcaModel {
 public:
  /// One slice model per multi-index, in canonical order.
  TpcaModel(TShape shape, std::size_t dim, std::size_t train_count,
            std::vector<TpcaSlice<Real>> slices)
      : shape_(std::move(shape)), dim_(dim), train_count_(train_count),
        stored_(std::move(slices)) {
    refs_.resize(stored_.size());
    for (std::size_t k = 0; k < refs_.size(); ++k) refs_[k] = {k, false};
    validate();
  }

  /// Compact form: `refs[k]` says which stored slice serves multi-index k.
  TpcaModel(TShape shape, std::size_t dim, std::size_t train_count,
            std::vector<TpcaSlice<Real>> stored, std::vector<SliceRef> refs)
      : shape_(std::move(shape)), dim_(dim), train_count_(train_count),
        stored_(std::move(stored)), refs_(std::move(refs)) {
    validate();
  }

  const TShape& shape() const noexcept { return shape_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t train_count() const noexcept { return train_count_; }
  std::size_t slice_count() const noexcept { return refs_.size(); }
  const std::vector<TpcaSlice<Real>>& stored() const noexcept { return stored_; }
  const std::vector<SliceRef>& refs() const noexcept { return refs_; }

  /// Materialized model of slice k.
  TpcaSlice<Real> slice(std::size_t k) const {
    const SliceRef r = refs_.at(k);
    TpcaSlice<Real> s = stored_[r.stored];
    if (r.conjugate) {
      s.mean = s.mean.conjugate();
      s.basis = s.basis.conjugate();
    }
    return s;
  }

  /// U_k^H (v - mean_k).
  template <class Vec>
  CVector<Real> project(std::size_t k, const Vec& v) const {
    const SliceRef r = refs_[k];
    const auto& s = stored_[r.stored];
    if (r.conjugate) return s.basis.transpose() * (v.col(0) - s.mean.conjugate());
    return s.basis.adjoint() * (v.col(0) - s.mean);
  }

  /// U_k[:, 1:d] f[1:d] + mean_k.
  template <class Vec>
  CVector<Real> expand(std::size_t k, const Vec& f, std::size_t d) const {
    const SliceRef r = refs_[k];
    const auto& s = stored_[r.stored];
    const auto n = Eigen::Index(d);
    if (r.conjugate) {
      return s.basis.leftCols(n).conjugate() * f.col(0).head(n) + s.mean.conjugate();
    }
    return s.basis.leftCols(n) * f.col(0).head(n) + s.mean;
  }

 private:
  void validate() const {
    if (train_count_ < 2) throw std::invalid_argument("TpcaModel: training count must be >= 2");
    if (refs_.size() != shape_.slice_count()) {
      throw std::invalid_argument("TpcaModel: expected " + std::to_string(shape_.slice_count()) +
                                  " slice references, got " + std::to_string(refs_.size()));
    }
    for (const auto& r : refs_) {
      if (r.stored >= stored_.size()) throw std::invalid_argument("TpcaModel: dangling slice ref");
    }
    const auto n = Eigen::Index(dim_);
    for (const auto& s : stored_) {
      if (s.mean.size() != n || s.basis.rows() != n || s.basis.cols() != n ||
          s.eigenvalues.size() != n) {
        throw std::invalid_argument("TpcaModel: slice dimensions do not match D = " +
                                    std::to_string(dim_));
      }
    }
  }

  TShape shape_;
  std::size_t dim_;
  std::size_t train_count_;
  std::vector<TpcaSlice<Real>> stored_;
  std::vector<SliceRef> refs_;
};

/// Produces training item k on demand; lets callers avoid materializing
/// every t-vector at once.
template <class Real>
using TVectorSource = std::function<TVector<Real>(std::size_t)>;

namespace detail {

/// Mean, covariance and eigendecomposition of one slice; samples are D x K.
template <class Real>
TpcaSlice<Real> fit_slice(const CMatrix<Real>& samples) {
  const auto k = samples.cols();
  TpcaSlice<Real> s;
  s.mean = samples.rowwise().mean();
  const CMatrix<Real> centered = samples.colwise() - s.mean;
  CMatrix<Real> cov = centered * centered.adjoint();
  cov /= Real(k - 1);
  auto eig = sorted_hermitian_eigen<std::complex<Real>>(cov);
  s.basis = std::move(eig.vectors);
  s.eigenvalues = std::move(eig.values);
  return s;
}

template <class Real>
bool is_real(const TMatrix<Real>& m) {
  for (const auto& v : m.data()) {
    if (v.imag() != Real(0)) return false;
  }
  return true;
}

/// Slices to fit and how every multi-index maps onto them. With `symmetric`
/// set, only the lower linear index of each mirror pair is kept.
inline std::pair<std::vector<std::size_t>, std::vector<SliceRef>> slice_plan(const TShape& shape,
                                                                             bool symmetric) {
  const std::size_t n = shape.slice_count();
  std::vector<std::size_t> ids;
  std::vector<SliceRef> refs(n);
  std::vector<std::size_t> position(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t m = shape.mirror(k);
    if (!symmetric || k <= m) {
      position[k] = ids.size();
      refs[k] = {ids.size(), false};
      ids.push_back(k);
    } else {
      refs[k] = {position[m], true};
    }
  }
  return {std::move(ids), std::move(refs)};
}

/// Number of slices per load so that one batch of D x K samples fits the budget.
template <class Real>
std::size_t slice_batch(std::size_t dim, std::size_t items, std::size_t budget) {
  const std::size_t per_slice = std::max<std::size_t>(1, dim * items * sizeof(Complex<Real>));
  return std::max<std::size_t>(1, budget / per_slice);
}

template <class Real>
void check_tvector(const TVector<Real>& v, const TShape& shape, std::size_t dim,
                   const char* what) {
  if (!v.is_vector()) throw std::invalid_argument(std::string(what) + ": expected a t-vector");
  require_same_shape(v.shape(), shape, what);
  if (v.rows() != dim) {
    throw std::invalid_argument(std::string(what) + ": t-vector length " +
                                std::to_string(v.rows()) + " != D = " + std::to_string(dim));
  }
}

}  // namespace detail

/// Fits a TPCA model from `count` training t-vectors produced by `train`.
/// The source is called twice per item (validation pass, then transform).
template <class Real>
TpcaModel<Real> tpca_fit(std::size_t count, const TVectorSource<Real>& train,
                         const TpcaOptions& options = {}) {
  if (count < 2) throw std::invalid_argument("tpca_fit: need at least two training t-vectors");
  bool real = true;
  TShape shape;
  std::size_t dim = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const TVector<Real> v = train(k);
    if (k == 0) {
      shape = v.shape();
      dim = v.rows();
    }
    detail::check_tvector(v, shape, dim, "tpca_fit");
    real = real && detail::is_real(v);
  }
  auto [ids, refs] = detail::slice_plan(shape, real && options.exploit_symmetry);
  FourierSliceStore<Real> store(dim, ids, options.store, options.cache_dir);
  for (std::size_t k = 0; k < count; ++k) store.append(to_fourier_stack(train(k)));

  std::vector<TpcaSlice<Real>> stored(ids.size());
  const std::size_t batch = detail::slice_batch<Real>(dim, count, options.memory_budget);
  for (std::size_t first = 0; first < ids.size(); first += batch) {
    const std::size_t last = std::min(ids.size(), first + batch);
    const auto samples = store.load(first, last);
    parallel_for(last - first, options.parallelism,
                 [&](std::size_t p) { stored[first + p] = detail::fit_slice(samples[p]); });
  }
  return TpcaModel<Real>(shape, dim, count, std::move(stored), std::move(refs));
}

template <class Real>
TpcaModel<Real> tpca_fit(std::span<const TVector<Real>> train, const TpcaOptions& options = {}) {
  return tpca_fit<Real>(
      train.size(), [&](std::size_t k) { return train[k]; }, options);
}

/// The mean t-vector of the training set.
template <class Real>
TVector<Real> tpca_mean(const TpcaModel<Real>& model) {
  FourierStack<Real> fs(model.shape(), model.dim(), 1);
  for (std::size_t k = 0; k < model.slice_count(); ++k) fs.slice(k) = model.slice(k).mean;
  return from_fourier_stack(fs);
}

/// Full-length feature t-vector U* o (y - mean).
template <class Real>
TVector<Real> tpca_transform(const TpcaModel<Real>& model, const TVector<Real>& y,
                             int parallelism = 1) {
  detail::check_tvector(y, model.shape(), model.dim(), "tpca_transform");
  const FourierStack<Real> fy = to_fourier_stack(y);
  FourierStack<Real> ff(model.shape(), model.dim(), 1);
  parallel_for(model.slice_count(), parallelism,
               [&](std::size_t k) { ff.slice(k) = model.project(k, fy.slice(k)); });
  return from_fourier_stack(ff);
}

/// U[:, 1:d] o f[1:d] + mean, without discarding any imaginary part.
template <class Real>
TVector<Real> tpca_reconstruct_raw(const TpcaModel<Real>& model, const TVector<Real>& feature,
                                   std::size_t d, int parallelism = 1) {
  if (d < 1 || d > model.dim()) {
    throw std::invalid_argument("tpca_reconstruct: d must lie in [1, " +
                                std::to_string(model.dim()) + "]");
  }
  detail::check_tvector(feature, model.shape(), model.dim(), "tpca_reconstruct");
  const FourierStack<Real> ff = to_fourier_stack(feature);
  FourierStack<Real> fr(model.shape(), model.dim(), 1);
  parallel_for(model.slice_count(), parallelism,
               [&](std::size_t k) { fr.slice(k) = model.expand(k, ff.slice(k), d); });
  return from_fourier_stack(fr);
}

/// Largest |imag| entry relative to the Frobenius norm; 0 for a zero t-matrix.
template <class Real>
double imaginary_ratio(const TMatrix<Real>& m) {
  double max_imag = 0;
  double sq = 0;
  for (const auto& v : m.data()) {
    max_imag = std::max(max_imag, std::abs(double(v.imag())));
    sq += std::norm(std::complex<double>(v));
  }
  return sq > 0 ? max_imag / std::sqrt(sq) : 0.0;
}

/// Reconstruction that drops the imaginary part when it is numerical noise
/// (at most 1e-6 of the Frobenius norm), as happens for real inputs.
template <class Real>
TVector<Real> tpca_reconstruct(const TpcaModel<Real>& model, const TVector<Real>& feature,
                               std::size_t d, int parallelism = 1) {
  TVector<Real> out = tpca_reconstruct_raw(model, feature, d, parallelism);
  if (imaginary_ratio(out) <= 1e-6) {
    for (auto& v : out.data()) v = Complex<Real>(v.real(), Real(0));
  }
  return out;
}

}  // namespace talgebra

#endif  // TALGEBRA_TPCA_HPP
