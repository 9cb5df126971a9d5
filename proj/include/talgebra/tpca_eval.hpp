#ifndef TALGEBRA_TPCA_EVAL_HPP
#define TALGEBRA_TPCA_EVAL_HPP

// Batch evaluation of TPCA reconstructions restricted to one spatial slice.
//
// The inverse DFT at a fixed spatial multi-index is a weighted sum over
// Fourier slices, so reconstructions for many queries and many d can be
// accumulated slice by slice without ever holding the full model or the
// full reconstructed t-vectors. Results match
//   spatial_slice(tpca_reconstruct(model, tpca_transform(model, y), d), idx)
// up to rounding.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "talgebra/fourier_store.hpp"
#include "talgebra/linalg.hpp"
#include "talgebra/parallel.hpp"
#include "talgebra/tpca.hpp"

namespace talgebra {

struct SpatialReconstructions {
  std::vector<std::size_t> dims;
  /// Spatial slice of every query, D x Q.
  CMatrix<double> original;
  /// One D x Q matrix per entry of `dims`.
  std::vector<CMatrix<double>> recon;
};

namespace detail {

/// Coefficient of Fourier slice `k` in the inverse DFT evaluated at `idx`.
inline std::complex<double> idft_weight(const TShape& shape, std::size_t k,
                                        const MultiIndex& idx) {
  const MultiIndex freq = shape.multi_index(k);
  long double phase = 0;
  for (std::size_t a = 0; a < shape.order(); ++a) {
    const auto n = static_cast<long double>(shape.dim(a));
    phase += static_cast<long double>((idx[a] - 1) * (freq[a] - 1) % shape.dim(a)) / n;
  }
  const long double angle = 2.0L * std::numbers::pi_v<long double> * phase;
  const long double inv = 1.0L / static_cast<long double>(shape.slice_count());
  return {static_cast<double>(inv * std::cos(angle)), static_cast<double>(inv * std::sin(angle))};
}

}  // namespace detail

/// Fits TPCA on `train_count` items of `train` and reconstructs every query
/// at each d in `dims`, returning only the spatial slice at `idx`.
///
/// At d = D the projector U U^H is the identity, so the query's own slice is
/// returned exactly.
template <class Real>
SpatialReconstructions tpca_spatial_reconstructions(
    std::size_t train_count, const TVectorSource<Real>& train, std::size_t query_count,
    const TVectorSource<Real>& queries, const MultiIndex& idx, std::span<const std::size_t> dims,
    const TpcaOptions& options = {}) {
  if (train_count < 2) {
    throw std::invalid_argument("tpca_spatial_reconstructions: need at least two training items");
  }
  if (query_count < 1) throw std::invalid_argument("tpca_spatial_reconstructions: no queries");

  // Validation pass over training data; decides whether mirror slices can be shared.
  bool real = true;
  TShape shape;
  std::size_t dim = 0;
  for (std::size_t k = 0; k < train_count; ++k) {
    const TVector<Real> v = train(k);
    if (k == 0) {
      shape = v.shape();
      dim = v.rows();
    }
    detail::check_tvector(v, shape, dim, "tpca_spatial_reconstructions");
    real = real && detail::is_real(v);
  }
  if (!shape.contains(idx)) {
    throw std::invalid_argument("spatial index out of bounds for shape " + shape.to_string());
  }
  for (std::size_t d : dims) {
    if (d < 1 || d > dim) {
      throw std::invalid_argument("feature dimension " + std::to_string(d) +
                                  " outside [1, " + std::to_string(dim) + "]");
    }
  }

  const auto n = Eigen::Index(dim);
  const auto q = Eigen::Index(query_count);
  const std::size_t lin_idx = shape.linear(idx);

  SpatialReconstructions out;
  out.dims.assign(dims.begin(), dims.end());
  out.original = CMatrix<double>::Zero(n, q);

  // Queries decide the symmetry too: mirrored query slices must be conjugates.
  for (std::size_t j = 0; j < query_count; ++j) {
    const TVector<Real> item = queries(j);
    detail::check_tvector(item, shape, dim, "tpca_spatial_reconstructions");
    real = real && detail::is_real(item);
    for (Eigen::Index d = 0; d < n; ++d) {
      out.original(d, Eigen::Index(j)) = item.raw(lin_idx, std::size_t(d), 0);
    }
  }

  const bool symmetric = real && options.exploit_symmetry;
  const auto plan = detail::slice_plan(shape, symmetric);
  const auto& ids = plan.first;

  FourierSliceStore<Real> train_store(dim, ids, options.store, options.cache_dir);
  for (std::size_t k = 0; k < train_count; ++k) train_store.append(to_fourier_stack(train(k)));
  FourierSliceStore<Real> query_store(dim, ids, StoreMode::memory);
  for (std::size_t j = 0; j < query_count; ++j) query_store.append(to_fourier_stack(queries(j)));

  // Ascending unique feature dimensions, reconstructed incrementally.
  std::vector<std::size_t> steps(dims.begin(), dims.end());
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());

  std::vector<CMatrix<double>> acc(steps.size(), CMatrix<double>::Zero(n, q));

  const std::size_t batch =
      detail::slice_batch<Real>(dim, train_count + query_count, options.memory_budget);
  const std::size_t group = static_cast<std::size_t>(std::max(options.parallelism, 1));
  for (std::size_t first = 0; first < ids.size(); first += batch) {
    const std::size_t last = std::min(ids.size(), first + batch);
    const auto samples = train_store.load(first, last);
    const auto targets = query_store.load(first, last);
    // Contributions are summed in slice order so results do not depend on
    // the degree of parallelism.
    for (std::size_t g0 = first; g0 < last; g0 += group) {
      const std::size_t g1 = std::min(last, g0 + group);
      std::vector<std::vector<CMatrix<double>>> part(g1 - g0);
      parallel_for(g1 - g0, options.parallelism, [&](std::size_t i) {
        const std::size_t p = g0 + i - first;
        const std::size_t k = ids[g0 + i];
        const TpcaSlice<Real> s = detail::fit_slice(samples[p]);
        const CMatrix<Real> centered = targets[p].colwise() - s.mean;
        const CMatrix<Real> feature = s.basis.adjoint() * centered;
        CMatrix<Real> rec = s.mean.replicate(1, q);
        const std::complex<double> w = detail::idft_weight(shape, k, idx);
        const bool paired = symmetric && shape.mirror(k) != k;
        auto& mine = part[i];
        mine.reserve(steps.size());
        Eigen::Index done = 0;
        for (std::size_t d : steps) {
          const auto upto = Eigen::Index(d);
          rec.noalias() += s.basis.middleCols(done, upto - done) *
                           feature.middleRows(done, upto - done);
          done = upto;
          CMatrix<double> c = rec.template cast<std::complex<double>>() * w;
          if (paired) c = (2.0 * c.real()).template cast<std::complex<double>>();
          mine.push_back(std::move(c));
        }
      });
      for (auto& contribution : part) {
        for (std::size_t s = 0; s < steps.size(); ++s) acc[s] += contribution[s];
      }
    }
  }

  out.recon.reserve(out.dims.size());
  for (std::size_t d : out.dims) {
    if (d == dim) {
      out.recon.push_back(out.original);
      continue;
    }
    const auto pos = std::size_t(std::lower_bound(steps.begin(), steps.end(), d) - steps.begin());
    out.recon.push_back(acc[pos]);
  }
  return out;
}

}  // namespace talgebra

#endif  // TALGEBRA_TPCA_EVAL_HPP
