#ifndef TALGEBRA_TESTS_ORACLES_HPP
#define TALGEBRA_TESTS_ORACLES_HPP

// Slow, definition-level reference implementations used only by the tests.
// None of them calls into the FFT or the Eigen-based solver of the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "talgebra/compound.hpp"
#include "talgebra/tcore.hpp"
#include "talgebra/tmat.hpp"

namespace oracle {

using talgebra::CMatrix;
using talgebra::Image;
using talgebra::MultiIndex;
using talgebra::TMatrix;
using talgebra::TScalar;
using talgebra::TShape;
using cd = std::complex<double>;
using cld = std::complex<long double>;

// ---- random inputs --------------------------------------------------------

inline TScalar<double> random_tscalar(const TShape& shape, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  TScalar<double> a(shape);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = {n(rng), n(rng)};
  return a;
}

inline TMatrix<double> random_tmatrix(const TShape& shape, std::size_t rows, std::size_t cols,
                                      std::mt19937_64& rng, bool real = false) {
  std::normal_distribution<double> n(0.0, 1.0);
  TMatrix<double> m(shape, rows, cols);
  for (auto& v : m.data()) v = {n(rng), real ? 0.0 : n(rng)};
  return m;
}

inline CMatrix<double> random_cmatrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix<double> m{Eigen::Index(rows), Eigen::Index(cols)};
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = {n(rng), n(rng)};
  return m;
}

inline Image random_image(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> px(0, 255);
  std::vector<double> p(rows * cols);
  for (auto& v : p) v = px(rng);
  return Image(rows, cols, std::move(p));
}

// ---- error measures -------------------------------------------------------

template <class Range>
double rel_diff(const Range& a, const Range& b) {
  long double num = 0, den = 0;
  auto ib = std::begin(b);
  for (auto ia = std::begin(a); ia != std::end(a); ++ia, ++ib) {
    num += std::norm(cld(*ia) - cld(*ib));
    den += std::norm(cld(*ib));
  }
  return double(std::sqrt(num) / std::max(std::sqrt(den), 1e-300L));
}

inline double rel_diff(const TScalar<double>& a, const TScalar<double>& b) {
  return rel_diff(a.data(), b.data());
}

template <class Real>
double rel_diff(const TMatrix<Real>& a, const TMatrix<Real>& b) {
  return rel_diff(a.data(), b.data());
}

inline double rel_diff_mat(const CMatrix<double>& a, const CMatrix<double>& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

// ---- t-scalars by definition ----------------------------------------------

/// N-way circular convolution straight from the double sum.
inline TScalar<double> convolve(const TScalar<double>& a, const TScalar<double>& b) {
  const TShape& s = a.shape();
  TScalar<double> out(s);
  const std::size_t n = s.slice_count();
  for (std::size_t i = 0; i < n; ++i) {
    const MultiIndex ii = s.multi_index(i);
    cld acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const MultiIndex jj = s.multi_index(j);
      std::vector<std::size_t> diff(s.order());
      for (std::size_t ax = 0; ax < s.order(); ++ax) {
        const std::size_t m = s.dim(ax);
        diff[ax] = (ii[ax] + m - jj[ax]) % m + 1;
      }
      acc += cld(a[j]) * cld(b(MultiIndex(diff)));
    }
    out[i] = cd(acc);
  }
  return out;
}

/// Direct multi-way DFT sum, O(M^2); unnormalized forward, 1/M inverse.
inline TScalar<double> dft(const TScalar<double>& a, bool inverse = false) {
  const TShape& s = a.shape();
  const std::size_t n = s.slice_count();
  TScalar<double> out(s);
  const long double sign = inverse ? 1.0L : -1.0L;
  for (std::size_t f = 0; f < n; ++f) {
    const MultiIndex ff = s.multi_index(f);
    cld acc = 0;
    for (std::size_t x = 0; x < n; ++x) {
      const MultiIndex xx = s.multi_index(x);
      long double phase = 0;
      for (std::size_t ax = 0; ax < s.order(); ++ax) {
        phase += (long double)((ff[ax] - 1) * (xx[ax] - 1)) / (long double)s.dim(ax);
      }
      const long double ang = sign * 2.0L * std::numbers::pi_v<long double> * phase;
      acc += cld(a[x]) * cld(std::cos(ang), std::sin(ang));
    }
    if (inverse) acc /= (long double)n;
    out[f] = cd(acc);
  }
  return out;
}

/// t-matrix product from entry-wise convolutions.
inline TMatrix<double> tmat_product(const TMatrix<double>& a, const TMatrix<double>& b) {
  TMatrix<double> out(a.shape(), a.rows(), b.cols());
  for (std::size_t r = 1; r <= a.rows(); ++r) {
    for (std::size_t c = 1; c <= b.cols(); ++c) {
      TScalar<double> acc = talgebra::tscalar_zero(a.shape());
      for (std::size_t k = 1; k <= a.cols(); ++k) {
        acc = acc + convolve(a.entry(r, k), b.entry(k, c));
      }
      out.set_entry(r, c, acc);
    }
  }
  return out;
}

/// Fourier slice k of a t-matrix computed with the direct DFT.
inline CMatrix<double> fourier_slice(const TMatrix<double>& m, std::size_t k) {
  CMatrix<double> out(Eigen::Index(m.rows()), Eigen::Index(m.cols()));
  for (std::size_t r = 1; r <= m.rows(); ++r) {
    for (std::size_t c = 1; c <= m.cols(); ++c) {
      out(Eigen::Index(r - 1), Eigen::Index(c - 1)) = dft(m.entry(r, c))[k];
    }
  }
  return out;
}

/// Conjugate of a t-scalar characterized in the Fourier domain:
/// the b with dft(b) = conj(dft(a)).
inline TScalar<double> conj_by_fourier(const TScalar<double>& a) {
  TScalar<double> f = dft(a);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::conj(f[i]);
  return dft(f, true);
}

inline TMatrix<double> conj_transpose(const TMatrix<double>& a) {
  TMatrix<double> out(a.shape(), a.cols(), a.rows());
  for (std::size_t r = 1; r <= a.rows(); ++r) {
    for (std::size_t c = 1; c <= a.cols(); ++c) out.set_entry(c, r, conj_by_fourier(a.entry(r, c)));
  }
  return out;
}

/// Covariance t-matrix sum_k (x_k - m) o (x_k - m)* / (K - 1) with spatial-
/// domain t-scalar arithmetic.
inline TMatrix<double> covariance(const std::vector<TMatrix<double>>& xs) {
  const TShape& s = xs.front().shape();
  const std::size_t d = xs.front().rows();
  const std::size_t k = xs.size();
  TMatrix<double> mean(s, d, 1);
  for (const auto& x : xs) {
    for (std::size_t i = 0; i < mean.data().size(); ++i) mean.data()[i] += x.data()[i];
  }
  for (auto& v : mean.data()) v /= double(k);
  TMatrix<double> g(s, d, d);
  for (const auto& x : xs) {
    TMatrix<double> c(s, d, 1);
    for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] = x.data()[i] - mean.data()[i];
    const TMatrix<double> outer = tmat_product(c, conj_transpose(c));
    for (std::size_t i = 0; i < g.data().size(); ++i) g.data()[i] += outer.data()[i];
  }
  for (auto& v : g.data()) v /= double(k - 1);
  return g;
}

// ---- Hermitian eigensolver (cyclic complex Jacobi) ------------------------

struct Eig {
  std::vector<double> values;  // descending
  CMatrix<double> vectors;     // columns match values
};

inline Eig jacobi(CMatrix<double> a) {
  const Eigen::Index n = a.rows();
  CMatrix<double> v = CMatrix<double>::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    }
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag < 1e-300) continue;
        // Rotate in the (p, q) plane to zero a(p, q).
        const cd phase = a(p, q) / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * mag, aqq - app);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        // Columns: p' = c p - s conj(phase) q ; q' = s phase p + c q
        for (Eigen::Index i = 0; i < n; ++i) {
          const cd aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * std::conj(phase) * aiq;
          a(i, q) = s * phase * aip + c * aiq;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const cd api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * phase * aqi;
          a(q, i) = s * std::conj(phase) * api + c * aqi;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const cd vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * std::conj(phase) * viq;
          v(i, q) = s * phase * vip + c * viq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[std::size_t(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() > a(y, y).real();
  });
  Eig out;
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values.push_back(a(order[std::size_t(j)], order[std::size_t(j)]).real());
    out.vectors.col(j) = v.col(order[std::size_t(j)]);
  }
  return out;
}

// ---- compound images by literal materialization ---------------------------

/// The level-`depth` nested neighborhood of source coordinate (r, c),
/// 0-based, built by recursively replacing every neighbor with its own
/// 3x3 neighborhood. Entries are listed with the outermost level's (i, j)
/// as the slowest axes.
inline std::vector<double> nested_neighborhood(const Image& img, long r, long c, std::size_t depth) {
  if (depth == 0) return {img.padded(r, c)};
  std::vector<double> out;
  // Gather level-by-level: entry at (i1, j1, ..., ik, jk) equals the innermost
  // neighborhood of the outer neighbor (r + i1 - 2, c + j1 - 2).
  for (long i = 1; i <= 3; ++i) {
    for (long j = 1; j <= 3; ++j) {
      const auto inner = nested_neighborhood(img, r + i - 2, c + j - 2, depth - 1);
      out.insert(out.end(), inner.begin(), inner.end());
    }
  }
  return out;
}

/// w x w window of (r, c), 0-based, zero padded.
inline std::vector<double> window(const Image& img, long r, long c, std::size_t w) {
  std::vector<double> out;
  const long h = long(w / 2);
  for (long i = -h; i <= h; ++i) {
    for (long j = -h; j <= h; ++j) {
      const long rr = r + i, cc = c + j;
      const bool inside =
          rr >= 0 && cc >= 0 && rr < long(img.rows()) && cc < long(img.cols());
      out.push_back(inside ? img(std::size_t(rr) + 1, std::size_t(cc) + 1) : 0.0);
    }
  }
  return out;
}

}  // namespace oracle

#endif  // TALGEBRA_TESTS_ORACLES_HPP
