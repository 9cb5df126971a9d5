#ifndef TALGEBRA_TCORE_HPP
#define TALGEBRA_TCORE_HPP

// T-scalars: fixed-shape order-N complex arrays forming a commutative ring
// under entry-wise addition and N-way circular convolution. The multi-way
// DFT diagonalizes the ring: F(a o b) = F(a) .* F(b).
//
// Index conventions: every multi-index in the public API is 1-based. Storage
// is row-major with the last index fastest.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace talgebra {

template <class Real>
using Complex = std::complex<Real>;

/// 1-based multi-index (i1, ..., iN).
struct MultiIndex {
  std::vector<std::size_t> indices;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<std::size_t> il) : indices(il) {}
  explicit MultiIndex(std::vector<std::size_t> v) : indices(std::move(v)) {}

  std::size_t size() const noexcept { return indices.size(); }
  std::size_t operator[](std::size_t axis) const { return indices[axis]; }
  bool operator==(const MultiIndex&) const = default;
};

/// The shape I1 x ... x IN shared by every t-scalar of a computation.
/// N = 0 is the canonical-scalar case.
class TShape {
 public:
  TShape() = default;
  TShape(std::initializer_list<std::size_t> dims) : TShape(std::vector<std::size_t>(dims)) {}
  explicit TShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    for (std::size_t d : dims_) {
      if (d < 1) throw std::invalid_argument("TShape: every extent must be >= 1");
    }
  }

  /// `extent` repeated `times` times, e.g. repeated(3, 4) = 3x3x3x3.
  static TShape repeated(std::size_t extent, std::size_t times) {
    return TShape(std::vector<std::size_t>(times, extent));
  }

  std::size_t order() const noexcept { return dims_.size(); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }

  /// K_slice = I1 * ... * IN.
  std::size_t slice_count() const noexcept {
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
  }

  bool contains(const MultiIndex& idx) const noexcept {
    if (idx.size() != dims_.size()) return false;
    for (std::size_t a = 0; a < dims_.size(); ++a) {
      if (idx[a] < 1 || idx[a] > dims_[a]) return false;
    }
    return true;
  }

  std::size_t linear(const MultiIndex& idx) const {
    if (!contains(idx)) {
      throw std::invalid_argument("multi-index out of bounds for shape " + to_string());
    }
    std::size_t lin = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a) lin = lin * dims_[a] + (idx[a] - 1);
    return lin;
  }

  MultiIndex multi_index(std::size_t lin) const {
    std::vector<std::size_t> out(dims_.size());
    for (std::size_t a = dims_.size(); a-- > 0;) {
      out[a] = lin % dims_[a] + 1;
      lin /= dims_[a];
    }
    return MultiIndex(std::move(out));
  }

  /// Linear index of the axis-wise negated frequency (-k mod I per axis).
  std::size_t mirror(std::size_t lin) const {
    std::size_t out = 0;
    std::size_t scale = 1;
    for (std::size_t a = dims_.size(); a-- > 0;) {
      const std::size_t k = lin % dims_[a];
      lin /= dims_[a];
      out += ((dims_[a] - k) % dims_[a]) * scale;
      scale *= dims_[a];
    }
    return out;
  }

  bool all_odd() const noexcept {
    return std::all_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d % 2 == 1; });
  }

  /// ((I1+1)/2, ..., (IN+1)/2); requires every extent odd.
  MultiIndex center() const {
    if (!all_odd()) {
      throw std::invalid_argument("central index requires odd extents, got " + to_string());
    }
    std::vector<std::size_t> c(dims_.size());
    for (std::size_t a = 0; a < dims_.size(); ++a) c[a] = (dims_[a] + 1) / 2;
    return MultiIndex(std::move(c));
  }

  std::string to_string() const {
    if (dims_.empty()) return "()";
    std::string s;
    for (std::size_t a = 0; a < dims_.size(); ++a) {
      if (a) s += 'x';
      s += std::to_string(dims_[a]);
    }
    return s;
  }

  bool operator==(const TShape&) const = default;

 private:
  std::vector<std::size_t> dims_;
};

namespace detail {

inline void require_same_shape(const TShape& a, const TShape& b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch " + a.to_string() +
                                " vs " + b.to_string());
  }
}

inline std::vector<std::size_t> prime_factors(std::size_t n) {
  std::vector<std::size_t> f;
  for (std::size_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      f.push_back(p);
      n /= p;
    }
  }
  if (n > 1) f.push_back(n);
  return f;
}

/// Mixed-radix decimation-in-time DFT of one fixed length.
/// Cost is O(n * sum of prime factors); prime lengths fall back to a direct sum.
template <class Real>
class AxisDft {
 public:
  using C = Complex<Real>;

  AxisDft(std::size_t n, bool inverse) : n_(n), factors_(prime_factors(n)), twiddle_(n) {
    const long double sign = inverse ? 1.0L : -1.0L;
    for (std::size_t e = 0; e < n; ++e) {
      const long double angle = sign * 2.0L * std::numbers::pi_v<long double> *
                                static_cast<long double>(e) / static_cast<long double>(n);
      twiddle_[e] = C(static_cast<Real>(std::cos(angle)), static_cast<Real>(std::sin(angle)));
    }
  }

  std::size_t size() const noexcept { return n_; }

  /// In-place transform of `line` (length n); `scratch` must also hold n values.
  void apply(C* line, C* scratch) const {
    if (n_ == 1) return;
    recurse(line, 1, scratch, n_, 0, 1);
    std::copy(scratch, scratch + n_, line);
  }

 private:
  void recurse(const C* in, std::size_t stride, C* out, std::size_t n, std::size_t fpos,
               std::size_t tw_step) const {
    if (n == 1) {
      out[0] = in[0];
      return;
    }
    const std::size_t p = factors_[fpos];
    const std::size_t m = n / p;
    for (std::size_t q = 0; q < p; ++q) {
      recurse(in + q * stride, stride * p, out + q * m, m, fpos + 1, tw_step * p);
    }
    // Butterfly: outputs k + m*r gather sub-transform q at k, for r, q < p.
    C local[16];
    std::vector<C> heap;
    C* t = local;
    if (p > 8) {
      heap.resize(2 * p);
      t = heap.data();
    }
    C* y = t + p;
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t q = 0; q < p; ++q) t[q] = out[q * m + k] * twiddle_[(q * k * tw_step) % n_];
      for (std::size_t r = 0; r < p; ++r) {
        C acc = t[0];
        for (std::size_t q = 1; q < p; ++q) acc += t[q] * twiddle_[(q * r * m * tw_step) % n_];
        y[r] = acc;
      }
      for (std::size_t r = 0; r < p; ++r) out[k + m * r] = y[r];
    }
  }

  std::size_t n_;
  std::vector<std::size_t> factors_;
  std::vector<C> twiddle_;
};

/// Multi-way DFT over the leading axes of an array laid out as
/// (I1, ..., IN, inner), last index fastest. Inverse scales by 1/(I1...IN).
template <class Real>
void transform_axes(std::span<Complex<Real>> data, const TShape& shape, std::size_t inner,
                    bool inverse) {
  using C = Complex<Real>;
  const auto& dims = shape.dims();
  std::size_t stride = inner;
  for (std::size_t a = dims.size(); a-- > 0;) {
    const std::size_t n = dims[a];
    if (n > 1) {
      const AxisDft<Real> plan(n, inverse);
      const std::size_t block = n * stride;
      const std::size_t outer = data.size() / block;
      std::vector<C> line(n), scratch(n);
      for (std::size_t o = 0; o < outer; ++o) {
        C* base = data.data() + o * block;
        for (std::size_t j = 0; j < stride; ++j) {
          for (std::size_t t = 0; t < n; ++t) line[t] = base[j + t * stride];
          plan.apply(line.data(), scratch.data());
          for (std::size_t t = 0; t < n; ++t) base[j + t * stride] = line[t];
        }
      }
    }
    stride *= n;
  }
  if (inverse) {
    const Real scale = Real(1) / static_cast<Real>(shape.slice_count());
    if (scale != Real(1)) {
      for (auto& v : data) v *= scale;
    }
  }
}

}  // namespace detail

/// An order-N complex array used as a generalized scalar.
template <class Real = double>
class TScalar {
 public:
  using value_type = Complex<Real>;

  TScalar() : data_(1) {}
  explicit TScalar(TShape shape) : shape_(std::move(shape)), data_(shape_.slice_count()) {}
  TScalar(TShape shape, std::vector<value_type> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_.slice_count()) {
      throw std::invalid_argument("TScalar: data length does not match shape " +
                                  shape_.to_string());
    }
  }

  const TShape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::span<const value_type> data() const noexcept { return data_; }
  std::span<value_type> data() noexcept { return data_; }

  value_type& operator[](std::size_t lin) { return data_[lin]; }
  const value_type& operator[](std::size_t lin) const { return data_[lin]; }
  value_type& operator()(const MultiIndex& idx) { return data_[shape_.linear(idx)]; }
  const value_type& operator()(const MultiIndex& idx) const { return data_[shape_.linear(idx)]; }

  bool operator==(const TScalar&) const = default;

 private:
  TShape shape_;
  std::vector<value_type> data_;
};

template <class Real = double>
TScalar<Real> tscalar_zero(const TShape& shape) {
  return TScalar<Real>(shape);
}

/// Convolution delta: 1 at (1, ..., 1).
template <class Real = double>
TScalar<Real> tscalar_identity(const TShape& shape) {
  TScalar<Real> e(shape);
  e[0] = Real(1);
  return e;
}

template <class Real>
TScalar<Real> tscalar_add(const TScalar<Real>& a, const TScalar<Real>& b) {
  detail::require_same_shape(a.shape(), b.shape(), "tscalar_add");
  TScalar<Real> c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}

template <class Real>
TScalar<Real> tscalar_scale(const TScalar<Real>& a, Complex<Real> s) {
  TScalar<Real> c = a;
  for (auto& v : c.data()) v *= s;
  return c;
}

template <class Real>
TScalar<Real> operator+(const TScalar<Real>& a, const TScalar<Real>& b) {
  return tscalar_add(a, b);
}

template <class Real>
TScalar<Real> operator-(const TScalar<Real>& a, const TScalar<Real>& b) {
  return tscalar_add(a, tscalar_scale(b, Complex<Real>(-1)));
}

/// Forward multi-way DFT, unnormalized.
template <class Real>
TScalar<Real> multiway_dft(const TScalar<Real>& a) {
  TScalar<Real> out = a;
  detail::transform_axes<Real>(out.data(), out.shape(), 1, false);
  return out;
}

/// Inverse multi-way DFT, scaled so that multiway_idft(multiway_dft(x)) == x.
template <class Real>
TScalar<Real> multiway_idft(const TScalar<Real>& a) {
  TScalar<Real> out = a;
  detail::transform_axes<Real>(out.data(), out.shape(), 1, true);
  return out;
}

/// O(M^2) direct evaluation of the multi-way DFT sum. Reference path for tests.
template <class Real>
TScalar<Real> naive_multiway_dft(const TScalar<Real>& a, bool inverse = false) {
  const TShape& shape = a.shape();
  const std::size_t m = shape.slice_count();
  const long double sign = inverse ? 1.0L : -1.0L;
  TScalar<Real> out(shape);
  for (std::size_t k = 0; k < m; ++k) {
    const MultiIndex freq = shape.multi_index(k);
    std::complex<long double> acc = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const MultiIndex pos = shape.multi_index(j);
      long double phase = 0;
      for (std::size_t ax = 0; ax < shape.order(); ++ax) {
        phase += static_cast<long double>((freq[ax] - 1) * (pos[ax] - 1)) /
                 static_cast<long double>(shape.dim(ax));
      }
      const long double angle = sign * 2.0L * std::numbers::pi_v<long double> * phase;
      acc += std::complex<long double>(a[j].real(), a[j].imag()) *
             std::complex<long double>(std::cos(angle), std::sin(angle));
    }
    if (inverse) acc /= static_cast<long double>(m);
    out[k] = Complex<Real>(static_cast<Real>(acc.real()), static_cast<Real>(acc.imag()));
  }
  return out;
}

/// N-way circular convolution, computed in the Fourier domain.
template <class Real>
TScalar<Real> tscalar_mul(const TScalar<Real>& a, const TScalar<Real>& b) {
  detail::require_same_shape(a.shape(), b.shape(), "tscalar_mul");
  TScalar<Real> fa = multiway_dft(a);
  const TScalar<Real> fb = multiway_dft(b);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  return multiway_idft(fa);
}

/// The t-scalar whose transform is the entry-wise conjugate of F(a):
/// complex conjugation composed with circular index reversal on every axis.
template <class Real>
TScalar<Real> tscalar_conj(const TScalar<Real>& a) {
  const TShape& shape = a.shape();
  TScalar<Real> out(shape);
  for (std::size_t i = 0; i < a.size(); ++i) out[shape.mirror(i)] = std::conj(a[i]);
  return out;
}

}  // namespace talgebra

#endif  // TALGEBRA_TCORE_HPP
