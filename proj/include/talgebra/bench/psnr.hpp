#ifndef TALGEBRA_BENCH_PSNR_HPP
#define TALGEBRA_BENCH_PSNR_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>

namespace talgebra::bench {

/// Returned when the reconstruction is exact.
inline constexpr double kPsnrInfinity = std::numeric_limits<double>::infinity();

/// 20 log10(max * sqrt(count) / sqrt(sse)), evaluated as 10 log10(max^2 count / sse)
/// so that round ratios stay exact.
inline double psnr_from_sse(double sse, std::size_t count, double max_value = 255.0) {
  if (sse == 0.0) return kPsnrInfinity;
  return 10.0 * std::log10(max_value * max_value * double(count) / sse);
}

/// PSNR = 20 log10(MAX sqrt(D) / ||X - X_recon||_F), D the entry count.
inline double psnr(std::span<const double> x, std::span<const double> recon,
                   double max_value = 255.0) {
  if (x.size() != recon.size()) throw std::invalid_argument("psnr: array sizes differ");
  if (x.empty()) throw std::invalid_argument("psnr: empty arrays");
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = x[i] - recon[i];
    sse += e * e;
  }
  return psnr_from_sse(sse, x.size(), max_value);
}

}  // namespace talgebra::bench

#endif  // TALGEBRA_BENCH_PSNR_HPP
