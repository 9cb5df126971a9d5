#ifndef TALGEBRA_BENCH_EXPERIMENT_HPP
#define TALGEBRA_BENCH_EXPERIMENT_HPP

// Compression/reconstruction benchmark: PCA against TPCA with the compound
// pixel shapes below, PSNR measured on central spatial slices.
//
//   PCA     shape 1          plain pixels
//   TPCA    3x3              nested, 1 reuse
//   TPCA-A  3x3x3x3          nested, 2 reuses
//   TPCA-B  3x3x3x3x3x3      nested, 3 reuses
//   TPCA-X  5x5              window 5
//   TPCA-Y  7x7              window 7
//   TPCA-Z  9x9              window 9

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "talgebra/bench/psnr.hpp"
#include "talgebra/bench/sampling.hpp"
#include "talgebra/compound.hpp"
#include "talgebra/error.hpp"
#include "talgebra/tpca.hpp"
#include "talgebra/tpca_eval.hpp"

namespace talgebra::bench {

enum class Precision { c64, c128 };

inline const char* to_string(Precision p) { return p == Precision::c64 ? "c64" : "c128"; }

inline Precision parse_precision(std::string_view s) {
  if (s == "c64") return Precision::c64;
  if (s == "c128") return Precision::c128;
  throw std::invalid_argument("unknown precision '" + std::string(s) + "' (use c64 or c128)");
}

struct VariantSpec {
  std::string name;  ///< display name, e.g. "TPCA-A"
  TShape shape;
  CompoundStrategy strategy;
};

inline std::vector<VariantSpec> table_variants() {
  using K = CompoundStrategy::Kind;
  return {
      {"PCA", TShape{1}, {K::plain, 0}},
      {"TPCA", TShape::repeated(3, 2), {K::nested, 1}},
      {"TPCA-A", TShape::repeated(3, 4), {K::nested, 2}},
      {"TPCA-B", TShape::repeated(3, 6), {K::nested, 3}},
      {"TPCA-X", TShape{5, 5}, {K::window, 5}},
      {"TPCA-Y", TShape{7, 7}, {K::window, 7}},
      {"TPCA-Z", TShape{9, 9}, {K::window, 9}},
  };
}

/// Case-insensitive lookup: "pca", "tpca", "tpca-a", ...
inline VariantSpec variant_by_name(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return char(std::toupper(c)); });
  for (auto& v : table_variants()) {
    if (v.name == key) return v;
  }
  throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
}

template <class Real>
CompoundImage<Real> extend(const Image& img, const VariantSpec& spec) {
  switch (spec.strategy.kind) {
    case CompoundStrategy::Kind::nested:
      return strategy1_extend<Real>(img, spec.strategy.parameter);
    case CompoundStrategy::Kind::window:
      return strategy2_extend<Real>(img, spec.strategy.parameter);
    case CompoundStrategy::Kind::plain:
      break;
  }
  return plain_extend<Real>(img);
}

enum class StorePolicy { automatic, memory, disk };

struct ExperimentConfig {
  std::vector<std::size_t> dims;
  Precision precision = Precision::c128;
  /// Per-variant precision, keyed by display name.
  std::map<std::string, Precision> precision_overrides;
  int parallelism = 1;
  StorePolicy store = StorePolicy::automatic;
  std::filesystem::path cache_dir;
  /// Training Fourier data above this size goes to disk under `automatic`;
  /// also bounds the per-batch working set.
  std::size_t memory_budget = std::size_t{1} << 30;
  /// Run PCA through the t-algebra pipeline at shape (1,) instead of the
  /// dedicated real PCA path.
  bool pca_via_tpca = false;
};

/// PSNRs indexed [variant][d] (aggregate) and [variant][d][query] (per image).
struct PsnrReport {
  std::vector<std::string> variants;
  std::vector<std::string> precisions;
  std::vector<std::size_t> dims;
  std::vector<std::size_t> image_ids;
  std::size_t pixels_per_image = 0;
  std::vector<std::vector<double>> aggregate;
  std::vector<std::vector<std::vector<double>>> per_image;
  /// Per-image squared reconstruction errors, same indexing as per_image.
  std::vector<std::vector<std::vector<double>>> per_image_sse;
  std::vector<double> seconds;

  std::optional<std::size_t> variant_index(std::string_view name) const {
    for (std::size_t i = 0; i < variants.size(); ++i) {
      if (variants[i] == name) return i;
    }
    return std::nullopt;
  }

  std::size_t dim_index(std::size_t d) const {
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (dims[i] == d) return i;
    }
    throw std::out_of_range("feature dimension " + std::to_string(d) + " not in report");
  }

  double aggregate_psnr(std::string_view variant, std::size_t d) const {
    const auto v = variant_index(variant);
    if (!v) throw std::out_of_range("variant " + std::string(variant) + " not in report");
    return aggregate[*v][dim_index(d)];
  }

  /// Query positions ordered by ascending per-image PSNR of PCA (of the first
  /// variant when PCA is absent); ties keep query order.
  std::vector<std::size_t> sorted_order(std::size_t dim_pos) const {
    const std::size_t ref = variant_index("PCA").value_or(0);
    std::vector<std::size_t> order(image_ids.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto& vals = per_image.at(ref).at(dim_pos);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    return order;
  }
};

namespace detail {

template <class Fn>
auto with_variant_context(const std::string& variant, Fn&& fn) {
  try {
    return fn();
  } catch (const NumericDomainError& e) {
    throw NumericDomainError(variant + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(variant + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(variant + ": " + e.what());
  }
}

/// Reconstructions of every query through the dedicated PCA path, one
/// D x Q matrix per entry of `dims`.
template <class Real>
std::vector<RMatrix<double>> pca_reconstructions(const Dataset& ds,
                                                 const std::vector<std::size_t>& dims,
                                                 RMatrix<double>& original) {
  std::vector<RVector<Real>> train;
  train.reserve(ds.train.size());
  for (const auto& item : ds.train) train.push_back(vectorize<Real>(item.image));
  const PcaModel<Real> model = pca_fit<Real>(train);
  const auto dim = Eigen::Index(model.dim());
  const auto q = Eigen::Index(ds.query.size());
  RMatrix<Real> y(dim, q);
  for (Eigen::Index j = 0; j < q; ++j) y.col(j) = vectorize<Real>(ds.query[std::size_t(j)].image);
  original = y.template cast<double>();
  const RMatrix<Real> feature = model.basis.transpose() * (y.colwise() - model.mean);

  std::vector<std::size_t> steps(dims);
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  std::vector<RMatrix<double>> at_step;
  RMatrix<Real> rec = model.mean.replicate(1, q);
  Eigen::Index done = 0;
  for (std::size_t d : steps) {
    const auto upto = Eigen::Index(d);
    rec.noalias() += model.basis.middleCols(done, upto - done) * feature.middleRows(done, upto - done);
    done = upto;
    at_step.push_back(rec.template cast<double>());
  }
  std::vector<RMatrix<double>> out;
  for (std::size_t d : dims) {
    // All D directions: U U^T is the identity.
    if (Eigen::Index(d) == dim) {
      out.push_back(original);
      continue;
    }
    out.push_back(at_step[std::size_t(std::lower_bound(steps.begin(), steps.end(), d) -
                                      steps.begin())]);
  }
  return out;
}

template <class Real>
std::vector<RMatrix<double>> tpca_reconstructions(const Dataset& ds, const VariantSpec& spec,
                                                  const ExperimentConfig& cfg,
                                                  RMatrix<double>& original) {
  const TVectorSource<Real> train = [&](std::size_t k) {
    return image_to_tvector(extend<Real>(ds.train[k].image, spec));
  };
  const TVectorSource<Real> queries = [&](std::size_t k) {
    return image_to_tvector(extend<Real>(ds.query[k].image, spec));
  };
  TpcaOptions opt;
  opt.parallelism = cfg.parallelism;
  opt.cache_dir = cfg.cache_dir;
  opt.memory_budget = cfg.memory_budget;
  const std::size_t dim = ds.train.front().image.rows() * ds.train.front().image.cols();
  const std::size_t reps = (spec.shape.slice_count() + 1) / 2 + 1;
  const std::size_t estimate = ds.train.size() * reps * dim * sizeof(Complex<Real>);
  opt.store = cfg.store == StorePolicy::disk ||
                      (cfg.store == StorePolicy::automatic && estimate > cfg.memory_budget)
                  ? StoreMode::disk
                  : StoreMode::memory;
  const auto res = tpca_spatial_reconstructions<Real>(ds.train.size(), train, ds.query.size(),
                                                      queries, spec.shape.center(), cfg.dims, opt);
  original = res.original.real();
  std::vector<RMatrix<double>> out;
  out.reserve(res.recon.size());
  for (const auto& r : res.recon) out.push_back(r.real());
  return out;
}

template <class Real>
std::vector<RMatrix<double>> reconstructions(const Dataset& ds, const VariantSpec& spec,
                                             const ExperimentConfig& cfg,
                                             RMatrix<double>& original) {
  if (spec.strategy.kind == CompoundStrategy::Kind::plain && !cfg.pca_via_tpca) {
    return pca_reconstructions<Real>(ds, cfg.dims, original);
  }
  return tpca_reconstructions<Real>(ds, spec, cfg, original);
}

}  // namespace detail

/// Central-slice reconstructions of all queries for one variant; the building
/// block of run_experiment, also used to render single reconstructions.
inline std::vector<RMatrix<double>> variant_reconstructions(const Dataset& ds,
                                                            const VariantSpec& spec,
                                                            const ExperimentConfig& cfg,
                                                            Precision precision,
                                                            RMatrix<double>& original) {
  return detail::with_variant_context(spec.name, [&] {
    return precision == Precision::c64
               ? detail::reconstructions<float>(ds, spec, cfg, original)
               : detail::reconstructions<double>(ds, spec, cfg, original);
  });
}

/// Fits every variant on ds.train, reconstructs ds.query at each d, and
/// scores central spatial slices with PSNR (MAX = 255). Variants run one
/// after another.
inline PsnrReport run_experiment(const Dataset& ds, const std::vector<VariantSpec>& variants,
                                 const ExperimentConfig& cfg) {
  if (ds.train.size() < 2 || ds.query.empty()) {
    throw std::invalid_argument("run_experiment: need >= 2 training images and >= 1 query");
  }
  const std::size_t rows = ds.train.front().image.rows();
  const std::size_t cols = ds.train.front().image.cols();
  const std::size_t dim = rows * cols;
  for (const auto* set : {&ds.train, &ds.query}) {
    for (const auto& item : *set) {
      if (item.image.rows() != rows || item.image.cols() != cols) {
        throw std::invalid_argument("run_experiment: images differ in size");
      }
    }
  }
  if (cfg.dims.empty()) throw std::invalid_argument("run_experiment: no feature dimensions");
  for (std::size_t d : cfg.dims) {
    if (d < 1 || d > dim) {
      throw std::invalid_argument("run_experiment: d = " + std::to_string(d) + " outside [1, " +
                                  std::to_string(dim) + "]");
    }
  }

  PsnrReport report;
  report.dims = cfg.dims;
  report.image_ids = ds.query_ids;
  if (report.image_ids.size() != ds.query.size()) {
    report.image_ids.resize(ds.query.size());
    std::iota(report.image_ids.begin(), report.image_ids.end(), std::size_t{0});
  }
  report.pixels_per_image = dim;

  const std::size_t q = ds.query.size();
  for (const auto& spec : variants) {
    const auto it = cfg.precision_overrides.find(spec.name);
    const Precision precision = it != cfg.precision_overrides.end() ? it->second : cfg.precision;
    const auto start = std::chrono::steady_clock::now();
    RMatrix<double> original;
    const auto recon = variant_reconstructions(ds, spec, cfg, precision, original);

    std::vector<double> aggregate;
    std::vector<std::vector<double>> per_image;
    std::vector<std::vector<double>> per_image_sse;
    for (const auto& r : recon) {
      std::vector<double> sse(q), img_psnr(q);
      double total = 0;
      for (std::size_t j = 0; j < q; ++j) {
        sse[j] = (original.col(Eigen::Index(j)) - r.col(Eigen::Index(j))).squaredNorm();
        img_psnr[j] = psnr_from_sse(sse[j], dim);
        total += sse[j];
      }
      aggregate.push_back(psnr_from_sse(total, dim * q));
      per_image.push_back(std::move(img_psnr));
      per_image_sse.push_back(std::move(sse));
    }
    report.variants.push_back(spec.name);
    report.precisions.push_back(to_string(precision));
    report.aggregate.push_back(std::move(aggregate));
    report.per_image.push_back(std::move(per_image));
    report.per_image_sse.push_back(std::move(per_image_sse));
    report.seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return report;
}

/// Parses "50:500:50" (first:last:step, inclusive) or "50,100,250".
inline std::vector<std::size_t> parse_dims(std::string_view text) {
  auto to_num = [&](std::string_view s) {
    std::size_t pos = 0;
    const std::string str(s);
    unsigned long long v = 0;
    try {
      v = std::stoull(str, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != str.size() || str.empty()) {
      throw std::invalid_argument("bad dimension list '" + std::string(text) + "'");
    }
    return std::size_t(v);
  };
  std::vector<std::size_t> out;
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos) throw std::invalid_argument("dims range needs first:last:step");
    const std::size_t first = to_num(text.substr(0, a));
    const std::size_t last = to_num(text.substr(a + 1, b - a - 1));
    const std::size_t step = to_num(text.substr(b + 1));
    if (step == 0 || first > last) throw std::invalid_argument("bad dims range");
    for (std::size_t d = first; d <= last; d += step) out.push_back(d);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(to_num(text.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

}  // namespace talgebra::bench

#endif  // TALGEBRA_BENCH_EXPERIMENT_HPP
