// talgebra: PCA vs. TPCA reconstruction benchmark on MNIST-format data.
//
//   talgebra bench --train-images F --train-labels F [--test-images F --test-labels F]
//                  [--seed N] [--variants pca,tpca,...] [--dims 50:500:50]
//                  [--precision c64|c128] [--parallelism N] [--out DIR] [--reduced]
//   talgebra reconstruct --train-images F --train-labels F --variant NAME --d N
//                  --image-index I [--out DIR]

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "talgebra/bench/experiment.hpp"
#include "talgebra/bench/idx.hpp"
#include "talgebra/bench/pgm.hpp"
#include "talgebra/bench/report.hpp"
#include "talgebra/bench/sampling.hpp"
#include "talgebra/parallel.hpp"

namespace fs = std::filesystem;
using namespace talgebra;
using namespace talgebra::bench;

namespace {

struct DataArgs {
  std::string train_images, train_labels, test_images, test_labels;
  std::uint64_t seed = 1;
  std::size_t per_class_train = 60;
  std::size_t per_class_query = 10;

  void add_to(CLI::App& app) {
    app.add_option("--train-images", train_images, "IDX image file of the training split")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--train-labels", train_labels, "IDX label file of the training split")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--test-images", test_images, "draw queries from this IDX image file")
        ->check(CLI::ExistingFile);
    app.add_option("--test-labels", test_labels, "labels for --test-images")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "sampling seed")->capture_default_str();
    app.add_option("--per-class-train", per_class_train, "training images per class")
        ->capture_default_str();
    app.add_option("--per-class-query", per_class_query, "query images per class")
        ->capture_default_str();
  }

  Dataset sample(std::size_t train_per_class, std::size_t query_per_class) const {
    const auto pool = load_idx(train_images, train_labels);
    if (test_images.empty() != test_labels.empty()) {
      throw std::invalid_argument("--test-images and --test-labels go together");
    }
    if (!test_images.empty()) {
      return sample_dataset(pool, load_idx(test_images, test_labels), seed, train_per_class,
                            query_per_class);
    }
    return sample_dataset(pool, seed, train_per_class, query_per_class);
  }
};

struct EngineArgs {
  int parallelism = 0;
  std::string store = "auto";
  std::string cache_dir;
  std::size_t memory_budget_mb = 1024;

  void add_to(CLI::App& app) {
    app.add_option("--parallelism", parallelism,
                   "worker threads (default: TALGEBRA_THREADS, else hardware threads)");
    app.add_option("--store", store, "training Fourier data: auto, memory or disk")
        ->check(CLI::IsMember({"auto", "memory", "disk"}))
        ->capture_default_str();
    app.add_option("--cache-dir", cache_dir, "directory for disk-backed slice data");
    app.add_option("--memory-budget-mb", memory_budget_mb,
                   "in-memory limit before spilling training data to disk")
        ->capture_default_str();
  }

  void apply(ExperimentConfig& cfg) const {
    const int hw = std::max(1, int(std::thread::hardware_concurrency()));
    cfg.parallelism = parallelism > 0 ? parallelism : threads_from_env(hw);
    cfg.store = store == "memory" ? StorePolicy::memory
                : store == "disk" ? StorePolicy::disk
                                  : StorePolicy::automatic;
    cfg.cache_dir = cache_dir.empty() ? fs::temp_directory_path() : fs::path(cache_dir);
    cfg.memory_budget = memory_budget_mb << 20;
  }
};

std::vector<VariantSpec> parse_variants(const std::string& text) {
  std::vector<VariantSpec> out;
  std::stringstream s(text);
  for (std::string name; std::getline(s, name, ',');) {
    if (!name.empty()) out.push_back(variant_by_name(name));
  }
  if (out.empty()) throw std::invalid_argument("no variants selected");
  return out;
}

std::string fmt_db(double v) { return bench::detail::format_number(v, 3); }

void print_table(const PsnrReport& r, std::ostream& os) {
  os << "variant   prec  seconds";
  for (std::size_t d : r.dims) os << "  d=" << d;
  os << '\n';
  for (std::size_t v = 0; v < r.variants.size(); ++v) {
    char head[64];
    std::snprintf(head, sizeof(head), "%-8s  %-4s  %7.1f", r.variants[v].c_str(),
                  r.precisions[v].c_str(), r.seconds[v]);
    os << head;
    for (double p : r.aggregate[v]) os << "  " << fmt_db(p);
    os << '\n';
  }
}

nlohmann::json run_info(const PsnrReport& r, const Dataset& ds, const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["seed"] = ds.seed;
  j["sampler"] = kSamplerId;
  j["train_count"] = ds.train.size();
  j["query_count"] = ds.query.size();
  j["per_class_train"] = ds.per_class_train;
  j["per_class_query"] = ds.per_class_query;
  j["dims"] = r.dims;
  j["parallelism"] = cfg.parallelism;
  j["query_ids"] = ds.query_ids;
  for (std::size_t v = 0; v < r.variants.size(); ++v) {
    nlohmann::json e;
    e["name"] = r.variants[v];
    e["precision"] = r.precisions[v];
    e["seconds"] = r.seconds[v];
    j["variants"].push_back(e);
  }
  return j;
}

void write_report(const PsnrReport& r, const Dataset& ds, const ExperimentConfig& cfg,
                  const fs::path& dir) {
  emit_reports(r, dir);
  std::ofstream info(dir / "run_info.json");
  if (!info) throw IoError("cannot write " + (dir / "run_info.json").string());
  info << run_info(r, ds, cfg).dump(2) << '\n';
  std::cout << "wrote " << dir.string() << '\n';
}

int run_bench(const DataArgs& data, const EngineArgs& engine, const std::string& variants_text,
              const std::string& dims_text, const std::optional<std::string>& precision,
              const std::string& out, bool reduced) {
  ExperimentConfig cfg;
  cfg.dims = parse_dims(dims_text);
  engine.apply(cfg);
  cfg.precision = precision ? parse_precision(*precision) : Precision::c128;
  // The order-6 variant is fitted in single precision unless asked otherwise.
  if (!precision) cfg.precision_overrides["TPCA-B"] = Precision::c64;

  auto variants = parse_variants(variants_text);
  std::vector<VariantSpec> main_set;
  bool run_b_reduced = false;
  for (const auto& v : variants) {
    if (reduced && v.name == "TPCA-B") {
      run_b_reduced = true;
    } else {
      main_set.push_back(v);
    }
  }

  std::cerr << "threads: " << cfg.parallelism << '\n';
  if (!main_set.empty()) {
    const Dataset ds = data.sample(data.per_class_train, data.per_class_query);
    std::cerr << "sampled " << ds.train.size() << " training and " << ds.query.size()
              << " query images (seed " << ds.seed << ")\n";
    const PsnrReport r = run_experiment(ds, main_set, cfg);
    print_table(r, std::cout);
    write_report(r, ds, cfg, out);
  }
  if (run_b_reduced) {
    // Small sample for the 729-slice variant, with PCA on the same sample
    // as a reference row.
    const Dataset ds = data.sample(10, 2);
    std::cerr << "reduced run: " << ds.train.size() << " training and " << ds.query.size()
              << " query images\n";
    const PsnrReport r =
        run_experiment(ds, {variant_by_name("PCA"), variant_by_name("TPCA-B")}, cfg);
    print_table(r, std::cout);
    write_report(r, ds, cfg, fs::path(out) / "reduced");
  }
  return 0;
}

int run_reconstruct(const DataArgs& data, const EngineArgs& engine, const std::string& variant,
                    std::size_t d, std::size_t image_index,
                    const std::optional<std::string>& precision, const std::string& out) {
  const VariantSpec spec = variant_by_name(variant);
  const Dataset ds = data.sample(data.per_class_train, data.per_class_query);
  if (image_index >= ds.query.size()) {
    throw std::invalid_argument("--image-index must be below " + std::to_string(ds.query.size()));
  }
  ExperimentConfig cfg;
  cfg.dims = {d};
  engine.apply(cfg);
  const Precision prec = precision            ? parse_precision(*precision)
                         : spec.name == "TPCA-B" ? Precision::c64
                                                 : Precision::c128;
  const std::size_t dim = ds.train.front().image.rows() * ds.train.front().image.cols();
  if (d < 1 || d > dim) throw std::invalid_argument("--d outside [1, " + std::to_string(dim) + "]");
  RMatrix<double> original;
  const auto recon = variant_reconstructions(ds, spec, cfg, prec, original);
  const auto rows = ds.query.front().image.rows();
  const auto cols = ds.query.front().image.cols();
  const auto j = Eigen::Index(image_index);

  fs::create_directories(out);
  const std::string id = std::to_string(ds.query_ids[image_index]);
  const fs::path orig_path = fs::path(out) / ("original_" + id + ".pgm");
  std::string tag = spec.name;
  std::transform(tag.begin(), tag.end(), tag.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  const fs::path rec_path = fs::path(out) / ("recon_" + tag + "_d" + std::to_string(d) + "_" + id + ".pgm");
  write_pgm(orig_path, image_from_raster(RVector<double>(original.col(j)), rows, cols));
  write_pgm(rec_path, image_from_raster(RVector<double>(recon[0].col(j)), rows, cols));
  const double sse = (original.col(j) - recon[0].col(j)).squaredNorm();
  std::cout << spec.name << " d=" << d << " image " << id << ": PSNR " << fmt_db(psnr_from_sse(sse, dim))
            << " dB\n"
            << "wrote " << orig_path.string() << "\nwrote " << rec_path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PCA and tensorial PCA on compound images"};
  app.require_subcommand(1);

  DataArgs data;
  EngineArgs engine;

  auto* bench = app.add_subcommand("bench", "PSNR of every variant over a grid of d");
  data.add_to(*bench);
  engine.add_to(*bench);
  std::string variants = "pca,tpca,tpca-a,tpca-b,tpca-x,tpca-y,tpca-z";
  std::string dims = "50:500:50";
  std::optional<std::string> precision;
  std::string out = "out";
  bool reduced = false;
  bench->add_option("--variants", variants, "comma-separated variant names")->capture_default_str();
  bench->add_option("--dims", dims, "first:last:step or a comma list")->capture_default_str();
  bench->add_option("--precision", precision,
                    "c64 or c128 (default c128; TPCA-B uses c64 unless this is given)");
  bench->add_option("--out", out, "output directory")->capture_default_str();
  bench->add_flag("--reduced", reduced,
                  "run TPCA-B on 10+2 images per class, reported under <out>/reduced");

  auto* recon = app.add_subcommand("reconstruct", "write one original and reconstructed image");
  DataArgs rdata;
  EngineArgs rengine;
  rdata.add_to(*recon);
  rengine.add_to(*recon);
  std::string variant;
  std::size_t d = 0;
  std::size_t image_index = 0;
  std::optional<std::string> rprecision;
  std::string rout = "out";
  recon->add_option("--variant", variant, "variant name, e.g. tpca-z")->required();
  recon->add_option("--d", d, "feature dimension")->required();
  recon->add_option("--image-index", image_index, "position in the sampled query set")->required();
  recon->add_option("--precision", rprecision, "c64 or c128");
  recon->add_option("--out", rout, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*bench) return run_bench(data, engine, variants, dims, precision, out, reduced);
    return run_reconstruct(rdata, rengine, variant, d, image_index, rprecision, rout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
