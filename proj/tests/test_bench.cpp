#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "talgebra/bench/experiment.hpp"
#include "talgebra/bench/idx.hpp"
#include "talgebra/bench/pgm.hpp"
#include "talgebra/bench/psnr.hpp"
#include "talgebra/bench/report.hpp"
#include "talgebra/bench/sampling.hpp"

using namespace talgebra;
using namespace talgebra::bench;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("talgebra_bench_" + name);
  fs::remove_all(p);
  return p;
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(std::uint8_t(v >> s));
}

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<LabeledImage> synthetic_pool(std::size_t per_class, int classes, std::size_t side,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<LabeledImage> pool;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (int c = 0; c < classes; ++c) pool.push_back({oracle::random_image(side, side, rng), c});
  }
  return pool;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream s(text);
  for (std::string l; std::getline(s, l);) out.push_back(l);
  return out;
}

}  // namespace

// ---- IDX -------------------------------------------------------------------

class IdxFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = scratch("idx");
    fs::create_directories(dir);
    put_be32(images, kIdxImagesMagic);
    put_be32(images, 2);
    put_be32(images, 2);
    put_be32(images, 3);
    for (std::uint8_t v : {0, 1, 2, 3, 4, 5, 255, 128, 7, 9, 11, 13}) images.push_back(v);
    put_be32(labels, kIdxLabelsMagic);
    put_be32(labels, 2);
    labels.push_back(7);
    labels.push_back(3);
  }
  void TearDown() override { fs::remove_all(dir); }

  fs::path dir;
  std::vector<std::uint8_t> images, labels;
};

TEST_F(IdxFixture, ParsesKnownArrays) {
  write_bytes(dir / "img", images);
  write_bytes(dir / "lab", labels);
  const auto items = load_idx(dir / "img", dir / "lab");
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[0].label, 7);
  EXPECT_EQ(items[1].label, 3);
  EXPECT_EQ(items[0].image, Image(2, 3, {0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(items[1].image, Image(2, 3, {255, 128, 7, 9, 11, 13}));
}

TEST_F(IdxFixture, Errors) {
  write_bytes(dir / "img", images);
  write_bytes(dir / "lab", labels);
  auto offset_of = [](auto&& fn) -> std::uint64_t {
    try {
      fn();
    } catch (const FormatError& e) {
      return e.offset();
    }
    ADD_FAILURE() << "expected FormatError";
    return ~std::uint64_t{0};
  };
  // The image file passed as the label file has the wrong magic.
  EXPECT_EQ(offset_of([&] { load_idx(dir / "img", dir / "img"); }), 0u);
  EXPECT_EQ(offset_of([&] { load_idx(dir / "lab", dir / "lab"); }), 0u);

  auto truncated = images;
  truncated.resize(truncated.size() - 1);
  write_bytes(dir / "short", truncated);
  EXPECT_EQ(offset_of([&] { load_idx(dir / "short", dir / "lab"); }), truncated.size());
  write_bytes(dir / "hdr", {0, 0, 8, 3, 0});
  EXPECT_EQ(offset_of([&] { load_idx(dir / "hdr", dir / "lab"); }), 5u);

  auto more = labels;
  more[7] = 3;
  more.push_back(1);
  write_bytes(dir / "lab3", more);
  EXPECT_EQ(offset_of([&] { load_idx(dir / "img", dir / "lab3"); }), 4u);

  auto zero = images;
  zero[11] = 0;
  write_bytes(dir / "zero", zero);
  EXPECT_EQ(offset_of([&] { load_idx(dir / "zero", dir / "lab"); }), 8u);

  EXPECT_THROW(load_idx(dir / "missing", dir / "lab"), IoError);
}

TEST(Idx, BundledSubsetHeader) {
  const fs::path data = fs::path(TALGEBRA_DATA_DIR) / "mnist5k";
  if (!fs::exists(data / "images-idx3-ubyte")) GTEST_SKIP() << "bundled data not found";
  const auto items = load_idx(data / "images-idx3-ubyte", data / "labels-idx1-ubyte");
  ASSERT_EQ(items.size(), 5000u);
  std::map<int, int> counts;
  for (const auto& it : items) {
    EXPECT_EQ(it.image.rows(), 28u);
    EXPECT_EQ(it.image.cols(), 28u);
    ++counts[it.label];
  }
  EXPECT_EQ(counts.size(), 10u);
  const auto ds = sample_dataset(items, 1);
  EXPECT_EQ(ds.train.size(), 600u);
  EXPECT_EQ(ds.query.size(), 100u);
}

// ---- sampling --------------------------------------------------------------

TEST(Sampling, DeterministicDisjointBalanced) {
  const auto pool = synthetic_pool(20, 4, 2, 1);
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 123456789ull}) {
    const auto a = sample_dataset(pool, seed, 6, 3);
    const auto b = sample_dataset(pool, seed, 6, 3);
    EXPECT_EQ(a.train_ids, b.train_ids);
    EXPECT_EQ(a.query_ids, b.query_ids);
    std::set<std::size_t> train(a.train_ids.begin(), a.train_ids.end());
    EXPECT_EQ(train.size(), 24u);
    for (auto q : a.query_ids) EXPECT_FALSE(train.count(q));
    std::map<int, int> tc, qc;
    for (const auto& x : a.train) ++tc[x.label];
    for (const auto& x : a.query) ++qc[x.label];
    for (int c = 0; c < 4; ++c) {
      EXPECT_EQ(tc[c], 6);
      EXPECT_EQ(qc[c], 3);
    }
    for (std::size_t i = 0; i < a.train.size(); ++i) {
      EXPECT_EQ(a.train[i].image, pool[a.train_ids[i]].image);
    }
  }
  EXPECT_NE(sample_dataset(pool, 1, 6, 3).train_ids, sample_dataset(pool, 2, 6, 3).train_ids);
  EXPECT_THROW(sample_dataset(pool, 1, 15, 6), std::invalid_argument);
}

TEST(Sampling, SeparatePools) {
  const auto train_pool = synthetic_pool(10, 3, 2, 2);
  const auto query_pool = synthetic_pool(4, 3, 2, 3);
  const auto ds = sample_dataset(train_pool, query_pool, 5, 4, 2);
  EXPECT_EQ(ds.train.size(), 12u);
  EXPECT_EQ(ds.query.size(), 6u);
  EXPECT_THROW(sample_dataset(train_pool, query_pool, 5, 4, 5), std::invalid_argument);
}

TEST(Sampling, UniformDrawIsUnbiasedInRange) {
  std::mt19937_64 gen(9);
  std::vector<int> counts(7);
  for (int i = 0; i < 70000; ++i) ++counts[talgebra::bench::detail::uniform_below(gen, 7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

// ---- PSNR ------------------------------------------------------------------

TEST(Psnr, UnitExamples) {
  const std::vector<double> x{255.0}, zero{0.0}, tenth{229.5};
  EXPECT_EQ(psnr(x, x), kPsnrInfinity);
  EXPECT_EQ(psnr(x, zero), 0.0);
  EXPECT_EQ(psnr(x, tenth), 20.0);
  const std::vector<double> a{10, 20, 30}, b{265, 275, 285};
  EXPECT_EQ(psnr(a, b), 0.0);
  EXPECT_THROW(psnr(a, x), std::invalid_argument);
  EXPECT_THROW(psnr(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
}

TEST(Psnr, AggregateFromPerImageErrors) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0, 20);
  std::vector<double> x(784 * 5), y(784 * 5);
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = 128 + n(rng);
    y[i] = x[i] + n(rng);
    sse += (x[i] - y[i]) * (x[i] - y[i]);
  }
  EXPECT_NEAR(psnr(x, y), psnr_from_sse(sse, x.size()), 1e-9);
}

// ---- experiment --------------------------------------------------------------

TEST(Experiment, VariantsAndDims) {
  const auto v = table_variants();
  ASSERT_EQ(v.size(), 7u);
  EXPECT_EQ(variant_by_name("tpca-b").shape, TShape::repeated(3, 6));
  EXPECT_EQ(variant_by_name("TPCA-Z").shape, (TShape{9, 9}));
  EXPECT_EQ(variant_by_name("pca").shape, (TShape{1}));
  EXPECT_THROW(variant_by_name("tpca-q"), std::invalid_argument);
  EXPECT_EQ(parse_dims("50:500:50").size(), 10u);
  EXPECT_EQ(parse_dims("50:500:50").back(), 500u);
  EXPECT_EQ(parse_dims("3,1,64"), (std::vector<std::size_t>{3, 1, 64}));
  EXPECT_THROW(parse_dims("5:x:1"), std::invalid_argument);
  EXPECT_THROW(parse_dims("1,,2"), std::invalid_argument);
  EXPECT_EQ(parse_precision("c64"), Precision::c64);
  EXPECT_THROW(parse_precision("c32"), std::invalid_argument);
}

TEST(Experiment, SmallGridProperties) {
  // More training images than pixels, so no zero eigenvalues tie at the cut.
  const auto pool = synthetic_pool(16, 3, 6, 5);
  const auto ds = sample_dataset(pool, 7, 14, 2);
  ExperimentConfig cfg;
  cfg.dims = {1, 5, 20, 36};
  std::vector<VariantSpec> variants{variant_by_name("PCA"), variant_by_name("TPCA"),
                                    variant_by_name("TPCA-X")};
  const auto rep = run_experiment(ds, variants, cfg);
  ASSERT_EQ(rep.aggregate.size(), 3u);
  for (std::size_t v = 0; v < 3; ++v) {
    EXPECT_EQ(rep.aggregate[v][3], kPsnrInfinity);
    for (double p : rep.per_image[v][3]) EXPECT_EQ(p, kPsnrInfinity);
    for (std::size_t d = 0; d < 3; ++d) {
      double total = 0;
      for (double e : rep.per_image_sse[v][d]) total += e;
      EXPECT_NEAR(rep.aggregate[v][d], psnr_from_sse(total, 36 * ds.query.size()), 1e-9);
    }
  }

  // PCA through the t-algebra at shape (1,) agrees with the dedicated path.
  ExperimentConfig via = cfg;
  via.pca_via_tpca = true;
  const auto alt = run_experiment(ds, {variant_by_name("PCA")}, via);
  for (std::size_t d = 0; d < 3; ++d) EXPECT_NEAR(alt.aggregate[0][d], rep.aggregate[0][d], 1e-6);

  // Parallelism, streaming, and precision do not change the numbers materially.
  ExperimentConfig par = cfg;
  par.parallelism = 3;
  par.store = StorePolicy::disk;
  par.memory_budget = 1;
  const auto p = run_experiment(ds, variants, par);
  for (std::size_t v = 0; v < 3; ++v) {
    for (std::size_t d = 0; d < 3; ++d) EXPECT_NEAR(p.aggregate[v][d], rep.aggregate[v][d], 1e-6);
    EXPECT_EQ(p.aggregate[v][3], kPsnrInfinity);
  }
  ExperimentConfig single = cfg;
  single.precision = Precision::c64;
  const auto s = run_experiment(ds, variants, single);
  for (std::size_t v = 0; v < 3; ++v) {
    for (std::size_t d = 0; d < 3; ++d) EXPECT_NEAR(s.aggregate[v][d], rep.aggregate[v][d], 0.05);
  }
  EXPECT_EQ(s.precisions[1], "c64");

  ExperimentConfig bad = cfg;
  bad.dims = {37};
  EXPECT_THROW(run_experiment(ds, variants, bad), std::invalid_argument);
}

// ---- reports ---------------------------------------------------------------

namespace {

PsnrReport fake_report(std::size_t variants, std::size_t dims, std::size_t images) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(10, 60);
  PsnrReport r;
  for (std::size_t v = 0; v < variants; ++v) {
    r.variants.push_back(v == 0 ? "PCA" : "TPCA-" + std::to_string(v));
    r.precisions.push_back("c128");
  }
  for (std::size_t d = 0; d < dims; ++d) r.dims.push_back(50 * (d + 1));
  for (std::size_t i = 0; i < images; ++i) r.image_ids.push_back(1000 + 7 * i);
  r.pixels_per_image = 784;
  r.aggregate.assign(variants, std::vector<double>(dims));
  r.per_image.assign(variants, std::vector<std::vector<double>>(dims, std::vector<double>(images)));
  for (std::size_t v = 0; v < variants; ++v) {
    for (std::size_t d = 0; d < dims; ++d) {
      r.aggregate[v][d] = u(rng);
      for (auto& x : r.per_image[v][d]) x = u(rng);
    }
  }
  r.aggregate[1][dims - 1] = kPsnrInfinity;
  r.per_image[1][dims - 1][0] = kPsnrInfinity;
  return r;
}

}  // namespace

TEST(Reports, FilesAndCardinality) {
  const auto rep = fake_report(7, 10, 100);
  const auto dir = scratch("reports");
  const auto written = emit_reports(rep, dir);
  EXPECT_EQ(written.size(), 2u + 2u * 10u);
  const auto table = lines(read_text(dir / "psnr_table.csv"));
  ASSERT_EQ(table.size(), 71u);
  EXPECT_EQ(table[0], "variant,d,psnr_db");
  EXPECT_NE(read_text(dir / "psnr_table.csv").find("TPCA-1,500,inf"), std::string::npos);

  const auto per = lines(read_text(dir / "per_image_d250.csv"));
  ASSERT_EQ(per.size(), 101u);
  EXPECT_EQ(per[0].rfind("sorted_rank,image_id,PCA,TPCA-1", 0), 0u);
  double prev = -1;
  for (std::size_t i = 1; i < per.size(); ++i) {
    std::stringstream row(per[i]);
    std::string rank, id, pca;
    std::getline(row, rank, ',');
    std::getline(row, id, ',');
    std::getline(row, pca, ',');
    EXPECT_EQ(std::stoul(rank), i);
    const double v = std::stod(pca);
    EXPECT_GE(v, prev);
    prev = v;
  }
  const auto svg = read_text(dir / "psnr_heatmap.svg");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("dB</text>"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "per_image_d500.svg"));
  fs::remove_all(dir);
}

TEST(Reports, ByteIdenticalRerun) {
  const auto rep = fake_report(3, 4, 12);
  const auto a = scratch("rerun_a");
  const auto b = scratch("rerun_b");
  const auto fa = emit_reports(rep, a);
  emit_reports(rep, b);
  for (const auto& p : fa) EXPECT_EQ(read_text(p), read_text(b / p.filename())) << p;
  emit_reports(rep, a);
  for (const auto& p : fa) EXPECT_EQ(read_text(p), read_text(b / p.filename())) << p;
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Reports, IoErrorsNameThePath) {
  const auto blocker = scratch("blocker");
  { std::ofstream(blocker) << "x"; }
  try {
    emit_reports(fake_report(2, 1, 2), blocker / "sub");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(blocker.string()), std::string::npos);
  }
  fs::remove(blocker);
}

TEST(Pgm, WritesBinaryGraymap) {
  const auto p = scratch("img.pgm");
  write_pgm(p, Image(2, 3, {0, 1.4, 1.6, 255, 300, -5}));
  const auto text = read_text(p);
  const std::string header = "P5\n3 2\n255\n";
  ASSERT_EQ(text.size(), header.size() + 6);
  EXPECT_EQ(text.substr(0, header.size()), header);
  const std::vector<unsigned char> px(text.begin() + long(header.size()), text.end());
  EXPECT_EQ(px, (std::vector<unsigned char>{0, 1, 2, 255, 255, 0}));
  fs::remove(p);
}
