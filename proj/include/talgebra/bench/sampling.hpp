#ifndef TALGEBRA_BENCH_SAMPLING_HPP
#define TALGEBRA_BENCH_SAMPLING_HPP

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "talgebra/bench/idx.hpp"

namespace talgebra::bench {

/// Class-balanced train/query split. `train_ids` / `query_ids` index the pool
/// each item was drawn from.
struct Dataset {
  std::vector<LabeledImage> train;
  std::vector<LabeledImage> query;
  std::vector<std::size_t> train_ids;
  std::vector<std::size_t> query_ids;
  std::uint64_t seed = 0;
  std::size_t per_class_train = 0;
  std::size_t per_class_query = 0;
};

/// Identifies the sampling procedure; bump it if the draw sequence changes.
inline constexpr const char* kSamplerId = "mt19937_64/rejection-fisher-yates/v1";

namespace detail {

/// Uniform integer in [0, n) from raw mt19937_64 output. The standard
/// distributions are implementation-defined, so they are avoided to keep
/// samples identical across standard libraries.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = gen();
    if (x >= threshold) return x % n;
  }
}

/// Pool indices grouped by label, ascending label, original order within a class.
inline std::map<int, std::vector<std::size_t>> by_class(const std::vector<LabeledImage>& pool) {
  std::map<int, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < pool.size(); ++i) out[pool[i].label].push_back(i);
  return out;
}

/// First `take` entries of a Fisher-Yates shuffle of `items`.
inline std::vector<std::size_t> draw(std::vector<std::size_t> items, std::size_t take,
                                     std::mt19937_64& gen) {
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + std::size_t(uniform_below(gen, items.size() - i));
    std::swap(items[i], items[j]);
  }
  items.resize(take);
  return items;
}

inline std::string class_error(int label, std::size_t have, std::size_t need) {
  return "class " + std::to_string(label) + " has " + std::to_string(have) +
         " images, need " + std::to_string(need);
}

}  // namespace detail

/// Draws disjoint train and query sets from one pool: for each class in
/// ascending label order, shuffle its members and take the first
/// `per_class_train` for training and the next `per_class_query` as queries.
inline Dataset sample_dataset(const std::vector<LabeledImage>& pool, std::uint64_t seed,
                              std::size_t per_class_train = 60, std::size_t per_class_query = 10) {
  std::mt19937_64 gen(seed);
  Dataset ds;
  ds.seed = seed;
  ds.per_class_train = per_class_train;
  ds.per_class_query = per_class_query;
  const std::size_t need = per_class_train + per_class_query;
  for (const auto& [label, members] : detail::by_class(pool)) {
    if (members.size() < need) {
      throw std::invalid_argument(detail::class_error(label, members.size(), need));
    }
    const auto picked = detail::draw(members, need, gen);
    for (std::size_t i = 0; i < need; ++i) {
      auto& ids = i < per_class_train ? ds.train_ids : ds.query_ids;
      auto& items = i < per_class_train ? ds.train : ds.query;
      ids.push_back(picked[i]);
      items.push_back(pool[picked[i]]);
    }
  }
  return ds;
}

/// Variant drawing training images from `train_pool` and queries from a
/// separate `query_pool` (e.g. the MNIST test split).
inline Dataset sample_dataset(const std::vector<LabeledImage>& train_pool,
                              const std::vector<LabeledImage>& query_pool, std::uint64_t seed,
                              std::size_t per_class_train = 60, std::size_t per_class_query = 10) {
  std::mt19937_64 gen(seed);
  Dataset ds;
  ds.seed = seed;
  ds.per_class_train = per_class_train;
  ds.per_class_query = per_class_query;
  const auto train_classes = detail::by_class(train_pool);
  const auto query_classes = detail::by_class(query_pool);
  for (const auto& [label, members] : train_classes) {
    if (members.size() < per_class_train) {
      throw std::invalid_argument(detail::class_error(label, members.size(), per_class_train));
    }
    for (std::size_t id : detail::draw(members, per_class_train, gen)) {
      ds.train_ids.push_back(id);
      ds.train.push_back(train_pool[id]);
    }
    const auto it = query_classes.find(label);
    const std::size_t have = it == query_classes.end() ? 0 : it->second.size();
    if (have < per_class_query) {
      throw std::invalid_argument("query pool: " +
                                  detail::class_error(label, have, per_class_query));
    }
    for (std::size_t id : detail::draw(it->second, per_class_query, gen)) {
      ds.query_ids.push_back(id);
      ds.query.push_back(query_pool[id]);
    }
  }
  return ds;
}

}  // namespace talgebra::bench

#endif  // TALGEBRA_BENCH_SAMPLING_HPP
