#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "rmpc/errors.hpp"
#include "rmpc/region_cache.hpp"

namespace rmpc {
namespace {

CacheEntry random_entry(std::mt19937_64& rng, std::vector<int> active) {
  std::normal_distribution<double> g(0.0, 1.0);
  CacheEntry e;
  e.active = std::move(active);
  e.K = Matrix::Zero(1, 2);
  e.b = Vector::Constant(1, g(rng));
  Matrix T(5, 2);
  Vector d(5);
  for (int i = 0; i < 5; ++i) {
    T(i, 0) = g(rng);
    T(i, 1) = g(rng) * 1e-7;
    d(i) = std::abs(g(rng)) + 1.0 / 3.0;
  }
  e.region = Polytope(T, d);
  return e;
}

TEST(RegionCache, InsertFindReplace) {
  std::mt19937_64 rng(1);
  RegionCache cache;
  EXPECT_TRUE(cache.empty());
  cache.insert(random_entry(rng, {0, 5, 9}));
  cache.insert(random_entry(rng, {3}));
  EXPECT_EQ(cache.size(), 2u);
  ASSERT_TRUE(cache.find({0, 5, 9}).has_value());
  EXPECT_FALSE(cache.find({0, 5}).has_value());
  EXPECT_EQ(RegionCache::key_of({0, 5, 9}), RegionCache::key_of({0, 5, 9}));
  EXPECT_NE(RegionCache::key_of({0, 59}), RegionCache::key_of({0, 5, 9}));

  CacheEntry replacement = random_entry(rng, {3});
  const double b = replacement.b(0);
  cache.insert(std::move(replacement));
  EXPECT_EQ(cache.size(), 2u);
  EXPECT_EQ(cache.find({3})->b(0), b);
}

TEST(RegionCache, FindByLaw) {
  std::mt19937_64 rng(2);
  RegionCache cache;
  CacheEntry e = random_entry(rng, {1, 2});
  e.b(0) = 2.0;
  cache.insert(e);
  EXPECT_TRUE(cache.find_by_law(Matrix::Zero(1, 2), Vector::Constant(1, 2.0 + 1e-12)).has_value());
  EXPECT_FALSE(cache.find_by_law(Matrix::Zero(1, 2), Vector::Constant(1, -2.0)).has_value());
  EXPECT_FALSE(cache.find_by_law(Matrix::Zero(1, 3), Vector::Constant(1, 2.0)).has_value());
}

TEST(RegionCache, JsonRoundTripIsExact) {
  std::mt19937_64 rng(3);
  RegionCache cache;
  for (int k = 0; k < 4; ++k) cache.insert(random_entry(rng, {k, k + 7}));
  const RegionCache back = RegionCache::from_json(cache.to_json(2, 1));
  ASSERT_EQ(back.size(), cache.size());
  for (const CacheEntry& e : cache.entries()) {
    const auto f = back.find(e.active);
    ASSERT_TRUE(f.has_value());
    EXPECT_EQ(f->K, e.K);
    EXPECT_EQ(f->b, e.b);
    EXPECT_EQ(f->region.T(), e.region.T());
    EXPECT_EQ(f->region.d(), e.region.d());
  }
  EXPECT_EQ(back.to_json(2, 1), cache.to_json(2, 1));
}

TEST(RegionCache, SaveAndLoad) {
  std::mt19937_64 rng(4);
  RegionCache cache;
  cache.insert(random_entry(rng, {4}));
  const auto path = std::filesystem::temp_directory_path() / "rmpc_cache_test.json";
  cache.save(path, 2, 1);
  const RegionCache back = RegionCache::load(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.to_json(2, 1), cache.to_json(2, 1));
  RegionCache copy;
  copy = back;
  EXPECT_EQ(copy.size(), 1u);
}

TEST(RegionCache, MalformedDocuments) {
  EXPECT_THROW(RegionCache::from_json("{"), FormatError);
  EXPECT_THROW(RegionCache::from_json("[]"), FormatError);
  EXPECT_THROW(RegionCache::from_json(R"({"n":2,"m":1,"entries":[{"K":[[0,0]],"b":[1],"T":[[1,0]],"d":[1]}]})"),
               FormatError);
  EXPECT_THROW(RegionCache::from_json(
                   R"({"n":2,"m":1,"entries":[{"active":[1],"K":[[0,0]],"b":[1],"T":[[1,0,0]],"d":[1]}]})"),
               FormatError);
  EXPECT_THROW(RegionCache::load("/nonexistent/cache.json"), FormatError);
}

}  // namespace
}  // namespace rmpc
