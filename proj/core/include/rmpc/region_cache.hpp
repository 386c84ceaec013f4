#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "rmpc/polytope.hpp"
#include "rmpc/types.hpp"

namespace rmpc {

/// One cached projection: the first-input law it was computed for and C.
struct CacheEntry {
  std::vector<int> active;  ///< sorted generating active set (the key)
  Matrix K;
  Vector b;
  Polytope region;
};

/// Projection regions keyed by sorted active set. Concurrent readers,
/// serialized writers; a repeated insert replaces the previous value.
class RegionCache {
 public:
  RegionCache() = default;
  RegionCache(const RegionCache& other);
  RegionCache& operator=(const RegionCache& other);

  static std::string key_of(const std::vector<int>& active);

  void insert(CacheEntry entry);
  std::optional<CacheEntry> find(const std::vector<int>& active) const;
  /// Entry whose first-input law matches (K, b) entrywise within `tol`. C
  /// depends on the law only through (K, b), so such an entry is reusable.
  std::optional<CacheEntry> find_by_law(const Matrix& K, const Vector& b, double tol = 1e-9) const;

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<CacheEntry> entries() const;

  /// JSON document {"n": .., "m": .., "entries": [{"active", "K", "b", "T", "d"}]}.
  std::string to_json(int n, int m) const;
  static RegionCache from_json(const std::string& text);
  void save(const std::filesystem::path& path, int n, int m) const;
  static RegionCache load(const std::filesystem::path& path);

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, CacheEntry> entries_;
};

}  // namespace rmpc
