#include "rmpc/region_cache.hpp"

#include <algorithm>
#include <mutex>

#include "json_matrix.hpp"
#include "rmpc/errors.hpp"

namespace rmpc {

RegionCache::RegionCache(const RegionCache& other) {
  std::shared_lock lock(other.mutex_);
  entries_ = other.entries_;
}

RegionCache& RegionCache::operator=(const RegionCache& other) {
  if (this == &other) return *this;
  std::map<std::string, CacheEntry> copy;
  {
    std::shared_lock lock(other.mutex_);
    copy = other.entries_;
  }
  std::unique_lock lock(mutex_);
  entries_ = std::move(copy);
  return *this;
}

std::string RegionCache::key_of(const std::vector<int>& active) {
  std::vector<int> sorted = active;
  std::sort(sorted.begin(), sorted.end());
  std::string key;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0) key += ',';
    key += std::to_string(sorted[i]);
  }
  return key;
}

void RegionCache::insert(CacheEntry entry) {
  std::sort(entry.active.begin(), entry.active.end());
  std::string key = key_of(entry.active);
  std::unique_lock lock(mutex_);
  entries_.insert_or_assign(std::move(key), std::move(entry));
}

std::optional<CacheEntry> RegionCache::find(const std::vector<int>& active) const {
  const std::string key = key_of(active);
  std::shared_lock lock(mutex_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<CacheEntry> RegionCache::find_by_law(const Matrix& K, const Vector& b,
                                                   double tol) const {
  std::shared_lock lock(mutex_);
  for (const auto& [key, e] : entries_) {
    if (e.K.rows() != K.rows() || e.K.cols() != K.cols() || e.b.size() != b.size()) continue;
    if ((e.K - K).cwiseAbs().maxCoeff() <= tol && (e.b - b).cwiseAbs().maxCoeff() <= tol) return e;
  }
  return std::nullopt;
}

std::size_t RegionCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::vector<CacheEntry> RegionCache::entries() const {
  std::shared_lock lock(mutex_);
  std::vector<CacheEntry> out;
  out.reserve(entries_.size());
  for (const auto& kv : entries_) out.push_back(kv.second);
  return out;
}

std::string RegionCache::to_json(int n, int m) const {
  using detail::Json;
  Json doc;
  doc["n"] = n;
  doc["m"] = m;
  Json list = Json::array();
  for (const CacheEntry& e : entries()) {
    list.push_back({{"active", e.active},
                    {"K", detail::to_json(e.K)},
                    {"b", detail::to_json(e.b)},
                    {"T", detail::to_json(e.region.T())},
                    {"d", detail::to_json(e.region.d())}});
  }
  doc["entries"] = std::move(list);
  return doc.dump(1) + "\n";
}

RegionCache RegionCache::from_json(const std::string& text) {
  using detail::Json;
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("region cache: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc.at("entries").is_array() ||
      !doc.contains("n") || !doc.contains("m")) {
    throw FormatError("region cache: expected an object with n, m and entries");
  }
  const int n = doc.at("n").get<int>();
  const int m = doc.at("m").get<int>();
  RegionCache cache;
  for (const Json& j : doc.at("entries")) {
    CacheEntry e;
    if (!j.contains("active") || !j.at("active").is_array()) {
      throw FormatError("region cache: entry without active set");
    }
    e.active = j.at("active").get<std::vector<int>>();
    e.K = detail::matrix_from_json(j.at("K"), "K");
    e.b = detail::vector_from_json(j.at("b"), "b");
    Matrix T = detail::matrix_from_json(j.at("T"), "T");
    Vector d = detail::vector_from_json(j.at("d"), "d");
    if (T.rows() == 0) T.resize(0, n);
    if (e.K.rows() == 0) e.K.resize(m, n);
    if (e.K.rows() != m || e.K.cols() != n || e.b.size() != m || T.cols() != n ||
        T.rows() != d.size()) {
      throw FormatError("region cache: entry " + key_of(e.active) + " has inconsistent dimensions");
    }
    e.region = Polytope(std::move(T), std::move(d));
    cache.insert(std::move(e));
  }
  return cache;
}

void RegionCache::save(const std::filesystem::path& path, int n, int m) const {
  detail::write_text_file(path, to_json(n, m));
}

RegionCache RegionCache::load(const std::filesystem::path& path) {
  return from_json(detail::read_text_file(path));
}

}  // namespace rmpc
