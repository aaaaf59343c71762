#include "cxorder/null_cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cxorder/rng.hpp"

namespace cxorder {

namespace {

std::filesystem::path cache_file(const std::string& key) {
  const char* dir = std::getenv("CXORDER_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return {};
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.null", static_cast<unsigned long long>(hash_string(key)));
  return std::filesystem::path(dir) / name;
}

// File layout: key line, then "columns rows", then one value per line.
std::shared_ptr<const NullTable> load(const std::filesystem::path& path, const std::string& key) {
  std::ifstream in(path);
  if (!in) return nullptr;
  std::string stored_key;
  std::getline(in, stored_key);
  if (stored_key != key) return nullptr;
  std::size_t columns = 0;
  std::size_t rows = 0;
  if (!(in >> columns >> rows)) return nullptr;
  auto table = std::make_shared<NullTable>(columns, std::vector<double>(rows));
  for (auto& column : *table) {
    for (auto& v : column) {
      if (!(in >> v)) return nullptr;
    }
  }
  return table;
}

void store(const std::filesystem::path& path, const std::string& key, const NullTable& table) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << key << '\n' << table.size() << ' ' << (table.empty() ? 0 : table.front().size()) << '\n';
    out << std::setprecision(17);
    for (const auto& column : table) {
      for (double v : column) out << v << '\n';
    }
  }
  std::filesystem::rename(tmp, path, ec);
}

}  // namespace

std::shared_ptr<const NullTable> NullCache::get_or_compute(const std::string& key,
                                                          const std::function<NullTable()>& compute) {
  std::promise<std::shared_ptr<const NullTable>> promise;
  std::shared_future<std::shared_ptr<const NullTable>> pending;
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      pending = it->second;
    } else {
      entries_.emplace(key, promise.get_future().share());
    }
  }
  if (pending.valid()) return pending.get();
  try {
    const auto path = cache_file(key);
    std::shared_ptr<const NullTable> table = path.empty() ? nullptr : load(path, key);
    if (!table) {
      auto fresh = std::make_shared<const NullTable>(compute());
      if (!path.empty()) store(path, key, *fresh);
      table = std::move(fresh);
    }
    promise.set_value(table);
    return table;
  } catch (...) {
    {
      std::lock_guard lock(mutex_);
      entries_.erase(key);
    }
    promise.set_exception(std::current_exception());
    throw;
  }
}

void NullCache::clear() {
  std::lock_guard lock(mutex_);
  entries_.clear();
}

std::size_t NullCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

NullCache& null_cache() {
  static NullCache cache;
  return cache;
}

}  // namespace cxorder
