#pragma once

#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace cxorder {

/// Simulated null statistics, one sorted column per statistic.
using NullTable = std::vector<std::vector<double>>;

/// Process-wide map from a null-distribution key to its simulated table.
/// Each key is computed once; concurrent requests for the same key wait on
/// the first. When the CXORDER_CACHE_DIR environment variable names a
/// directory, tables are also read from and written to files there.
class NullCache {
 public:
  std::shared_ptr<const NullTable> get_or_compute(const std::string& key,
                                                  const std::function<NullTable()>& compute);
  void clear();
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_future<std::shared_ptr<const NullTable>>> entries_;
};

NullCache& null_cache();

}  // namespace cxorder
