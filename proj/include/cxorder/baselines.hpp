#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cxorder/order_stats.hpp"
#include "cxorder/testing.hpp"

namespace cxorder {

/// Proschan-Pyke exponentiality test against monotone hazard rates.
enum class PPSide { IHR, DHR };

std::string to_string(PPSide side);
PPSide parse_pp_side(std::string_view text);

/// D_i = (n - i)(X_{i+1:n} - X_{i:n}) for i = 1..n-1, ordered from the
/// bottom of the sample. IHR data make D_i stochastically decreasing in i.
struct SpacingsVector {
  std::vector<double> values;
};

/// Throws DomainError for n < 2.
SpacingsVector normalized_spacings(const Sample& s);
SpacingsVector normalized_spacings(std::span<const double> sorted);

/// #{(i, j): i < j, D_i > D_j}. O(n log n) by merge counting.
std::int64_t pp_statistic(const SpacingsVector& d);

/// #{(i, j): i < j, D_i < D_j}, the statistic of the DHR side.
std::int64_t pp_statistic_reversed(const SpacingsVector& d);

struct PPOptions {
  double sig_level = 0.1;
  int mc_trials = 5000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

/// Simulated null counts (columns: IHR count, DHR count) for standard
/// exponential samples of size n, sorted. Cached per (n, trials, seed).
std::shared_ptr<const NullTable> pp_null_distribution(std::size_t n, const PPOptions& options);

/// Rejects for large counts on the requested side. Throws DomainError for
/// n < 3.
TestResult pp_test(const Sample& s, PPSide side, const PPOptions& options);

}  // namespace cxorder
