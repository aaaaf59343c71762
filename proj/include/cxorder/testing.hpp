#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cxorder/distributions.hpp"
#include "cxorder/null_cache.hpp"
#include "cxorder/order_stats.hpp"

namespace cxorder {

/// Upper tests F strictly smaller than G in the convex transform order
/// (e.g. IHR for exponential G); Lower tests the reverse.
enum class Side { Upper, Lower, Both };

std::string to_string(Side side);
Side parse_side(std::string_view text);

/// Pick `ell` tail-eligible ranks automatically, given tail indices assumed
/// for the data distribution.
struct AutoIndices {
  int ell = 1;
  TailInfo assumed;
};

/// All ranks 1..m, an explicit ascending list, or automatic selection.
using IndexChoice = std::variant<std::monostate, std::vector<int>, AutoIndices>;

struct TestSpec {
  RefFamily g = RefFamily::exponential();
  int m = 5;
  /// Order of the norm, in [1, inf].
  double p_norm = 1.0;
  Side side = Side::Upper;
  IndexChoice indices;
  double sig_level = 0.1;
  int mc_trials = 5000;
  std::uint64_t seed = 0;
  /// Worker count for Monte Carlo loops; 0 means hardware concurrency.
  unsigned threads = 0;
};

/// m = ceil(0.15 n), the middle of the 10-20% range that worked best for
/// the IHR and IOR power studies.
int default_m(std::size_t n);

/// Ranks j with j > 1/beta and j < m + 1 - 1/alpha, where alpha and beta are
/// the heavier of G's and the assumed tails, and with a defined bound. Takes
/// the ell smallest when only the right tail constrains, the ell largest
/// when only the left does, and the ell most central otherwise. Throws
/// SpecError when fewer than ell ranks qualify.
std::vector<int> select_indices(const RefFamily& g, int m, int ell, const TailInfo& assumed);

/// Concrete ranks for a spec, validated. Throws SpecError on invalid specs.
std::vector<int> resolve_indices(const TestSpec& spec);

/// Throws SpecError when the spec fields are out of range.
void validate_spec(const TestSpec& spec);

struct IndexDiagnostic {
  int j = 0;
  double pi = 0.0;
  double mu_hat = 0.0;
  double ecdf_at_mu = 0.0;
  /// pi - ecdf_at_mu
  double gap = 0.0;
};

struct StatisticValue {
  double upper = 0.0;
  double lower = 0.0;
  std::vector<IndexDiagnostic> per_index;

  double for_side(Side side) const { return side == Side::Lower ? lower : upper; }
};

/// Norm of the positive (Upper) and negative (Lower) parts of the gaps,
/// with the L-estimator weights and bounds precomputed for one sample size.
class StatisticEvaluator {
 public:
  StatisticEvaluator(const RefFamily& g, int m, std::vector<int> indices, double p_norm, std::size_t n);

  /// `sorted` must hold exactly n ascending values. Returns (upper, lower).
  std::pair<double, double> evaluate(std::span<const double> sorted) const;
  StatisticValue evaluate_detailed(std::span<const double> sorted) const;

  std::size_t n() const noexcept { return n_; }
  std::span<const int> indices() const noexcept { return indices_; }
  std::span<const double> bounds() const noexcept { return pis_; }

 private:
  double norm(std::span<const double> parts) const;

  std::size_t n_;
  double p_norm_;
  std::vector<int> indices_;
  std::vector<double> pis_;
  std::vector<std::vector<double>> weights_;
};

StatisticValue statistic(const Sample& s, const TestSpec& spec);

/// The ceil((1 - sig_level) N)-th smallest of N sorted null statistics.
double empirical_critical_value(std::span<const double> sorted_null, double sig_level);

/// (1 + #{null >= t_obs}) / (N + 1).
double add_one_p_value(std::span<const double> sorted_null, double t_obs);

/// Simulated null statistics (columns: upper, lower) for samples of size n
/// from the standard G. Cached per (G, n, m, p, indices, trials, seed).
std::shared_ptr<const NullTable> null_distribution(const TestSpec& spec, std::size_t n);

/// Critical value for one side (Upper or Lower).
double critical_value(const TestSpec& spec, std::size_t n, Side side);

double p_value(const TestSpec& spec, double t_obs, std::size_t n, Side side);

struct TestResult {
  std::string test = "convex-order";
  Side side = Side::Upper;
  double statistic = 0.0;
  double critical_value = 0.0;
  double p_value = 1.0;
  bool reject = false;
  std::size_t n = 0;
  std::vector<int> indices;
  std::vector<IndexDiagnostic> per_index;
  TestSpec spec;
  std::vector<std::string> warnings;
};

/// One result, or two (Upper then Lower) for Side::Both.
std::vector<TestResult> run_test(const Sample& s, const TestSpec& spec);

}  // namespace cxorder
