#include "cxorder/baselines.hpp"

#include <algorithm>
#include <sstream>

#include "cxorder/errors.hpp"
#include "cxorder/parallel.hpp"
#include "cxorder/rng.hpp"

namespace cxorder {

namespace {

constexpr std::uint64_t kPPNullStream = 0x70706e756c6cULL;  // "ppnull"

// Counts pairs i < j with a[i] > a[j]; sorts `a` as a side effect.
std::int64_t count_strict_inversions(std::vector<double>& a, std::vector<double>& scratch) {
  const std::size_t n = a.size();
  scratch.resize(n);
  std::int64_t count = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo;
      std::size_t j = mid;
      std::size_t k = lo;
      while (i < mid && j < hi) {
        if (a[j] < a[i]) {
          count += static_cast<std::int64_t>(mid - i);
          scratch[k++] = a[j++];
        } else {
          scratch[k++] = a[i++];
        }
      }
      while (i < mid) scratch[k++] = a[i++];
      while (j < hi) scratch[k++] = a[j++];
    }
    a.swap(scratch);
  }
  return count;
}

}  // namespace

std::string to_string(PPSide side) { return side == PPSide::IHR ? "ihr" : "dhr"; }

PPSide parse_pp_side(std::string_view text) {
  if (text == "ihr") return PPSide::IHR;
  if (text == "dhr") return PPSide::DHR;
  throw ConfigError("side must be ihr or dhr (got '" + std::string(text) + "')");
}

SpacingsVector normalized_spacings(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  if (n < 2) throw DomainError("normalized spacings need at least 2 observations");
  SpacingsVector d;
  d.values.resize(n - 1);
  // Spacing i sits between X_{i:n} and X_{i+1:n}; n - i observations lie
  // above it. Under exponentiality these are iid standard exponential.
  for (std::size_t i = 1; i <= n - 1; ++i) {
    d.values[i - 1] = static_cast<double>(n - i) * (sorted[i] - sorted[i - 1]);
  }
  return d;
}

SpacingsVector normalized_spacings(const Sample& s) { return normalized_spacings(s.values()); }

std::int64_t pp_statistic(const SpacingsVector& d) {
  std::vector<double> work = d.values;
  std::vector<double> scratch;
  return count_strict_inversions(work, scratch);
}

std::int64_t pp_statistic_reversed(const SpacingsVector& d) {
  std::vector<double> work(d.values.size());
  std::transform(d.values.begin(), d.values.end(), work.begin(), [](double v) { return -v; });
  std::vector<double> scratch;
  return count_strict_inversions(work, scratch);
}

std::shared_ptr<const NullTable> pp_null_distribution(std::size_t n, const PPOptions& options) {
  if (n < 3) throw DomainError("the Proschan-Pyke test needs at least 3 observations");
  if (options.mc_trials < 100) throw SpecError("at least 100 Monte Carlo trials are required");
  std::ostringstream key;
  key << "proschan-pyke|n=" << n << "|trials=" << options.mc_trials << "|seed=" << options.seed;
  return null_cache().get_or_compute(key.str(), [&] {
    const auto trials = static_cast<std::size_t>(options.mc_trials);
    NullTable table(2, std::vector<double>(trials));
    const std::uint64_t seed = derive_seed(options.seed, kPPNullStream);
    const RefFamily exponential = RefFamily::exponential();
    parallel_for(trials, options.threads, [&](std::size_t begin, std::size_t end) {
      std::vector<double> buffer;
      for (std::size_t t = begin; t < end; ++t) {
        Engine rng = stream_engine(seed, t);
        sample_into(exponential, n, rng, buffer);
        std::sort(buffer.begin(), buffer.end());
        const auto d = normalized_spacings(buffer);
        table[0][t] = static_cast<double>(pp_statistic(d));
        table[1][t] = static_cast<double>(pp_statistic_reversed(d));
      }
    });
    for (auto& column : table) std::sort(column.begin(), column.end());
    return table;
  });
}

TestResult pp_test(const Sample& s, PPSide side, const PPOptions& options) {
  if (s.size() < 3) throw DomainError("the Proschan-Pyke test needs at least 3 observations");
  if (!(options.sig_level > 0.0 && options.sig_level < 1.0)) {
    throw SpecError("significance level must be in (0, 1)");
  }
  const auto d = normalized_spacings(s);
  const double v = static_cast<double>(side == PPSide::IHR ? pp_statistic(d) : pp_statistic_reversed(d));
  const auto table = pp_null_distribution(s.size(), options);
  const auto& null = (*table)[side == PPSide::IHR ? 0 : 1];

  TestResult r;
  r.test = "proschan-pyke";
  r.side = side == PPSide::IHR ? Side::Upper : Side::Lower;
  r.statistic = v;
  r.critical_value = empirical_critical_value(null, options.sig_level);
  r.p_value = add_one_p_value(null, v);
  // Counts are discrete; reject only strictly above the null quantile.
  r.reject = v > r.critical_value;
  r.n = s.size();
  r.spec.g = RefFamily::exponential();
  r.spec.m = 0;
  r.spec.side = r.side;
  r.spec.sig_level = options.sig_level;
  r.spec.mc_trials = options.mc_trials;
  r.spec.seed = options.seed;
  r.spec.threads = options.threads;
  r.warnings = s.warnings();
  return r;
}

}  // namespace cxorder
