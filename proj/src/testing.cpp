#include "cxorder/testing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cxorder/errors.hpp"
#include "cxorder/parallel.hpp"
#include "cxorder/rng.hpp"

namespace cxorder {

namespace {

constexpr std::uint64_t kNullStream = 0x6e756c6c;  // "null"

std::string describe(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::string null_key(const TestSpec& spec, const std::vector<int>& indices, std::size_t n) {
  std::ostringstream os;
  os.precision(17);
  os << "convex-order|g=" << spec.g.key() << "|n=" << n << "|m=" << spec.m << "|p=" << spec.p_norm
     << "|idx=" << describe(indices) << "|trials=" << spec.mc_trials << "|seed=" << spec.seed;
  return os.str();
}

}  // namespace

std::string to_string(Side side) {
  switch (side) {
    case Side::Upper: return "upper";
    case Side::Lower: return "lower";
    case Side::Both: return "both";
  }
  return "unknown";
}

Side parse_side(std::string_view text) {
  if (text == "upper") return Side::Upper;
  if (text == "lower") return Side::Lower;
  if (text == "both") return Side::Both;
  throw ConfigError("side must be upper, lower or both (got '" + std::string(text) + "')");
}

int default_m(std::size_t n) {
  return std::max(1, static_cast<int>(std::ceil(0.15 * static_cast<double>(n))));
}

std::vector<int> select_indices(const RefFamily& g, int m, int ell, const TailInfo& assumed) {
  if (m < 1) throw SpecError("m must be at least 1");
  if (ell < 1 || ell > m) throw SpecError("ell must satisfy 1 <= ell <= m");
  const TailInfo own = tail_info(g);
  const double alpha = std::min(own.right, assumed.right);
  const double beta = std::min(own.left, assumed.left);

  std::vector<int> eligible;
  bool right_binds = false;
  bool left_binds = false;
  for (int j = 1; j <= m; ++j) {
    const bool right_ok = static_cast<double>(m + 1 - j) * alpha > 1.0;
    const bool left_ok = static_cast<double>(j) * beta > 1.0;
    right_binds |= !right_ok;
    left_binds |= !left_ok;
    if (right_ok && left_ok && pi_bound(g, j, m).usable()) eligible.push_back(j);
  }
  if (static_cast<int>(eligible.size()) < ell) {
    throw SpecError("only " + std::to_string(eligible.size()) + " tail-eligible ranks for m=" +
                    std::to_string(m) + ", cannot pick ell=" + std::to_string(ell));
  }
  const auto count = static_cast<std::ptrdiff_t>(ell);
  if (right_binds && !left_binds) return {eligible.begin(), eligible.begin() + count};
  if (left_binds && !right_binds) return {eligible.end() - count, eligible.end()};

  const double centre = 0.5 * (eligible.front() + eligible.back());
  std::stable_sort(eligible.begin(), eligible.end(),
                   [centre](int a, int b) { return std::fabs(a - centre) < std::fabs(b - centre); });
  eligible.resize(static_cast<std::size_t>(ell));
  std::sort(eligible.begin(), eligible.end());
  return eligible;
}

void validate_spec(const TestSpec& spec) {
  if (spec.m < 1) throw SpecError("m must be at least 1");
  if (!(spec.p_norm >= 1.0)) throw SpecError("p must be in [1, inf]");
  if (!(spec.sig_level > 0.0 && spec.sig_level < 1.0)) throw SpecError("significance level must be in (0, 1)");
  if (spec.mc_trials < 100) throw SpecError("at least 100 Monte Carlo trials are required");
}

std::vector<int> resolve_indices(const TestSpec& spec) {
  validate_spec(spec);
  std::vector<int> indices;
  if (std::holds_alternative<AutoIndices>(spec.indices)) {
    const auto& a = std::get<AutoIndices>(spec.indices);
    return select_indices(spec.g, spec.m, a.ell, a.assumed);
  }
  if (std::holds_alternative<std::vector<int>>(spec.indices)) {
    indices = std::get<std::vector<int>>(spec.indices);
    if (indices.empty()) throw SpecError("index list is empty");
    for (std::size_t k = 0; k < indices.size(); ++k) {
      if (indices[k] < 1 || indices[k] > spec.m) throw SpecError("index " + std::to_string(indices[k]) + " outside 1..m");
      if (k > 0 && indices[k] <= indices[k - 1]) throw SpecError("indices must be strictly increasing");
    }
  } else {
    indices.resize(static_cast<std::size_t>(spec.m));
    std::iota(indices.begin(), indices.end(), 1);
  }
  for (int j : indices) {
    if (!pi_bound(spec.g, j, spec.m).usable()) {
      throw SpecError("bound for j=" + std::to_string(j) + ", m=" + std::to_string(spec.m) + " under " +
                      spec.g.key() + " is undefined; exclude this index");
    }
  }
  return indices;
}

StatisticEvaluator::StatisticEvaluator(const RefFamily& g, int m, std::vector<int> indices, double p_norm,
                                       std::size_t n)
    : n_(n), p_norm_(p_norm), indices_(std::move(indices)) {
  if (n == 0) throw DomainError("sample size must be at least 1");
  pis_.reserve(indices_.size());
  weights_.reserve(indices_.size());
  for (int j : indices_) {
    const auto bound = pi_bound(g, j, m);
    if (!bound.usable()) throw SpecError("bound for j=" + std::to_string(j) + " is undefined");
    pis_.push_back(bound.value);
    weights_.push_back(os_weights(n, j, m).weights);
  }
}

double StatisticEvaluator::norm(std::span<const double> parts) const {
  if (std::isinf(p_norm_)) return parts.empty() ? 0.0 : *std::max_element(parts.begin(), parts.end());
  if (p_norm_ == 1.0) return std::accumulate(parts.begin(), parts.end(), 0.0);
  double sum = 0.0;
  for (double v : parts) sum += std::pow(v, p_norm_);
  return std::pow(sum, 1.0 / p_norm_);
}

std::pair<double, double> StatisticEvaluator::evaluate(std::span<const double> sorted) const {
  if (sorted.size() != n_) throw DomainError("sample size does not match the evaluator");
  // Same arithmetic as norm() over the parts, without the diagnostics.
  const bool sup = std::isinf(p_norm_);
  double upper = 0.0;
  double lower = 0.0;
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    const double mu = apply_weights(sorted, weights_[k]);
    const double gap = pis_[k] - interpolated_ecdf_at(sorted, mu);
    const double pos = std::max(gap, 0.0);
    const double neg = std::max(-gap, 0.0);
    if (sup) {
      upper = std::max(upper, pos);
      lower = std::max(lower, neg);
    } else if (p_norm_ == 1.0) {
      upper += pos;
      lower += neg;
    } else {
      upper += std::pow(pos, p_norm_);
      lower += std::pow(neg, p_norm_);
    }
  }
  if (!sup && p_norm_ != 1.0) {
    upper = std::pow(upper, 1.0 / p_norm_);
    lower = std::pow(lower, 1.0 / p_norm_);
  }
  return {upper, lower};
}

StatisticValue StatisticEvaluator::evaluate_detailed(std::span<const double> sorted) const {
  if (sorted.size() != n_) throw DomainError("sample size does not match the evaluator");
  StatisticValue out;
  out.per_index.reserve(indices_.size());
  std::vector<double> pos(indices_.size());
  std::vector<double> neg(indices_.size());
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    const double mu = apply_weights(sorted, weights_[k]);
    const double f = interpolated_ecdf_at(sorted, mu);
    const double gap = pis_[k] - f;
    pos[k] = std::max(gap, 0.0);
    neg[k] = std::max(-gap, 0.0);
    out.per_index.push_back({indices_[k], pis_[k], mu, f, gap});
  }
  out.upper = norm(pos);
  out.lower = norm(neg);
  return out;
}

StatisticValue statistic(const Sample& s, const TestSpec& spec) {
  const StatisticEvaluator evaluator(spec.g, spec.m, resolve_indices(spec), spec.p_norm, s.size());
  return evaluator.evaluate_detailed(s.values());
}

double empirical_critical_value(std::span<const double> sorted_null, double sig_level) {
  if (sorted_null.empty()) throw DomainError("empty null distribution");
  const double n = static_cast<double>(sorted_null.size());
  // The small offset keeps exact products such as 0.9 * 5000 from rounding up.
  auto rank = static_cast<std::size_t>(std::ceil((1.0 - sig_level) * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted_null.size());
  return sorted_null[rank - 1];
}

double add_one_p_value(std::span<const double> sorted_null, double t_obs) {
  const auto at_least = static_cast<double>(
      sorted_null.end() - std::lower_bound(sorted_null.begin(), sorted_null.end(), t_obs));
  return (1.0 + at_least) / (static_cast<double>(sorted_null.size()) + 1.0);
}

std::shared_ptr<const NullTable> null_distribution(const TestSpec& spec, std::size_t n) {
  const auto indices = resolve_indices(spec);
  return null_cache().get_or_compute(null_key(spec, indices, n), [&] {
    const StatisticEvaluator evaluator(spec.g, spec.m, indices, spec.p_norm, n);
    const auto trials = static_cast<std::size_t>(spec.mc_trials);
    NullTable table(2, std::vector<double>(trials));
    const std::uint64_t seed = derive_seed(spec.seed, kNullStream);
    parallel_for(trials, spec.threads, [&](std::size_t begin, std::size_t end) {
      std::vector<double> buffer;
      for (std::size_t t = begin; t < end; ++t) {
        Engine rng = stream_engine(seed, t);
        sample_into(spec.g, n, rng, buffer);
        std::sort(buffer.begin(), buffer.end());
        const auto [upper, lower] = evaluator.evaluate(buffer);
        table[0][t] = upper;
        table[1][t] = lower;
      }
    });
    for (auto& column : table) std::sort(column.begin(), column.end());
    return table;
  });
}

double critical_value(const TestSpec& spec, std::size_t n, Side side) {
  if (side == Side::Both) throw SpecError("critical_value needs a single side");
  const auto table = null_distribution(spec, n);
  return empirical_critical_value((*table)[side == Side::Lower ? 1 : 0], spec.sig_level);
}

double p_value(const TestSpec& spec, double t_obs, std::size_t n, Side side) {
  if (side == Side::Both) throw SpecError("p_value needs a single side");
  const auto table = null_distribution(spec, n);
  return add_one_p_value((*table)[side == Side::Lower ? 1 : 0], t_obs);
}

std::vector<TestResult> run_test(const Sample& s, const TestSpec& spec) {
  const auto indices = resolve_indices(spec);
  const StatisticEvaluator evaluator(spec.g, spec.m, indices, spec.p_norm, s.size());
  const auto value = evaluator.evaluate_detailed(s.values());
  const auto table = null_distribution(spec, s.size());

  std::vector<Side> sides;
  if (spec.side == Side::Both) {
    sides = {Side::Upper, Side::Lower};
  } else {
    sides = {spec.side};
  }
  std::vector<TestResult> results;
  for (Side side : sides) {
    const auto& null = (*table)[side == Side::Lower ? 1 : 0];
    TestResult r;
    r.side = side;
    r.statistic = value.for_side(side);
    r.critical_value = empirical_critical_value(null, spec.sig_level);
    r.p_value = add_one_p_value(null, r.statistic);
    r.reject = r.statistic >= r.critical_value;
    r.n = s.size();
    r.indices = indices;
    r.per_index = value.per_index;
    r.spec = spec;
    r.warnings = s.warnings();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace cxorder
