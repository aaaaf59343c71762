#include "cxorder/order_stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cxorder/errors.hpp"
#include "cxorder/special_functions.hpp"

namespace cxorder {

Sample::Sample(std::vector<double> sorted) : values_(std::move(sorted)) {
  ties_ = std::adjacent_find(values_.begin(), values_.end()) != values_.end();
  if (ties_) {
    warnings_.emplace_back(
        "sample contains tied values; the test assumes a continuous distribution, "
        "ties were collapsed in the interpolated ECDF");
  }
}

Sample Sample::ingest(std::span<const double> raw) {
  if (raw.empty()) throw IngestError("sample is empty");
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) {
      throw IngestError("non-finite value at position " + std::to_string(i + 1));
    }
  }
  std::vector<double> sorted(raw.begin(), raw.end());
  std::sort(sorted.begin(), sorted.end());
  return Sample(std::move(sorted));
}

Sample Sample::from_sorted(std::vector<double> sorted) {
  if (sorted.empty()) throw IngestError("sample is empty");
  return Sample(std::move(sorted));
}

WeightVector os_weights(std::size_t n, int j, int m) {
  const BetaParams params(j, m);
  if (n == 0) throw DomainError("os_weights requires n >= 1");
  const double a = params.a();
  const double b = params.b();
  const double dn = static_cast<double>(n);

  // Below the midpoint use F(i/n); above it use the complement
  // 1 - F(i/n) = I_{(n-i)/n}(b, a) so tiny tail weights keep their digits.
  auto lower = [&](std::size_t i) { return reg_inc_beta(static_cast<double>(i) / dn, a, b); };
  auto upper = [&](std::size_t i) { return reg_inc_beta(static_cast<double>(n - i) / dn, b, a); };
  auto in_lower_half = [&](std::size_t i) { return 2 * i <= n; };

  WeightVector out{j, m, std::vector<double>(n)};
  double prev_lower = 0.0;
  double prev_upper = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    double w;
    if (in_lower_half(i)) {
      const double cur = lower(i);
      w = cur - prev_lower;
      prev_lower = cur;
    } else {
      const double cur = upper(i);
      w = in_lower_half(i - 1) ? (1.0 - cur) - prev_lower : prev_upper - cur;
      prev_upper = cur;
    }
    out.weights[i - 1] = std::max(w, 0.0);
  }
  return out;
}

double apply_weights(std::span<const double> sorted, std::span<const double> weights) {
  double sum = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) sum += sorted[i] * weights[i];
  return std::clamp(sum, sorted.front(), sorted.back());
}

double l_estimate(const Sample& s, int j, int m) {
  const auto w = os_weights(s.size(), j, m);
  return apply_weights(s.values(), w.weights);
}

InterpolatedEcdf::InterpolatedEcdf(std::span<const double> sorted) {
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double p = static_cast<double>(i + 1) / n;
    if (!x_.empty() && x_.back() == sorted[i]) {
      p_.back() = p;
    } else {
      x_.push_back(sorted[i]);
      p_.push_back(p);
    }
  }
}

double InterpolatedEcdf::operator()(double x) const {
  if (x <= x_.front()) return p_.front();
  if (x >= x_.back()) return p_.back();
  const auto k = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
  const double t = (x - x_[k - 1]) / (x_[k] - x_[k - 1]);
  return p_[k - 1] + t * (p_[k] - p_[k - 1]);
}

double interpolated_ecdf_at(std::span<const double> sorted, double x) {
  const double n = static_cast<double>(sorted.size());
  const auto u = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
  if (u == sorted.size()) return 1.0;
  // Knot of sorted[u], collapsed to its last duplicate.
  const auto right_rank = static_cast<std::size_t>(
      std::upper_bound(sorted.begin() + static_cast<std::ptrdiff_t>(u), sorted.end(), sorted[u]) - sorted.begin());
  const double right_p = static_cast<double>(right_rank) / n;
  if (u == 0) return right_p;
  const double left_p = static_cast<double>(u) / n;
  if (x == sorted[u - 1]) return left_p;
  const double t = (x - sorted[u - 1]) / (sorted[u] - sorted[u - 1]);
  return left_p + t * (right_p - left_p);
}

double PiBound::probability() const {
  if (kind == Kind::Undefined) throw SpecError("bound is undefined for this index");
  return value;
}

namespace {

// Classifies E G^{-1}(B_{j:m}) from G's tail indices. Returns nullopt when
// the expectation is finite.
std::optional<PiBound> trivial_bound(const RefFamily& g, int j, int m) {
  const TailInfo tails = tail_info(g);
  const bool right_diverges = static_cast<double>(m - j + 1) * tails.right <= 1.0;
  const bool left_diverges = static_cast<double>(j) * tails.left <= 1.0;
  if (right_diverges && left_diverges) return PiBound{PiBound::Kind::Undefined, 0.0};
  if (right_diverges) return PiBound{PiBound::Kind::TriviallyOne, 1.0};
  if (left_diverges) return PiBound{PiBound::Kind::TriviallyZero, 0.0};
  return std::nullopt;
}

// Smallest integer power q >= 1 with q (e + 1) >= 2, where u^e is the
// integrand's behaviour at the endpoint. Substituting u = t^q / 2 then
// leaves an integrand vanishing like t at t = 0.
double endpoint_power(double exponent) {
  return std::ceil(std::max(1.0, 2.0 / (exponent + 1.0)));
}

double expected_quantile(const RefFamily& g, const BetaParams& params) {
  const TailInfo tails = tail_info(g);
  const double j = params.a();
  const double m = params.a() + params.b() - 1.0;
  const double q_left = endpoint_power((j - 1.0) - 1.0 / tails.left);
  const double q_right = endpoint_power((m - j) - 1.0 / tails.right);

  // Where t^q underflows or the quantile overflows the true integrand is
  // already negligible (it vanishes like t), so such points contribute 0.
  auto finite_or_zero = [](double v) { return std::isfinite(v) ? v : 0.0; };

  auto left = [&](double t) {
    const double p = 0.5 * std::pow(t, q_left);
    if (p == 0.0) return 0.0;
    const double jac = 0.5 * q_left * std::pow(t, q_left - 1.0);
    return finite_or_zero(quantile(g, p) * beta_pdf(p, 1.0 - p, params) * jac);
  };
  auto right = [&](double t) {
    const double u = 0.5 * std::pow(t, q_right);
    if (u == 0.0) return 0.0;
    const double jac = 0.5 * q_right * std::pow(t, q_right - 1.0);
    return finite_or_zero(upper_quantile(g, u) * beta_pdf(1.0 - u, u, params) * jac);
  };

  const auto lo = integrate_01(left);
  const auto hi = integrate_01(right);
  if (!lo.converged || !hi.converged) {
    throw std::runtime_error("quadrature for the expected order statistic of " + g.key() +
                             " did not converge (j=" + std::to_string(params.j()) +
                             ", m=" + std::to_string(params.m()) + ")");
  }
  return lo.value + hi.value;
}

}  // namespace

PiBound pi_bound_quadrature(const RefFamily& g, int j, int m) {
  const BetaParams params(j, m);
  if (auto trivial = trivial_bound(g, j, m)) return *trivial;
  return PiBound{PiBound::Kind::Value, cdf(g, expected_quantile(g, params))};
}

PiBound pi_bound(const RefFamily& g, int j, int m) {
  const BetaParams params(j, m);
  if (auto trivial = trivial_bound(g, j, m)) return *trivial;
  switch (g.kind()) {
    case RefFamily::Kind::Uniform:
      return {PiBound::Kind::Value, static_cast<double>(j) / (m + 1)};
    case RefFamily::Kind::Exponential:
      return {PiBound::Kind::Value, -std::expm1(-partial_harmonic(m - j + 1, m))};
    case RefFamily::Kind::NegExponential:
      return {PiBound::Kind::Value, std::exp(-partial_harmonic(j, m))};
    case RefFamily::Kind::LogLogistic:
      if (g.shape() == 1.0) return {PiBound::Kind::Value, static_cast<double>(j) / m};
      break;
    default:
      break;
  }
  return pi_bound_quadrature(g, j, m);
}

HillResult hill_estimate(const Sample& s, std::optional<std::size_t> k) {
  const std::size_t n = s.size();
  const std::size_t kk = k.value_or(static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n)))));
  if (kk < 1 || kk >= n) throw DomainError("Hill estimator requires 1 <= k < n");
  const auto v = s.values();
  if (!(v.front() > 0.0)) throw DomainError("Hill estimator requires positive data");
  const double threshold = v[n - kk - 1];
  double sum = 0.0;
  for (std::size_t i = 1; i <= kk; ++i) sum += std::log(v[n - i] / threshold);
  if (!(sum > 0.0)) throw DomainError("Hill estimator is undefined when the top k + 1 values coincide");
  return {kk, static_cast<double>(kk) / sum};
}

}  // namespace cxorder
