#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cxorder/distributions.hpp"

namespace cxorder {

/// A sorted, finite data sample.
class Sample {
 public:
  /// Sorts and validates raw data. Throws IngestError on empty input or any
  /// NaN/infinite value. Duplicates set has_ties() and add a warning.
  static Sample ingest(std::span<const double> raw);

  /// Takes ownership of data known to be sorted and finite (the Monte Carlo
  /// path). Ties are still detected.
  static Sample from_sorted(std::vector<double> sorted);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool has_ties() const noexcept { return ties_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  explicit Sample(std::vector<double> sorted);

  std::vector<double> values_;
  bool ties_ = false;
  std::vector<std::string> warnings_;
};

/// P(U_{j:m} in ((i-1)/n, i/n]) for i = 1..n.
struct WeightVector {
  int j = 1;
  int m = 1;
  std::vector<double> weights;
};

/// Throws DomainError unless 1 <= j <= m and n >= 1.
WeightVector os_weights(std::size_t n, int j, int m);

/// Weighted sum of sorted values; the result is clamped to
/// [values.front(), values.back()].
double apply_weights(std::span<const double> sorted, std::span<const double> weights);

/// L-estimate of the expected order statistic E X_{j:m}.
double l_estimate(const Sample& s, int j, int m);

/// Continuous piecewise-linear interpolation of the ECDF jump points
/// (X_{i:n}, i/n), duplicates collapsed to the largest i/n. Constant at the
/// boundary knot values outside [X_{1:n}, X_{n:n}].
class InterpolatedEcdf {
 public:
  explicit InterpolatedEcdf(std::span<const double> sorted);
  explicit InterpolatedEcdf(const Sample& s) : InterpolatedEcdf(s.values()) {}

  double operator()(double x) const;
  std::span<const double> knot_x() const noexcept { return x_; }
  std::span<const double> knot_p() const noexcept { return p_; }

 private:
  std::vector<double> x_;
  std::vector<double> p_;
};

/// Evaluates the interpolated ECDF of sorted data at x without building the
/// knot table. Equivalent to InterpolatedEcdf(sorted)(x).
double interpolated_ecdf_at(std::span<const double> sorted, double x);

/// G(E G^{-1}(B_{j:m})), or the trivial bound when that expectation is
/// infinite, or Undefined when it does not exist.
struct PiBound {
  enum class Kind { Value, TriviallyZero, TriviallyOne, Undefined };
  Kind kind = Kind::Undefined;
  double value = 0.0;

  bool usable() const noexcept { return kind != Kind::Undefined; }
  /// Probability in [0, 1]; throws SpecError when Undefined.
  double probability() const;
};

/// Closed forms for the uniform, exponential, negative exponential and
/// standard log-logistic families; quadrature otherwise. Finiteness is
/// decided from the family's tail indices.
PiBound pi_bound(const RefFamily& g, int j, int m);

/// Always goes through quadrature of G^{-1}(p) f_{B_{j:m}}(p), even where a
/// closed form exists. Throws std::runtime_error if quadrature fails.
PiBound pi_bound_quadrature(const RefFamily& g, int j, int m);

struct HillResult {
  std::size_t k = 0;
  double alpha = 0.0;
};

/// Hill estimate of the right tail index from the k largest log-excesses.
/// Uses k = floor(sqrt(n)) when k is not given. Throws DomainError for
/// k outside [1, n) or any non-positive value.
HillResult hill_estimate(const Sample& s, std::optional<std::size_t> k = std::nullopt);

}  // namespace cxorder
