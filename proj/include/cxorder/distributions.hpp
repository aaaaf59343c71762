#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cxorder/rng.hpp"

namespace cxorder {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Extreme-value tail indices. `right` is alpha for the max-domain of
/// attraction of the Frechet law, `left` is beta for the min-domain; +inf
/// marks a tail with every moment finite.
struct TailInfo {
  double right = kInf;
  double left = kInf;
};

/// User-supplied reference distribution.
struct CustomFamily {
  std::string name = "custom";
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;
  /// Declared tail indices; both must be set (positive or +inf).
  double right_index = 0.0;
  double left_index = 0.0;
  double support_lo = -kInf;
  double support_hi = kInf;
};

/// Standard member G of a location-scale null family.
class RefFamily {
 public:
  enum class Kind { Uniform, Exponential, NegExponential, LogLogistic, Logistic, Frechet, Cauchy, Custom };

  static RefFamily uniform() { return RefFamily(Kind::Uniform, 0.0); }
  static RefFamily exponential() { return RefFamily(Kind::Exponential, 0.0); }
  static RefFamily neg_exponential() { return RefFamily(Kind::NegExponential, 0.0); }
  /// CDF x^a / (1 + x^a) on x > 0.
  static RefFamily log_logistic(double shape = 1.0);
  static RefFamily logistic() { return RefFamily(Kind::Logistic, 0.0); }
  /// CDF exp(-x^-alpha) on x > 0.
  static RefFamily frechet(double alpha);
  static RefFamily cauchy() { return RefFamily(Kind::Cauchy, 0.0); }
  static RefFamily custom(CustomFamily family);

  /// Parses `uniform|exponential|neg-exponential|log-logistic[:a]|logistic|
  /// frechet:alpha|cauchy`. Throws ConfigError on anything else.
  static RefFamily parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  /// Shape parameter for LogLogistic and Frechet, 0 otherwise.
  double shape() const noexcept { return shape_; }
  /// Canonical name, e.g. "log-logistic".
  std::string name() const;
  /// Parameter list (empty for parameter-free kinds).
  std::vector<double> params() const;
  /// Name plus parameters; round-trips through parse() for built-in kinds.
  std::string key() const;
  const CustomFamily* custom_family() const noexcept { return custom_.get(); }

 private:
  RefFamily(Kind kind, double shape) : kind_(kind), shape_(shape) {}

  Kind kind_;
  double shape_;
  std::shared_ptr<const CustomFamily> custom_;
};

double cdf(const RefFamily& g, double x);

/// Generalised inverse of the CDF. p = 0 and p = 1 give the support
/// endpoints (possibly infinite). Throws DomainError outside [0, 1].
double quantile(const RefFamily& g, double p);

/// G^{-1}(1 - u), evaluated without forming 1 - u where a closed form
/// allows it. Used for upper-tail integrals.
double upper_quantile(const RefFamily& g, double u);

/// n iid draws by inversion, one uniform per draw.
std::vector<double> sample(const RefFamily& g, std::size_t n, Engine& rng);

/// Writes n draws into `out` (resized), reusing its storage.
void sample_into(const RefFamily& g, std::size_t n, Engine& rng, std::vector<double>& out);

/// Throws ConfigError for a Custom family without declared indices.
TailInfo tail_info(const RefFamily& g);

/// Families used to generate alternatives in power studies.
struct Alternative {
  enum class Kind { Weibull, LogLogistic, NegWeibull, StudentT, ShiftedExponential };
  Kind kind;
  /// Shape a, degrees of freedom nu, or shift delta.
  double param;

  static Alternative weibull(double a) { return {Kind::Weibull, a}; }
  static Alternative log_logistic(double a) { return {Kind::LogLogistic, a}; }
  static Alternative neg_weibull(double a) { return {Kind::NegWeibull, a}; }
  static Alternative student_t(double nu) { return {Kind::StudentT, nu}; }
  static Alternative shifted_exponential(double delta) { return {Kind::ShiftedExponential, delta}; }

  /// "weibull", "log-logistic", "neg-weibull", "student-t", "shifted-exponential".
  std::string name() const;
  /// Parses one of the names above; the parameter is supplied separately.
  static Kind parse_kind(std::string_view text);
};

/// n iid draws. Weibull, log-logistic, their negatives and the shifted
/// exponential use one uniform per draw via inversion; Student t uses a
/// standard normal over the root of a scaled chi-square. Throws DomainError
/// for invalid parameters.
std::vector<double> alt_sample(const Alternative& alt, std::size_t n, Engine& rng);

void alt_sample_into(const Alternative& alt, std::size_t n, Engine& rng, std::vector<double>& out);

/// CDF of the alternative, used by calibration tests.
double alt_cdf(const Alternative& alt, double x);

}  // namespace cxorder
