#include "cxorder/distributions.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cxorder/errors.hpp"
#include "cxorder/special_functions.hpp"

namespace cxorder {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be a positive finite number");
  }
}

void require_index(double value, const char* what) {
  if (!(value > 0.0)) throw ConfigError(std::string("custom family needs a declared ") + what + " (> 0 or inf)");
}

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ConfigError("invalid number '" + std::string(text) + "'");
  return value;
}

std::string format_param(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Inversion shared by quantile() and the sampler; p is in (0, 1).
double invert(const RefFamily& g, double p) {
  switch (g.kind()) {
    case RefFamily::Kind::Uniform:
      return p;
    case RefFamily::Kind::Exponential:
      return -std::log1p(-p);
    case RefFamily::Kind::NegExponential:
      return std::log(p);
    case RefFamily::Kind::LogLogistic:
      return std::pow(p / (1.0 - p), 1.0 / g.shape());
    case RefFamily::Kind::Logistic:
      return std::log(p) - std::log1p(-p);
    case RefFamily::Kind::Frechet:
      return std::pow(-std::log(p), -1.0 / g.shape());
    case RefFamily::Kind::Cauchy:
      return std::tan(kPi * (p - 0.5));
    case RefFamily::Kind::Custom:
      return g.custom_family()->quantile(p);
  }
  return std::nan("");
}

double weibull_inverse(double u, double shape) { return std::pow(-std::log1p(-u), 1.0 / shape); }

void validate(const Alternative& alt) {
  switch (alt.kind) {
    case Alternative::Kind::Weibull:
    case Alternative::Kind::LogLogistic:
    case Alternative::Kind::NegWeibull:
      require_positive(alt.param, "shape parameter");
      break;
    case Alternative::Kind::StudentT:
      require_positive(alt.param, "degrees of freedom");
      break;
    case Alternative::Kind::ShiftedExponential:
      if (!std::isfinite(alt.param)) throw DomainError("shift must be finite");
      break;
  }
}

}  // namespace

RefFamily RefFamily::log_logistic(double shape) {
  require_positive(shape, "log-logistic shape");
  return RefFamily(Kind::LogLogistic, shape);
}

RefFamily RefFamily::frechet(double alpha) {
  require_positive(alpha, "Frechet shape");
  return RefFamily(Kind::Frechet, alpha);
}

RefFamily RefFamily::custom(CustomFamily family) {
  if (!family.cdf || !family.quantile) throw ConfigError("custom family needs both a CDF and a quantile function");
  require_index(family.right_index, "right tail index");
  require_index(family.left_index, "left tail index");
  RefFamily g(Kind::Custom, 0.0);
  g.custom_ = std::make_shared<const CustomFamily>(std::move(family));
  return g;
}

RefFamily RefFamily::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const bool has_param = colon != std::string_view::npos;
  const double param = has_param ? parse_number(text.substr(colon + 1)) : 0.0;
  auto no_param = [&](RefFamily g) {
    if (has_param) throw ConfigError("family '" + std::string(head) + "' takes no parameter");
    return g;
  };
  try {
    if (head == "uniform") return no_param(uniform());
    if (head == "exponential") return no_param(exponential());
    if (head == "neg-exponential") return no_param(neg_exponential());
    if (head == "logistic") return no_param(logistic());
    if (head == "cauchy") return no_param(cauchy());
    if (head == "log-logistic") return log_logistic(has_param ? param : 1.0);
    if (head == "frechet") {
      if (!has_param) throw ConfigError("frechet needs a shape, e.g. frechet:2");
      return frechet(param);
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown reference family '" + std::string(text) + "'");
}

std::string RefFamily::name() const {
  switch (kind_) {
    case Kind::Uniform: return "uniform";
    case Kind::Exponential: return "exponential";
    case Kind::NegExponential: return "neg-exponential";
    case Kind::LogLogistic: return "log-logistic";
    case Kind::Logistic: return "logistic";
    case Kind::Frechet: return "frechet";
    case Kind::Cauchy: return "cauchy";
    case Kind::Custom: return custom_->name;
  }
  return "unknown";
}

std::vector<double> RefFamily::params() const {
  if (kind_ == Kind::LogLogistic || kind_ == Kind::Frechet) return {shape_};
  return {};
}

std::string RefFamily::key() const {
  if (kind_ == Kind::LogLogistic || kind_ == Kind::Frechet) return name() + ":" + format_param(shape_);
  if (kind_ == Kind::Custom) return "custom:" + custom_->name;
  return name();
}

double cdf(const RefFamily& g, double x) {
  switch (g.kind()) {
    case RefFamily::Kind::Uniform:
      return std::clamp(x, 0.0, 1.0);
    case RefFamily::Kind::Exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-x);
    case RefFamily::Kind::NegExponential:
      return x >= 0.0 ? 1.0 : std::exp(x);
    case RefFamily::Kind::LogLogistic: {
      if (x <= 0.0) return 0.0;
      const double t = std::pow(x, g.shape());
      return std::isinf(t) ? 1.0 : t / (1.0 + t);
    }
    case RefFamily::Kind::Logistic:
      return 1.0 / (1.0 + std::exp(-x));
    case RefFamily::Kind::Frechet:
      return x <= 0.0 ? 0.0 : std::exp(-std::pow(x, -g.shape()));
    case RefFamily::Kind::Cauchy:
      return 0.5 + std::atan(x) / kPi;
    case RefFamily::Kind::Custom:
      return g.custom_family()->cdf(x);
  }
  return std::nan("");
}

double quantile(const RefFamily& g, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile requires p in [0, 1]");
  if (p == 0.0 || p == 1.0) {
    switch (g.kind()) {
      case RefFamily::Kind::Uniform: return p;
      case RefFamily::Kind::Exponential:
      case RefFamily::Kind::LogLogistic:
      case RefFamily::Kind::Frechet: return p == 0.0 ? 0.0 : kInf;
      case RefFamily::Kind::NegExponential: return p == 0.0 ? -kInf : 0.0;
      case RefFamily::Kind::Logistic:
      case RefFamily::Kind::Cauchy: return p == 0.0 ? -kInf : kInf;
      case RefFamily::Kind::Custom:
        return p == 0.0 ? g.custom_family()->support_lo : g.custom_family()->support_hi;
    }
  }
  return invert(g, p);
}

double upper_quantile(const RefFamily& g, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("upper_quantile requires u in [0, 1]");
  if (u == 0.0 || u == 1.0) return quantile(g, 1.0 - u);
  switch (g.kind()) {
    case RefFamily::Kind::Uniform:
      return 1.0 - u;
    case RefFamily::Kind::Exponential:
      return -std::log(u);
    case RefFamily::Kind::NegExponential:
      return std::log1p(-u);
    case RefFamily::Kind::LogLogistic:
      return std::pow((1.0 - u) / u, 1.0 / g.shape());
    case RefFamily::Kind::Logistic:
      return std::log1p(-u) - std::log(u);
    case RefFamily::Kind::Frechet:
      return std::pow(-std::log1p(-u), -1.0 / g.shape());
    case RefFamily::Kind::Cauchy:
      return u < 0.5 ? 1.0 / std::tan(kPi * u) : std::tan(kPi * (0.5 - u));
    case RefFamily::Kind::Custom:
      return g.custom_family()->quantile(1.0 - u);
  }
  return std::nan("");
}

void sample_into(const RefFamily& g, std::size_t n, Engine& rng, std::vector<double>& out) {
  out.resize(n);
  for (auto& x : out) x = invert(g, uniform_open(rng));
}

std::vector<double> sample(const RefFamily& g, std::size_t n, Engine& rng) {
  std::vector<double> out;
  sample_into(g, n, rng, out);
  return out;
}

TailInfo tail_info(const RefFamily& g) {
  switch (g.kind()) {
    case RefFamily::Kind::LogLogistic:
    case RefFamily::Kind::Frechet:
      return {g.shape(), kInf};
    case RefFamily::Kind::Cauchy:
      return {1.0, 1.0};
    case RefFamily::Kind::Custom: {
      const auto* c = g.custom_family();
      if (!(c->right_index > 0.0) || !(c->left_index > 0.0)) {
        throw ConfigError("custom family '" + c->name + "' has no declared tail indices");
      }
      return {c->right_index, c->left_index};
    }
    default:
      return {kInf, kInf};
  }
}

std::string Alternative::name() const {
  switch (kind) {
    case Kind::Weibull: return "weibull";
    case Kind::LogLogistic: return "log-logistic";
    case Kind::NegWeibull: return "neg-weibull";
    case Kind::StudentT: return "student-t";
    case Kind::ShiftedExponential: return "shifted-exponential";
  }
  return "unknown";
}

Alternative::Kind Alternative::parse_kind(std::string_view text) {
  if (text == "weibull") return Kind::Weibull;
  if (text == "log-logistic") return Kind::LogLogistic;
  if (text == "neg-weibull") return Kind::NegWeibull;
  if (text == "student-t") return Kind::StudentT;
  if (text == "shifted-exponential") return Kind::ShiftedExponential;
  throw ConfigError("unknown alternative family '" + std::string(text) + "'");
}

void alt_sample_into(const Alternative& alt, std::size_t n, Engine& rng, std::vector<double>& out) {
  validate(alt);
  out.resize(n);
  switch (alt.kind) {
    case Alternative::Kind::Weibull:
      for (auto& x : out) x = weibull_inverse(uniform_open(rng), alt.param);
      break;
    case Alternative::Kind::NegWeibull:
      for (auto& x : out) x = -weibull_inverse(uniform_open(rng), alt.param);
      break;
    case Alternative::Kind::LogLogistic:
      for (auto& x : out) {
        const double u = uniform_open(rng);
        x = std::pow(u / (1.0 - u), 1.0 / alt.param);
      }
      break;
    case Alternative::Kind::ShiftedExponential:
      for (auto& x : out) x = alt.param - std::log1p(-uniform_open(rng));
      break;
    case Alternative::Kind::StudentT:
      for (auto& x : out) {
        std::normal_distribution<double> normal;
        std::chi_squared_distribution<double> chi2(alt.param);
        const double z = normal(rng);
        x = z / std::sqrt(chi2(rng) / alt.param);
      }
      break;
  }
}

std::vector<double> alt_sample(const Alternative& alt, std::size_t n, Engine& rng) {
  std::vector<double> out;
  alt_sample_into(alt, n, rng, out);
  return out;
}

double alt_cdf(const Alternative& alt, double x) {
  validate(alt);
  switch (alt.kind) {
    case Alternative::Kind::Weibull:
      return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x, alt.param));
    case Alternative::Kind::NegWeibull:
      return x >= 0.0 ? 1.0 : std::exp(-std::pow(-x, alt.param));
    case Alternative::Kind::LogLogistic:
      return cdf(RefFamily::log_logistic(alt.param), x);
    case Alternative::Kind::ShiftedExponential:
      return x <= alt.param ? 0.0 : -std::expm1(-(x - alt.param));
    case Alternative::Kind::StudentT: {
      const double nu = alt.param;
      const double tail = 0.5 * reg_inc_beta(nu / (nu + x * x), 0.5 * nu, 0.5);
      return x > 0.0 ? 1.0 - tail : tail;
    }
  }
  return std::nan("");
}

}  // namespace cxorder
