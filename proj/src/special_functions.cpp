#include "cxorder/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "cxorder/errors.hpp"

namespace cxorder {

namespace {

// lgamma writes the global signgam; the reentrant variant does not.
double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

constexpr int kMaxFractionTerms = 10000;
constexpr double kFractionEps = 1e-16;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), modified Lentz evaluation.
double beta_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int k = 1; k <= kMaxFractionTerms; ++k) {
    const double k2 = 2.0 * k;
    double aa = k * (b - k) * x / ((qam + k2) * (a + k2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + k) * (qab + k) * x / ((a + k2) * (qap + k2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kFractionEps) break;
  }
  return h;
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// Returns false if f produced a non-finite value.
bool gauss_kronrod(const std::function<double(double)>& f, double lo, double hi, Panel& out) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(centre);
  if (!std::isfinite(fc)) return false;
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    if (!std::isfinite(f1) || !std::isfinite(f2)) return false;
    kronrod += kKronrodWeights[i] * (f1 + f2);
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (f1 + f2);
  }
  out = Panel{lo, hi, kronrod * half, std::fabs((kronrod - gauss) * half)};
  return true;
}

}  // namespace

BetaParams::BetaParams(int j, int m) : j_(j), m_(m) {
  if (j < 1 || j > m) {
    throw DomainError("order statistic rank must satisfy 1 <= j <= m (got j=" +
                      std::to_string(j) + ", m=" + std::to_string(m) + ")");
  }
}

double ln_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("ln_beta requires a > 0 and b > 0");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double reg_inc_beta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("reg_inc_beta requires x in [0, 1]");
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("reg_inc_beta requires a > 0 and b > 0");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) - ln_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(x, a, b) / a;
  return 1.0 - front * beta_fraction(1.0 - x, b, a) / b;
}

double beta_pdf(double p, double q, const BetaParams& params) {
  const double a = params.a();
  const double b = params.b();
  double log_density = -ln_beta(a, b);
  if (a != 1.0) log_density += (a - 1.0) * std::log(p);
  if (b != 1.0) log_density += (b - 1.0) * std::log(q);
  return std::exp(log_density);
}

double beta_pdf(double p, const BetaParams& params) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("beta_pdf requires p in [0, 1]");
  return beta_pdf(p, 1.0 - p, params);
}

double partial_harmonic(int lo, int hi) {
  if (lo < 1) throw DomainError("partial_harmonic requires lo >= 1");
  if (lo > hi) throw DomainError("partial_harmonic requires lo <= hi");
  double sum = 0.0;
  for (int k = hi; k >= lo; --k) sum += 1.0 / k;
  return sum;
}

QuadratureResult integrate_01(const std::function<double(double)>& f,
                              const QuadratureOptions& options) {
  QuadratureResult result;
  Panel whole{};
  if (!gauss_kronrod(f, 0.0, 1.0, whole)) return result;

  std::priority_queue<Panel> panels;
  panels.push(whole);
  double total = whole.value;
  double error = whole.error;
  // Panels too narrow to bisect in double precision keep their error here.
  double frozen_error = 0.0;
  double frozen_value = 0.0;
  constexpr double kMinWidth = 8.0 * std::numeric_limits<double>::epsilon();

  while (error + frozen_error > std::max(options.abs_tol, options.rel_tol * std::fabs(total))) {
    if (panels.empty() || result.subdivisions >= options.max_subdivisions) {
      result.value = total;
      result.abs_error = error + frozen_error;
      return result;
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    // Width is judged relative to the panel's magnitude so panels shrinking
    // onto a singularity at 0 can keep bisecting.
    if (!(worst.lo < mid && mid < worst.hi) ||
        worst.hi - worst.lo < kMinWidth * std::max(std::fabs(worst.lo), std::fabs(worst.hi))) {
      error -= worst.error;
      frozen_error += worst.error;
      frozen_value += worst.value;
      continue;
    }
    Panel left{};
    Panel right{};
    if (!gauss_kronrod(f, worst.lo, mid, left) || !gauss_kronrod(f, mid, worst.hi, right)) {
      result.value = total;
      result.abs_error = std::numeric_limits<double>::infinity();
      return result;
    }
    ++result.subdivisions;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  double resummed = frozen_value;
  double resummed_error = frozen_error;
  while (!panels.empty()) {
    resummed += panels.top().value;
    resummed_error += panels.top().error;
    panels.pop();
  }
  result.value = resummed;
  result.abs_error = resummed_error;
  result.converged = true;
  return result;
}

}  // namespace cxorder
