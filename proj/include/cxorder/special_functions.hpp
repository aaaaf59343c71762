#pragma once

#include <functional>

namespace cxorder {

/// Rank j and size m of a uniform order statistic U_{j:m}, distributed as
/// Beta(j, m - j + 1).
class BetaParams {
 public:
  /// Throws DomainError unless 1 <= j <= m.
  BetaParams(int j, int m);

  int j() const noexcept { return j_; }
  int m() const noexcept { return m_; }
  double a() const noexcept { return j_; }
  double b() const noexcept { return m_ - j_ + 1; }

 private:
  int j_;
  int m_;
};

/// log B(a, b). Throws DomainError for a <= 0 or b <= 0.
double ln_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b), via the Lentz continued fraction
/// with the usual symmetry switch at x > (a + 1) / (a + b + 2).
double reg_inc_beta(double x, double a, double b);

/// Density of Beta(j, m - j + 1) at p in [0, 1].
double beta_pdf(double p, const BetaParams& params);

/// Same density, given p and its complement q = 1 - p separately so that
/// callers working near p = 1 keep full relative precision in q.
double beta_pdf(double p, double q, const BetaParams& params);

/// sum_{k=lo}^{hi} 1/k, accumulated from the smallest term upwards.
double partial_harmonic(int lo, int hi);

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int subdivisions = 0;
  /// False if the error target was not met within the subdivision budget
  /// or the integrand produced a non-finite value.
  bool converged = false;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_subdivisions = 10000;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature over (0, 1). The rule
/// never evaluates f at an endpoint, so integrable endpoint singularities
/// are allowed.
QuadratureResult integrate_01(const std::function<double(double)>& f,
                              const QuadratureOptions& options = {});

}  // namespace cxorder
