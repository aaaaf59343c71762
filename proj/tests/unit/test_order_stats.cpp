#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cxorder/errors.hpp"
#include "cxorder/order_stats.hpp"
#include "cxorder/rng.hpp"
#include "oracles.hpp"

using namespace cxorder;

namespace {

std::vector<double> random_sample(std::uint64_t stream, std::size_t n) {
  Engine rng = stream_engine(99, stream);
  std::vector<double> x(n);
  // Mix scales so the identities are exercised away from [0, 1].
  for (auto& v : x) v = 10.0 * (uniform_open(rng) - 0.3) + std::log(uniform_open(rng));
  return x;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

TEST_CASE("ingest sorts and flags ties") {
  const auto s = Sample::ingest(std::vector<double>{3, 1, 2});
  CHECK(std::vector<double>(s.values().begin(), s.values().end()) == std::vector<double>{1, 2, 3});
  CHECK_FALSE(s.has_ties());
  CHECK(s.warnings().empty());

  const auto t = Sample::ingest(std::vector<double>{1, 1, 2});
  CHECK(t.has_ties());
  CHECK(t.warnings().size() == 1);

  CHECK_THROWS_AS(Sample::ingest(std::vector<double>{std::nan("")}), IngestError);
  CHECK_THROWS_AS(Sample::ingest(std::vector<double>{1.0, HUGE_VAL}), IngestError);
  CHECK_THROWS_AS(Sample::ingest(std::vector<double>{}), IngestError);
}

TEST_CASE("os_weights examples") {
  CHECK(os_weights(1, 2, 3).weights == std::vector<double>{1.0});
  const auto w11 = os_weights(2, 1, 1).weights;
  CHECK(w11[0] == doctest::Approx(0.5));
  CHECK(w11[1] == doctest::Approx(0.5));
  const auto w12 = os_weights(2, 1, 2).weights;
  CHECK(w12[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(w12[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(os_weights(5, 4, 3), DomainError);
  CHECK_THROWS_AS(os_weights(0, 1, 1), DomainError);
}

TEST_CASE("os_weights sum to one and match the binomial oracle") {
  for (std::size_t n : {1u, 2u, 7u, 50u, 333u}) {
    for (int m = 1; m <= 40; m += 3) {
      for (int j = 1; j <= m; ++j) {
        const auto w = os_weights(n, j, m).weights;
        CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0) < 1e-12);
        for (std::size_t i = 1; i <= n; ++i) {
          const double expect =
              oracle::beta_cdf_int(double(i) / n, j, m) - oracle::beta_cdf_int(double(i - 1) / n, j, m);
          CHECK(std::abs(w[i - 1] - expect) < 1e-12);
          CHECK(w[i - 1] >= 0.0);
        }
      }
    }
  }
}

TEST_CASE("l_estimate examples") {
  CHECK(l_estimate(Sample::ingest(std::vector<double>{4.2}), 3, 7) == 4.2);
  const auto s = Sample::ingest(std::vector<double>{0, 1});
  CHECK(l_estimate(s, 1, 2) == doctest::Approx(0.25));
  const std::vector<double> x = {2.0, -1.0, 5.5, 0.25};
  CHECK(l_estimate(Sample::ingest(x), 1, 1) == doctest::Approx(6.75 / 4).epsilon(1e-15));
}

TEST_CASE("L-estimator identities on random samples") {
  for (std::uint64_t t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 37;
    const auto s = Sample::ingest(random_sample(t, n));
    const auto v = s.values();
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    for (int m = 1; m <= 40; ++m) {
      double sum = 0.0;
      double prev = -HUGE_VAL;
      for (int j = 1; j <= m; ++j) {
        const double mu = l_estimate(s, j, m);
        CHECK(mu >= v.front());
        CHECK(mu <= v.back());
        CHECK(mu >= prev - 1e-12);
        if (m < 40) CHECK(l_estimate(s, j, m + 1) <= mu + 1e-12);
        prev = mu;
        sum += mu;
      }
      CHECK(std::abs(sum / m - mean) < 1e-10);
    }
  }
}

TEST_CASE("interpolated ECDF examples") {
  const InterpolatedEcdf f(Sample::ingest(std::vector<double>{0, 1}));
  CHECK(f(0.5) == doctest::Approx(0.75));
  CHECK(f(-5) == 0.5);
  CHECK(f(5) == 1.0);
  CHECK(f(0) == 0.5);

  const std::vector<double> sorted = {1, 2, 2, 2, 4};
  const InterpolatedEcdf g(sorted);
  CHECK(g.knot_x().size() == 3);
  CHECK(g(2.0) == doctest::Approx(0.8));
  CHECK(g(1.5) == doctest::Approx(0.5));
  CHECK(g(3.0) == doctest::Approx(0.9));
}

TEST_CASE("interpolated ECDF: table and direct forms agree with the oracle and stay near the step ECDF") {
  for (std::uint64_t t = 0; t < 100; ++t) {
    auto x = random_sample(1000 + t, 1 + t % 20);
    // Inject ties in some samples.
    if (t % 3 == 0 && x.size() > 2) x[1] = x[0];
    std::sort(x.begin(), x.end());
    const InterpolatedEcdf f(x);
    const double n = static_cast<double>(x.size());
    for (int k = -10; k <= 110; ++k) {
      const double q = x.front() + (x.back() - x.front()) * k / 100.0;
      const double a = f(q);
      CHECK(a == doctest::Approx(oracle::ecdf(x, q)).epsilon(1e-13));
      CHECK(interpolated_ecdf_at(x, q) == doctest::Approx(a).epsilon(1e-13));
      const double step = static_cast<double>(std::upper_bound(x.begin(), x.end(), q) - x.begin()) / n;
      // The 1/n bound needs distinct values; a tie makes the step ECDF jump by more.
      if (q >= x.front() && t % 3 != 0) CHECK(std::abs(a - step) <= 1.0 / n + 1e-12);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double rank = static_cast<double>(std::upper_bound(x.begin(), x.end(), x[i]) - x.begin());
      CHECK(f(x[i]) == doctest::Approx(rank / n));
    }
  }
}

TEST_CASE("pi_bound examples") {
  CHECK(pi_bound(RefFamily::uniform(), 1, 1).value == doctest::Approx(0.5));
  CHECK(pi_bound(RefFamily::exponential(), 1, 1).value == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(pi_bound(RefFamily::log_logistic(1.0), 2, 5).value == doctest::Approx(0.4));
  CHECK(pi_bound(RefFamily::cauchy(), 1, 1).kind == PiBound::Kind::Undefined);
  CHECK_THROWS_AS(pi_bound(RefFamily::cauchy(), 1, 1).probability(), SpecError);
  CHECK(pi_bound(RefFamily::cauchy(), 2, 3).value == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(pi_bound(RefFamily::cauchy(), 1, 3).kind == PiBound::Kind::TriviallyZero);
  CHECK(pi_bound(RefFamily::cauchy(), 3, 3).kind == PiBound::Kind::TriviallyOne);
  CHECK(pi_bound(RefFamily::log_logistic(1.0), 5, 5).kind == PiBound::Kind::TriviallyOne);
  CHECK(pi_bound(RefFamily::frechet(0.5), 2, 3).kind == PiBound::Kind::TriviallyOne);
  CHECK(pi_bound(RefFamily::frechet(0.5), 1, 3).kind == PiBound::Kind::Value);
}

TEST_CASE("quadrature agrees with closed forms") {
  const std::vector<RefFamily> families = {RefFamily::uniform(), RefFamily::exponential(),
                                           RefFamily::neg_exponential(), RefFamily::log_logistic(1.0)};
  for (const auto& g : families) {
    for (int m = 1; m <= 20; ++m) {
      for (int j = 1; j <= m; ++j) {
        const auto closed = pi_bound(g, j, m);
        if (closed.kind != PiBound::Kind::Value) continue;
        const auto quad = pi_bound_quadrature(g, j, m);
        CHECK_MESSAGE(std::abs(closed.value - quad.value) < 1e-8, g.key() << " j=" << j << " m=" << m);
      }
    }
  }
}

TEST_CASE("closed forms agree with independent harmonic sums") {
  for (int m = 1; m <= 30; ++m) {
    for (int j = 1; j <= m; ++j) {
      CHECK(pi_bound(RefFamily::exponential(), j, m).value ==
            doctest::Approx(1 - std::exp(-oracle::harmonic(m - j + 1, m))).epsilon(1e-14));
      CHECK(pi_bound(RefFamily::neg_exponential(), j, m).value ==
            doctest::Approx(std::exp(-oracle::harmonic(j, m))).epsilon(1e-14));
    }
  }
}

TEST_CASE("pi_bound is nondecreasing in j") {
  const std::vector<RefFamily> families = {RefFamily::uniform(),         RefFamily::exponential(),
                                           RefFamily::neg_exponential(), RefFamily::log_logistic(1.0),
                                           RefFamily::log_logistic(2.0), RefFamily::logistic(),
                                           RefFamily::frechet(2.0),      RefFamily::cauchy()};
  for (const auto& g : families) {
    for (int m = 2; m <= 12; ++m) {
      double prev = -1.0;
      for (int j = 1; j <= m; ++j) {
        const auto b = pi_bound(g, j, m);
        if (!b.usable()) continue;
        CHECK_MESSAGE(b.value >= prev - 1e-12, g.key() << " j=" << j << " m=" << m);
        prev = b.value;
      }
    }
  }
}

TEST_CASE("logistic and log-logistic quadrature bounds are symmetric") {
  // Logistic G is symmetric: pi_{j:m} + pi_{m+1-j:m} = 1.
  for (int m = 1; m <= 10; ++m) {
    for (int j = 1; j <= m; ++j) {
      const double a = pi_bound(RefFamily::logistic(), j, m).value;
      const double b = pi_bound(RefFamily::logistic(), m + 1 - j, m).value;
      CHECK(a + b == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("L-estimates converge for Weibull(1.5) data") {
  // mu_{2:3} for Weibull(a): integrate the quantile against the Beta(2, 2) density.
  const double a = 1.5;
  const double mu = oracle::simpson(
      [a](double p) { return p <= 0 || p >= 1 ? 0.0 : std::pow(-std::log1p(-p), 1 / a) * 6 * p * (1 - p); }, 0, 1,
      200000);
  double prev = HUGE_VAL;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    std::vector<double> errors;
    for (std::uint64_t r = 0; r < 200; ++r) {
      Engine rng = stream_engine(n, r);
      const auto s = Sample::ingest(alt_sample(Alternative::weibull(a), n, rng));
      errors.push_back(std::abs(l_estimate(s, 2, 3) - mu));
    }
    const double med = median(errors);
    CHECK(med < prev);
    prev = med;
  }
}

TEST_CASE("Hill estimator") {
  // log-excesses summing to k give alpha = 1.
  std::vector<double> x = {0.5, 1.0, std::exp(0.5), std::exp(1.0), std::exp(1.5)};
  const auto h = hill_estimate(Sample::ingest(x), 3);
  CHECK(h.alpha == doctest::Approx(1.0));
  const auto h1 = hill_estimate(Sample::ingest(x), 1);
  CHECK(h1.alpha == doctest::Approx(1.0 / 0.5));

  Engine rng = stream_engine(7, 0);
  std::vector<double> pareto(100000);
  for (auto& v : pareto) v = std::pow(uniform_open(rng), -0.5);
  const auto hp = hill_estimate(Sample::ingest(pareto));
  CHECK(hp.k == 316);
  CHECK(std::abs(hp.alpha - 2.0) < 0.2);

  CHECK_THROWS_AS(hill_estimate(Sample::ingest(std::vector<double>{-1, 2, 3, 4})), DomainError);
  CHECK_THROWS_AS(hill_estimate(Sample::ingest(std::vector<double>{1, 2, 3}), 3), DomainError);
  CHECK_THROWS_AS(hill_estimate(Sample::ingest(std::vector<double>{2, 2, 2}), 1), DomainError);
}
