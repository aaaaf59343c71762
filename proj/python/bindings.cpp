#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>

#include "cxorder/baselines.hpp"
#include "cxorder/errors.hpp"
#include "cxorder/order_stats.hpp"
#include "cxorder/special_functions.hpp"
#include "cxorder/testing.hpp"

namespace py = pybind11;
using namespace cxorder;

namespace {

// Keyword arguments shared by the test entry points.
TestSpec make_spec(const std::string& g, std::optional<int> m, std::size_t n, double p, const std::string& side,
                   std::optional<std::vector<int>> indices, std::optional<int> ell, double assumed_alpha,
                   double assumed_beta, double alpha, int trials, std::uint64_t seed, unsigned threads) {
  TestSpec spec;
  spec.g = RefFamily::parse(g);
  spec.m = m.value_or(default_m(n));
  spec.p_norm = p;
  spec.side = parse_side(side);
  if (indices && ell) throw ConfigError("give indices or ell, not both");
  if (indices) spec.indices = *indices;
  if (ell) spec.indices = AutoIndices{*ell, TailInfo{assumed_alpha, assumed_beta}};
  spec.sig_level = alpha;
  spec.mc_trials = trials;
  spec.seed = seed;
  spec.threads = threads;
  return spec;
}

py::dict result_dict(const TestResult& r) {
  py::dict d;
  d["test"] = r.test;
  d["side"] = to_string(r.side);
  d["statistic"] = r.statistic;
  d["critical_value"] = r.critical_value;
  d["p_value"] = r.p_value;
  d["reject"] = r.reject;
  d["n"] = r.n;
  d["m"] = r.spec.m;
  d["indices"] = r.indices;
  d["alpha"] = r.spec.sig_level;
  d["trials"] = r.spec.mc_trials;
  d["seed"] = r.spec.seed;
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cxorder, mod) {
  mod.doc() = "Nonparametric tests for convex-ordered families";

  py::register_exception<DomainError>(mod, "DomainError", PyExc_ValueError);
  py::register_exception<IngestError>(mod, "IngestError", PyExc_ValueError);
  py::register_exception<SpecError>(mod, "SpecError", PyExc_ValueError);
  py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);

  mod.def("reg_inc_beta", &reg_inc_beta, py::arg("x"), py::arg("a"), py::arg("b"),
          "Regularized incomplete beta function I_x(a, b).");

  mod.def(
      "pi_bound",
      [](const std::string& g, int j, int m) -> py::object {
        const auto b = pi_bound(RefFamily::parse(g), j, m);
        if (!b.usable()) return py::none();
        return py::float_(b.probability());
      },
      py::arg("g"), py::arg("j"), py::arg("m"), "Exceedance bound for rank j of m; None when undefined.");

  mod.def(
      "os_weights", [](std::size_t n, int j, int m) { return os_weights(n, j, m).weights; }, py::arg("n"),
      py::arg("j"), py::arg("m"));

  mod.def(
      "l_estimate",
      [](const std::vector<double>& data, int j, int m) { return l_estimate(Sample::ingest(data), j, m); },
      py::arg("data"), py::arg("j"), py::arg("m"), "L-estimate of the expected j-th order statistic of m.");

  mod.def(
      "interpolated_ecdf",
      [](const std::vector<double>& data, const std::vector<double>& x) {
        const InterpolatedEcdf f(Sample::ingest(data));
        std::vector<double> out;
        out.reserve(x.size());
        for (double v : x) out.push_back(f(v));
        return out;
      },
      py::arg("data"), py::arg("x"));

  mod.def(
      "statistic",
      [](const std::vector<double>& data, const std::string& g, std::optional<int> m, double p,
         std::optional<std::vector<int>> indices, std::optional<int> ell, double assumed_alpha, double assumed_beta) {
        const Sample s = Sample::ingest(data);
        const auto spec = make_spec(g, m, s.size(), p, "upper", indices, ell, assumed_alpha, assumed_beta, 0.1,
                                    5000, 0, 0);
        const auto v = statistic(s, spec);
        return py::make_tuple(v.upper, v.lower);
      },
      py::arg("data"), py::arg("g") = "exponential", py::arg("m") = py::none(), py::arg("p") = 1.0,
      py::arg("indices") = py::none(), py::arg("ell") = py::none(), py::arg("assumed_alpha") = kInf,
      py::arg("assumed_beta") = kInf, "Returns (upper, lower) statistics.");

  mod.def(
      "run_test",
      [](const std::vector<double>& data, const std::string& g, std::optional<int> m, double p,
         const std::string& side, std::optional<std::vector<int>> indices, std::optional<int> ell,
         double assumed_alpha, double assumed_beta, double alpha, int trials, std::uint64_t seed, unsigned threads) {
        const Sample s = Sample::ingest(data);
        const auto spec = make_spec(g, m, s.size(), p, side, indices, ell, assumed_alpha, assumed_beta, alpha,
                                    trials, seed, threads);
        std::vector<TestResult> results;
        {
          py::gil_scoped_release release;
          results = run_test(s, spec);
        }
        py::list out;
        for (const auto& r : results) out.append(result_dict(r));
        return out;
      },
      py::arg("data"), py::arg("g") = "exponential", py::arg("m") = py::none(), py::arg("p") = 1.0,
      py::arg("side") = "upper", py::arg("indices") = py::none(), py::arg("ell") = py::none(),
      py::arg("assumed_alpha") = kInf, py::arg("assumed_beta") = kInf, py::arg("alpha") = 0.1,
      py::arg("trials") = 5000, py::arg("seed") = 0, py::arg("threads") = 0,
      "Convex-order test; one result dict per side.");

  mod.def(
      "critical_value",
      [](std::size_t n, const std::string& g, int m, double p, const std::string& side, double alpha, int trials,
         std::uint64_t seed, unsigned threads) {
        const auto spec = make_spec(g, m, n, p, side, std::nullopt, std::nullopt, kInf, kInf, alpha, trials, seed,
                                    threads);
        py::gil_scoped_release release;
        return critical_value(spec, n, spec.side);
      },
      py::arg("n"), py::arg("g") = "exponential", py::arg("m") = 5, py::arg("p") = 1.0, py::arg("side") = "upper",
      py::arg("alpha") = 0.1, py::arg("trials") = 5000, py::arg("seed") = 0, py::arg("threads") = 0);

  mod.def(
      "pp_test",
      [](const std::vector<double>& data, const std::string& side, double alpha, int trials, std::uint64_t seed,
         unsigned threads) {
        const Sample s = Sample::ingest(data);
        PPOptions options{alpha, trials, seed, threads};
        TestResult r;
        {
          py::gil_scoped_release release;
          r = pp_test(s, parse_pp_side(side), options);
        }
        return result_dict(r);
      },
      py::arg("data"), py::arg("side") = "ihr", py::arg("alpha") = 0.1, py::arg("trials") = 5000,
      py::arg("seed") = 0, py::arg("threads") = 0, "Proschan-Pyke test against IHR or DHR.");

  mod.def(
      "hill_estimate",
      [](const std::vector<double>& data, std::optional<std::size_t> k) {
        const auto h = hill_estimate(Sample::ingest(data), k);
        return py::make_tuple(h.k, h.alpha);
      },
      py::arg("data"), py::arg("k") = py::none(), "Returns (k, alpha_hat).");
}
