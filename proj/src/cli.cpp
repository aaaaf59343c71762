#include "cxorder/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "cxorder/baselines.hpp"
#include "cxorder/errors.hpp"
#include "cxorder/rng.hpp"
#include "cxorder/simulation.hpp"
#include "cxorder/testing.hpp"

namespace cxorder::cli {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_p(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

// JSON has no infinity; the norm order is echoed as the string "inf".
json p_to_json(double p) { return std::isinf(p) ? json("inf") : json(p); }

// Doubles that may be non-finite (e.g. a statistic on degenerate data).
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot write " + path);
    }
    stream_ = file_.is_open() ? &file_ : &fallback;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct SeedFlag {
  std::optional<std::uint64_t> value;
  std::uint64_t resolve() const { return value ? *value : entropy_seed(); }
};

struct TestArgs {
  std::string input;
  std::string g = "exponential";
  std::string side = "upper";
  std::optional<int> m;
  std::string p = "1";
  double alpha = 0.1;
  int trials = 5000;
  SeedFlag seed;
  std::optional<int> ell;
  std::vector<int> indices;
  std::optional<double> assumed_alpha;
  std::optional<double> assumed_beta;
  unsigned threads = 0;
  std::string output;
};

struct PPArgs {
  std::string input;
  std::string side = "ihr";
  double alpha = 0.1;
  int trials = 5000;
  SeedFlag seed;
  unsigned threads = 0;
  std::string output;
};

struct CriticalArgs {
  std::string g = "exponential";
  std::vector<int> n;
  std::vector<int> m;
  std::vector<int> ell{0};
  std::vector<std::string> p{"1"};
  std::string side = "both";
  double alpha = 0.1;
  int trials = 5000;
  SeedFlag seed;
  std::optional<double> assumed_alpha;
  std::optional<double> assumed_beta;
  unsigned threads = 0;
  std::string output;
};

struct PowerArgs {
  std::string family = "weibull";
  std::vector<double> params;
  std::string range;
  std::vector<int> n;
  std::string test = "convex";
  std::string g = "exponential";
  std::vector<int> m{5};
  std::vector<int> ell;
  std::optional<int> drop;
  std::vector<std::string> p{"1"};
  std::string side = "upper";
  std::optional<double> assumed_alpha;
  std::optional<double> assumed_beta;
  int reps = 5000;
  int trials = 5000;
  double alpha = 0.1;
  SeedFlag seed;
  unsigned threads = 0;
  std::string output;
};

struct ReproduceArgs {
  std::vector<std::string> targets;
  std::string out_dir = "results";
  int reps = 5000;
  int trials = 5000;
  std::uint64_t seed = ReproduceOptions{}.base_seed;
  unsigned threads = 0;
};

struct HillArgs {
  std::string input;
  std::optional<std::size_t> k;
  std::string output;
};

TailInfo assumed_tails(const std::optional<double>& right, const std::optional<double>& left) {
  TailInfo t;
  if (right) t.right = *right;
  if (left) t.left = *left;
  if (!(t.right > 0.0) || !(t.left > 0.0)) throw ConfigError("assumed tail indices must be positive");
  return t;
}

void cmd_test(const TestArgs& a, std::ostream& out) {
  if (a.ell && !a.indices.empty()) throw ConfigError("--ell and --indices are mutually exclusive");
  const Sample sample = Sample::ingest(read_values_file(a.input));

  TestSpec spec;
  spec.g = RefFamily::parse(a.g);
  spec.m = a.m.value_or(default_m(sample.size()));
  spec.p_norm = parse_p_norm(a.p);
  spec.side = parse_side(a.side);
  if (a.ell) {
    spec.indices = AutoIndices{*a.ell, assumed_tails(a.assumed_alpha, a.assumed_beta)};
  } else if (!a.indices.empty()) {
    spec.indices = a.indices;
  }
  spec.sig_level = a.alpha;
  spec.mc_trials = a.trials;
  spec.seed = a.seed.resolve();
  spec.threads = a.threads;

  Output sink(a.output, out);
  for (const auto& r : run_test(sample, spec)) {
    json j;
    j["test"] = r.test;
    j["g"] = spec.g.name();
    j["g_params"] = spec.g.params();
    j["n"] = r.n;
    j["m"] = spec.m;
    j["p"] = p_to_json(spec.p_norm);
    j["ell"] = r.indices.size();
    j["indices"] = r.indices;
    if (a.assumed_alpha) j["assumed_alpha"] = *a.assumed_alpha;
    if (a.assumed_beta) j["assumed_beta"] = *a.assumed_beta;
    j["side"] = to_string(r.side);
    j["statistic"] = number_or_null(r.statistic);
    j["critical_value"] = number_or_null(r.critical_value);
    j["p_value"] = r.p_value;
    j["reject"] = r.reject;
    j["alpha"] = spec.sig_level;
    j["trials"] = spec.mc_trials;
    j["seed"] = spec.seed;
    j["warnings"] = r.warnings;
    *sink << j.dump() << '\n';
  }
}

void cmd_pp_test(const PPArgs& a, std::ostream& out) {
  const Sample sample = Sample::ingest(read_values_file(a.input));
  PPOptions options;
  options.sig_level = a.alpha;
  options.mc_trials = a.trials;
  options.seed = a.seed.resolve();
  options.threads = a.threads;
  std::vector<PPSide> sides;
  if (a.side == "both") {
    sides = {PPSide::IHR, PPSide::DHR};
  } else {
    sides = {parse_pp_side(a.side)};
  }
  Output sink(a.output, out);
  for (PPSide side : sides) {
    const auto r = pp_test(sample, side, options);
    json j;
    j["test"] = r.test;
    j["g"] = "exponential";
    j["n"] = r.n;
    j["side"] = to_string(side);
    j["statistic"] = r.statistic;
    j["critical_value"] = r.critical_value;
    j["p_value"] = r.p_value;
    j["reject"] = r.reject;
    j["alpha"] = options.sig_level;
    j["trials"] = options.mc_trials;
    j["seed"] = options.seed;
    j["warnings"] = r.warnings;
    *sink << j.dump() << '\n';
  }
}

void cmd_critical_value(const CriticalArgs& a, std::ostream& out, std::ostream& err) {
  if (a.n.empty() || a.m.empty()) throw ConfigError("--n and --m are required");
  const RefFamily g = RefFamily::parse(a.g);
  const Side side = parse_side(a.side);
  const TailInfo assumed = assumed_tails(a.assumed_alpha, a.assumed_beta);
  const std::uint64_t seed = a.seed.resolve();
  std::vector<Side> sides = side == Side::Both ? std::vector<Side>{Side::Upper, Side::Lower} : std::vector<Side>{side};

  Output sink(a.output, out);
  *sink << "g,n,m,ell,p,side,alpha,critical_value,trials,seed\n";
  for (int n : a.n) {
    if (n < 1) throw ConfigError("sample sizes must be positive");
    for (int m : a.m) {
      for (int ell : a.ell) {
        for (const auto& p_text : a.p) {
          TestSpec spec;
          spec.g = g;
          spec.m = m;
          spec.p_norm = parse_p_norm(p_text);
          spec.side = side;
          if (ell > 0) spec.indices = AutoIndices{ell, assumed};
          spec.sig_level = a.alpha;
          spec.mc_trials = a.trials;
          spec.seed = seed;
          spec.threads = a.threads;
          for (Side s : sides) {
            std::string value;
            try {
              char buf[32];
              std::snprintf(buf, sizeof buf, "%.17g", critical_value(spec, static_cast<std::size_t>(n), s));
              value = buf;
            } catch (const SpecError& e) {
              err << "warning: n=" << n << " m=" << m << " ell=" << ell << ": " << e.what() << '\n';
              value = "nan";
            }
            *sink << g.key() << ',' << n << ',' << m << ',' << (ell > 0 ? ell : m) << ',' << format_p(spec.p_norm)
                  << ',' << to_string(s) << ',' << a.alpha << ',' << value << ',' << a.trials << ',' << seed << '\n';
          }
        }
      }
    }
  }
}

void cmd_power(const PowerArgs& a, std::ostream& out, std::ostream& err) {
  if (a.n.empty()) throw ConfigError("--n is required");
  PowerGrid grid;
  grid.family = Alternative::parse_kind(a.family);
  if (!a.range.empty()) {
    double lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(a.range);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':') {
      throw ConfigError("--range expects lo:hi:step");
    }
    grid.params = param_range(lo, hi, step);
  }
  grid.params.insert(grid.params.end(), a.params.begin(), a.params.end());
  if (grid.params.empty()) throw ConfigError("give --params or --range");
  grid.n_grid = a.n;
  if (a.test == "pp") {
    grid.test = TestKind::ProschanPyke;
  } else if (a.test != "convex") {
    throw ConfigError("--test must be convex or pp");
  }
  grid.g = RefFamily::parse(a.g);
  if (!a.ell.empty()) {
    if (a.drop) throw ConfigError("--ell and --drop are mutually exclusive");
    if (a.ell.size() != a.m.size()) throw ConfigError("--ell needs one entry per --m");
    for (std::size_t k = 0; k < a.m.size(); ++k) grid.designs.push_back({a.m[k], a.ell[k]});
  } else if (a.drop) {
    grid.designs = designs_drop(a.m, *a.drop);
  } else {
    grid.designs = designs_all(a.m);
  }
  grid.p_grid.clear();
  for (const auto& p : a.p) grid.p_grid.push_back(parse_p_norm(p));
  grid.side = parse_side(a.side);
  grid.assumed = assumed_tails(a.assumed_alpha, a.assumed_beta);
  grid.replications = a.reps;
  grid.mc_trials = a.trials;
  grid.sig_level = a.alpha;
  grid.base_seed = a.seed.resolve();
  grid.threads = a.threads;

  const auto table = estimate_power(grid);
  for (const auto& row : table) {
    if (!row.error.empty()) err << "warning: m=" << row.m << " ell=" << row.ell << ": " << row.error << '\n';
  }
  Output sink(a.output, out);
  *sink << format_csv(table);
}

void cmd_reproduce(const ReproduceArgs& a, std::ostream& out, std::ostream& err) {
  ReproduceOptions options;
  options.replications = a.reps;
  options.mc_trials = a.trials;
  options.base_seed = a.seed;
  options.threads = a.threads;
  std::vector<std::string> targets = a.targets;
  if (targets.size() == 1 && targets[0] == "all") targets = exhibit_names();
  for (const auto& target : targets) exhibit_grids(target, options);  // validate names up front
  for (const auto& target : targets) {
    const auto table = reproduce(target, options, a.out_dir);
    for (const auto& row : table) {
      if (!row.error.empty()) err << "warning: " << target << " m=" << row.m << ": " << row.error << '\n';
    }
    out << (std::filesystem::path(a.out_dir) / (target + ".csv")).string() << '\n';
  }
}

void cmd_hill(const HillArgs& a, std::ostream& out) {
  const Sample sample = Sample::ingest(read_values_file(a.input));
  const auto h = hill_estimate(sample, a.k);
  json j;
  j["k"] = h.k;
  j["alpha_hat"] = h.alpha;
  j["n"] = sample.size();
  Output sink(a.output, out);
  *sink << j.dump() << '\n';
}

template <class T>
void add_seed(CLI::App* app, T& args) {
  app->add_option_function<std::uint64_t>(
      "--seed", [&args](std::uint64_t v) { args.seed.value = v; },
      "64-bit seed; drawn from entropy and echoed when absent");
}

}  // namespace

std::vector<double> read_values(std::istream& in, const std::string& source) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    if (text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
      throw IngestError(source + ":" + std::to_string(line_no) + ": cannot parse '" + std::string(text) +
                        "' as a finite number");
    }
    values.push_back(v);
  }
  if (in.bad()) throw IngestError("error reading " + source);
  if (values.empty()) throw IngestError(source + ": no values");
  return values;
}

std::vector<double> read_values_file(const std::string& path) {
  if (path.empty() || path == "-") return read_values(std::cin, "<stdin>");
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path);
  return read_values(in, path);
}

double parse_p_norm(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInf;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ConfigError("invalid norm order '" + text + "'");
  return v;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonparametric tests for convex-ordered families"};
  app.require_subcommand(1);

  TestArgs test_args;
  auto* test = app.add_subcommand("test", "Convex-order test on one sample (JSON Lines)");
  test->add_option("input", test_args.input, "Data file, one value per line ('-' for stdin)")->required();
  test->add_option("--g", test_args.g, "Reference family");
  test->add_option("--side", test_args.side, "upper, lower or both");
  test->add_option("--m", test_args.m, "Order-statistic sample size (default ceil(0.15 n))");
  test->add_option("--p", test_args.p, "Norm order, >= 1 or inf");
  test->add_option("--alpha", test_args.alpha, "Significance level");
  test->add_option("--trials", test_args.trials, "Monte Carlo trials for the null distribution");
  add_seed(test, test_args);
  test->add_option("--ell", test_args.ell, "Pick this many tail-eligible ranks automatically");
  test->add_option("--indices", test_args.indices, "Explicit ranks, comma separated")->delimiter(',');
  test->add_option("--assumed-alpha", test_args.assumed_alpha, "Assumed right tail index of the data");
  test->add_option("--assumed-beta", test_args.assumed_beta, "Assumed left tail index of the data");
  test->add_option("--threads", test_args.threads, "Worker cap (0 = all cores)");
  test->add_option("--output,-o", test_args.output, "Write to a file instead of stdout");

  PPArgs pp_args;
  auto* pp = app.add_subcommand("pp-test", "Proschan-Pyke exponentiality test (JSON Lines)");
  pp->add_option("input", pp_args.input, "Data file ('-' for stdin)")->required();
  pp->add_option("--side", pp_args.side, "ihr, dhr or both");
  pp->add_option("--alpha", pp_args.alpha, "Significance level");
  pp->add_option("--trials", pp_args.trials, "Monte Carlo trials");
  add_seed(pp, pp_args);
  pp->add_option("--threads", pp_args.threads, "Worker cap");
  pp->add_option("--output,-o", pp_args.output, "Output file");

  CriticalArgs cv_args;
  auto* cv = app.add_subcommand("critical-value", "Critical values over a grid (CSV)");
  cv->add_option("--g", cv_args.g, "Reference family");
  cv->add_option("--n", cv_args.n, "Sample sizes")->delimiter(',')->required();
  cv->add_option("--m", cv_args.m, "Values of m")->delimiter(',')->required();
  cv->add_option("--ell", cv_args.ell, "Values of ell (0 = all ranks)")->delimiter(',');
  cv->add_option("--p", cv_args.p, "Norm orders")->delimiter(',');
  cv->add_option("--side", cv_args.side, "upper, lower or both");
  cv->add_option("--alpha", cv_args.alpha, "Significance level");
  cv->add_option("--trials", cv_args.trials, "Monte Carlo trials");
  add_seed(cv, cv_args);
  cv->add_option("--assumed-alpha", cv_args.assumed_alpha, "Assumed right tail index");
  cv->add_option("--assumed-beta", cv_args.assumed_beta, "Assumed left tail index");
  cv->add_option("--threads", cv_args.threads, "Worker cap");
  cv->add_option("--output,-o", cv_args.output, "Output file");

  PowerArgs power_args;
  auto* power = app.add_subcommand("power", "Simulated rejection rates (CSV)");
  power->add_option("--family", power_args.family,
                    "weibull, log-logistic, neg-weibull, student-t or shifted-exponential");
  power->add_option("--params", power_args.params, "Alternative parameters")->delimiter(',');
  power->add_option("--range", power_args.range, "Parameter range lo:hi:step");
  power->add_option("--n", power_args.n, "Sample sizes")->delimiter(',')->required();
  power->add_option("--test", power_args.test, "convex or pp");
  power->add_option("--g", power_args.g, "Reference family");
  power->add_option("--m", power_args.m, "Values of m")->delimiter(',');
  power->add_option("--ell", power_args.ell, "ell per m (paired with --m)")->delimiter(',');
  power->add_option("--drop", power_args.drop, "Use ell = m - drop");
  power->add_option("--p", power_args.p, "Norm orders")->delimiter(',');
  power->add_option("--side", power_args.side, "upper, lower or both");
  power->add_option("--assumed-alpha", power_args.assumed_alpha, "Assumed right tail index");
  power->add_option("--assumed-beta", power_args.assumed_beta, "Assumed left tail index");
  power->add_option("--reps", power_args.reps, "Replications per cell");
  power->add_option("--trials", power_args.trials, "Monte Carlo trials for critical values");
  power->add_option("--alpha", power_args.alpha, "Significance level");
  add_seed(power, power_args);
  power->add_option("--threads", power_args.threads, "Worker cap");
  power->add_option("--output,-o", power_args.output, "Output file");

  ReproduceArgs rep_args;
  auto* rep = app.add_subcommand("reproduce", "Regenerate a power-study exhibit (CSV)");
  rep->add_option("target", rep_args.targets, "table1, table2, fig_drhr, fig_ior, fig_dor, fig_pp, fig_3d or all")
      ->required();
  rep->add_option("--out-dir", rep_args.out_dir, "Directory for the CSV files");
  rep->add_option("--reps", rep_args.reps, "Replications per cell");
  rep->add_option("--trials", rep_args.trials, "Monte Carlo trials for critical values");
  rep->add_option("--seed", rep_args.seed, "Base seed");
  rep->add_option("--threads", rep_args.threads, "Worker cap");

  HillArgs hill_args;
  auto* hill = app.add_subcommand("hill", "Hill estimate of the right tail index (JSON)");
  hill->add_option("input", hill_args.input, "Data file ('-' for stdin)")->required();
  hill->add_option("--k", hill_args.k, "Number of upper order statistics (default floor(sqrt n))");
  hill->add_option("--output,-o", hill_args.output, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*test) cmd_test(test_args, out);
    else if (*pp) cmd_pp_test(pp_args, out);
    else if (*cv) cmd_critical_value(cv_args, out, err);
    else if (*power) cmd_power(power_args, out, err);
    else if (*rep) cmd_reproduce(rep_args, out, err);
    else if (*hill) cmd_hill(hill_args, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  out.flush();
  return 0;
}

}  // namespace cxorder::cli
