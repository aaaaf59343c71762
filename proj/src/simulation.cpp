#include "cxorder/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "cxorder/baselines.hpp"
#include "cxorder/errors.hpp"
#include "cxorder/parallel.hpp"
#include "cxorder/rng.hpp"

namespace cxorder {

namespace {

constexpr std::uint64_t kCriticalValueStream = 0x6376;  // "cv"

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::uint64_t data_seed(std::uint64_t base, const Alternative& alt, std::size_t n) {
  std::ostringstream os;
  os.precision(17);
  os << alt.name() << '|' << alt.param << '|' << n;
  return derive_seed(base, hash_string(os.str()));
}

// Sorted replications of one (family, param, n) cell, row-major.
std::vector<double> simulate_cell(const Alternative& alt, std::size_t n, const PowerGrid& grid) {
  const auto reps = static_cast<std::size_t>(grid.replications);
  std::vector<double> data(reps * n);
  const std::uint64_t seed = data_seed(grid.base_seed, alt, n);
  parallel_for(reps, grid.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> buffer;
    for (std::size_t r = begin; r < end; ++r) {
      Engine rng = stream_engine(seed, r);
      alt_sample_into(alt, n, rng, buffer);
      std::sort(buffer.begin(), buffer.end());
      std::copy(buffer.begin(), buffer.end(), data.begin() + static_cast<std::ptrdiff_t>(r * n));
    }
  });
  return data;
}

PowerRow make_row(const Alternative& alt, std::size_t n, const PowerGrid& grid) {
  PowerRow row;
  row.family = alt.name();
  row.param = alt.param;
  row.n = n;
  row.trials = grid.replications;
  row.seed = grid.base_seed;
  return row;
}

void set_rate(PowerRow& row, std::size_t rejections, int replications) {
  row.rate = static_cast<double>(rejections) / replications;
  row.se = std::sqrt(row.rate * (1.0 - row.rate) / replications);
}

std::vector<Side> expand(Side side) {
  if (side == Side::Both) return {Side::Upper, Side::Lower};
  return {side};
}

void convex_order_rows(const PowerGrid& grid, const Alternative& alt, std::size_t n,
                       const std::vector<double>& data, PowerTable& out) {
  const auto reps = static_cast<std::size_t>(grid.replications);
  for (const auto& design : grid.designs) {
    for (double p : grid.p_grid) {
      TestSpec spec;
      spec.g = grid.g;
      spec.m = design.m;
      spec.p_norm = p;
      spec.side = grid.side;
      if (design.ell > 0) spec.indices = AutoIndices{design.ell, grid.assumed};
      spec.sig_level = grid.sig_level;
      spec.mc_trials = grid.mc_trials;
      spec.seed = derive_seed(grid.base_seed, kCriticalValueStream);
      spec.threads = grid.threads;

      std::vector<PowerRow> rows;
      for (Side side : expand(grid.side)) {
        PowerRow row = make_row(alt, n, grid);
        row.m = design.m;
        row.ell = design.ell > 0 ? design.ell : design.m;
        row.p = p;
        row.side = to_string(side);
        rows.push_back(std::move(row));
      }
      try {
        const auto indices = resolve_indices(spec);
        const StatisticEvaluator evaluator(spec.g, spec.m, indices, spec.p_norm, n);
        const auto table = null_distribution(spec, n);
        const double c_upper = empirical_critical_value((*table)[0], spec.sig_level);
        const double c_lower = empirical_critical_value((*table)[1], spec.sig_level);
        std::vector<unsigned char> reject_upper(reps);
        std::vector<unsigned char> reject_lower(reps);
        parallel_for(reps, grid.threads, [&](std::size_t begin, std::size_t end) {
          for (std::size_t r = begin; r < end; ++r) {
            const std::span<const double> sample(data.data() + r * n, n);
            const auto [upper, lower] = evaluator.evaluate(sample);
            reject_upper[r] = upper >= c_upper;
            reject_lower[r] = lower >= c_lower;
          }
        });
        for (auto& row : rows) {
          const auto& flags = row.side == "lower" ? reject_lower : reject_upper;
          set_rate(row, static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1)), grid.replications);
        }
      } catch (const SpecError& e) {
        for (auto& row : rows) {
          row.rate = row.se = std::nan("");
          row.error = e.what();
        }
      }
      for (auto& row : rows) out.push_back(std::move(row));
    }
  }
}

void proschan_pyke_rows(const PowerGrid& grid, const Alternative& alt, std::size_t n,
                        const std::vector<double>& data, PowerTable& out) {
  const auto reps = static_cast<std::size_t>(grid.replications);
  PPOptions options;
  options.sig_level = grid.sig_level;
  options.mc_trials = grid.mc_trials;
  options.seed = derive_seed(grid.base_seed, kCriticalValueStream);
  options.threads = grid.threads;
  const auto table = pp_null_distribution(n, options);
  const double c_ihr = empirical_critical_value((*table)[0], grid.sig_level);
  const double c_dhr = empirical_critical_value((*table)[1], grid.sig_level);
  std::vector<unsigned char> reject_ihr(reps);
  std::vector<unsigned char> reject_dhr(reps);
  parallel_for(reps, grid.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const auto d = normalized_spacings(std::span<const double>(data.data() + r * n, n));
      reject_ihr[r] = static_cast<double>(pp_statistic(d)) > c_ihr;
      reject_dhr[r] = static_cast<double>(pp_statistic_reversed(d)) > c_dhr;
    }
  });
  for (Side side : expand(grid.side)) {
    PowerRow row = make_row(alt, n, grid);
    row.side = side == Side::Lower ? "pp-dhr" : "pp-ihr";
    const auto& flags = side == Side::Lower ? reject_dhr : reject_ihr;
    set_rate(row, static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1)), grid.replications);
    out.push_back(std::move(row));
  }
}

}  // namespace

std::vector<TestDesign> designs_all(const std::vector<int>& m_grid) {
  std::vector<TestDesign> out;
  for (int m : m_grid) out.push_back({m, 0});
  return out;
}

std::vector<TestDesign> designs_drop(const std::vector<int>& m_grid, int drop) {
  std::vector<TestDesign> out;
  for (int m : m_grid) out.push_back({m, m - drop});
  return out;
}

std::vector<double> param_range(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw ConfigError("parameter range needs lo <= hi and step > 0");
  std::vector<double> out;
  const auto count = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int k = 0; k <= count; ++k) {
    // Round to 12 significant digits so 0.1-steps print cleanly.
    const double v = lo + k * step;
    out.push_back(std::round(v * 1e12) / 1e12);
  }
  return out;
}

PowerTable estimate_power(const PowerGrid& grid) {
  if (grid.replications < 1) throw ConfigError("replications must be at least 1");
  if (grid.test == TestKind::ConvexOrder && grid.designs.empty()) throw ConfigError("power grid has no test designs");
  PowerTable out;
  for (double param : grid.params) {
    const Alternative alt{grid.family, param};
    for (int n_int : grid.n_grid) {
      if (n_int < 1) throw ConfigError("sample sizes must be positive");
      const auto n = static_cast<std::size_t>(n_int);
      const auto data = simulate_cell(alt, n, grid);
      if (grid.test == TestKind::ProschanPyke) {
        proschan_pyke_rows(grid, alt, n, data, out);
      } else {
        convex_order_rows(grid, alt, n, data, out);
      }
    }
  }
  return out;
}

std::string format_csv(const PowerTable& table) {
  std::ostringstream os;
  os << "family,param,n,m,ell,p,side,rate,se,trials,seed\n";
  for (const auto& r : table) {
    os << r.family << ',' << format_number(r.param) << ',' << r.n << ',' << r.m << ',' << r.ell << ','
       << format_number(r.p) << ',' << r.side << ',' << format_number(r.rate) << ',' << format_number(r.se) << ','
       << r.trials << ',' << r.seed << '\n';
  }
  return os.str();
}

void write_csv(const PowerTable& table, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << format_csv(table);
}

const std::vector<std::string>& exhibit_names() {
  static const std::vector<std::string> names = {"table1", "table2", "fig_drhr", "fig_ior",
                                                 "fig_dor", "fig_pp", "fig_3d"};
  return names;
}

std::vector<PowerGrid> exhibit_grids(const std::string& target, const ReproduceOptions& options) {
  PowerGrid base;
  base.replications = options.replications;
  base.mc_trials = options.mc_trials;
  base.base_seed = options.base_seed;
  base.threads = options.threads;
  base.n_grid = {25, 50, 100, 200};
  const std::vector<int> m_std = {1, 5, 10, 20};

  if (target == "table1") {
    PowerGrid g = base;
    g.family = Alternative::Kind::Weibull;
    g.params = {1.5};
    g.g = RefFamily::exponential();
    g.designs = designs_all(m_std);
    g.p_grid = {1.0, 2.0, kInf};
    return {g};
  }
  if (target == "table2") {
    PowerGrid pp = base;
    pp.family = Alternative::Kind::StudentT;
    pp.params = {1.1};
    pp.n_grid = {25, 50, 100, 200, 500};
    pp.test = TestKind::ProschanPyke;
    pp.side = Side::Both;
    PowerGrid proposed = pp;
    proposed.test = TestKind::ConvexOrder;
    proposed.g = RefFamily::exponential();
    proposed.designs = designs_all(m_std);
    return {pp, proposed};
  }
  if (target == "fig_drhr") {
    PowerGrid g = base;
    g.family = Alternative::Kind::NegWeibull;
    g.params = param_range(1.0, 2.0, 0.1);
    g.g = RefFamily::neg_exponential();
    g.designs = designs_all(m_std);
    return {g};
  }
  if (target == "fig_ior") {
    PowerGrid g = base;
    g.family = Alternative::Kind::LogLogistic;
    g.params = param_range(1.0, 2.0, 0.1);
    g.g = RefFamily::log_logistic(1.0);
    g.designs = designs_drop({3, 5, 10, 20}, 2);
    g.assumed = TailInfo{1.0, kInf};
    return {g};
  }
  if (target == "fig_dor") {
    PowerGrid g = base;
    g.family = Alternative::Kind::LogLogistic;
    g.params = param_range(0.1, 1.0, 0.1);
    g.g = RefFamily::log_logistic(1.0);
    g.side = Side::Lower;
    g.designs = {{25, 5}, {30, 10}, {35, 15}, {40, 20}};
    g.assumed = TailInfo{0.1, kInf};
    return {g};
  }
  if (target == "fig_pp") {
    PowerGrid proposed = base;
    proposed.family = Alternative::Kind::Weibull;
    proposed.params = param_range(1.0, 2.0, 0.1);
    proposed.g = RefFamily::exponential();
    proposed.designs = designs_all(m_std);
    PowerGrid pp = proposed;
    pp.test = TestKind::ProschanPyke;
    return {pp, proposed};
  }
  if (target == "fig_3d") {
    const std::vector<int> m_surface = {1, 2, 3, 5, 8, 10, 15, 20, 25, 30, 40};
    std::vector<int> m_ior;
    std::copy_if(m_surface.begin(), m_surface.end(), std::back_inserter(m_ior), [](int m) { return m >= 3; });
    PowerGrid drhr = base;
    drhr.family = Alternative::Kind::NegWeibull;
    drhr.params = {1.5};
    drhr.g = RefFamily::neg_exponential();
    drhr.designs = designs_all(m_surface);
    PowerGrid ior = base;
    ior.family = Alternative::Kind::LogLogistic;
    ior.params = {1.5};
    ior.g = RefFamily::log_logistic(1.0);
    ior.designs = designs_drop(m_ior, 2);
    ior.assumed = TailInfo{1.0, kInf};
    PowerGrid ihr = base;
    ihr.family = Alternative::Kind::Weibull;
    ihr.params = {1.5};
    ihr.g = RefFamily::exponential();
    ihr.designs = designs_all(m_surface);
    return {drhr, ior, ihr};
  }
  throw ConfigError("unknown exhibit '" + target + "'");
}

PowerTable reproduce(const std::string& target, const ReproduceOptions& options,
                     const std::filesystem::path& out_dir) {
  PowerTable all;
  for (const auto& grid : exhibit_grids(target, options)) {
    auto rows = estimate_power(grid);
    all.insert(all.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
  }
  write_csv(all, out_dir / (target + ".csv"));
  return all;
}

}  // namespace cxorder
