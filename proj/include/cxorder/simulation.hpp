#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cxorder/distributions.hpp"
#include "cxorder/testing.hpp"

namespace cxorder {

enum class TestKind { ConvexOrder, ProschanPyke };

/// One (m, ell) configuration of the convex-order test. ell = 0 uses every
/// rank 1..m; otherwise ranks come from select_indices with the grid's
/// assumed tails.
struct TestDesign {
  int m = 1;
  int ell = 0;
};

std::vector<TestDesign> designs_all(const std::vector<int>& m_grid);
/// ell = m - drop for each m.
std::vector<TestDesign> designs_drop(const std::vector<int>& m_grid, int drop);

struct PowerGrid {
  Alternative::Kind family = Alternative::Kind::Weibull;
  std::vector<double> params;
  std::vector<int> n_grid;
  TestKind test = TestKind::ConvexOrder;
  RefFamily g = RefFamily::exponential();
  /// Ignored for ProschanPyke.
  std::vector<TestDesign> designs;
  std::vector<double> p_grid{1.0};
  /// Both emits one row per side. For ProschanPyke Upper is IHR, Lower DHR.
  Side side = Side::Upper;
  TailInfo assumed;
  int replications = 5000;
  int mc_trials = 5000;
  double sig_level = 0.1;
  std::uint64_t base_seed = 0;
  unsigned threads = 0;
};

struct PowerRow {
  std::string family;
  double param = 0.0;
  std::size_t n = 0;
  /// 0 for Proschan-Pyke rows.
  int m = 0;
  int ell = 0;
  double p = 0.0;
  /// upper, lower, pp-ihr or pp-dhr.
  std::string side;
  double rate = 0.0;
  double se = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  /// Non-empty when the cell could not be run (e.g. too few eligible ranks).
  std::string error;
};

using PowerTable = std::vector<PowerRow>;

/// Rejection rates over the grid. Critical values are shared across cells
/// with the same null configuration; replications of one (param, n) cell
/// are shared across test designs. Deterministic in base_seed.
PowerTable estimate_power(const PowerGrid& grid);

/// Evenly spaced values lo, lo + step, ..., up to hi (inclusive).
std::vector<double> param_range(double lo, double hi, double step);

/// Header `family,param,n,m,ell,p,side,rate,se,trials,seed`.
std::string format_csv(const PowerTable& table);
void write_csv(const PowerTable& table, const std::filesystem::path& path);

struct ReproduceOptions {
  int replications = 5000;
  int mc_trials = 5000;
  std::uint64_t base_seed = 20240101;
  unsigned threads = 0;
};

/// table1, table2, fig_drhr, fig_ior, fig_dor, fig_pp, fig_3d.
const std::vector<std::string>& exhibit_names();

/// The grids behind one exhibit. Throws ConfigError for unknown names.
std::vector<PowerGrid> exhibit_grids(const std::string& target, const ReproduceOptions& options);

/// Runs an exhibit and writes <out_dir>/<target>.csv.
PowerTable reproduce(const std::string& target, const ReproduceOptions& options,
                     const std::filesystem::path& out_dir);

}  // namespace cxorder
