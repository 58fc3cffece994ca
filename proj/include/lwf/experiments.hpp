#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lwf/csv.hpp"
#include "lwf/igmm.hpp"
#include "lwf/sampling.hpp"
#include "lwf/tail_index.hpp"
#include "lwf/transform.hpp"

namespace lwf {

/// Parses the text produced by describe(), e.g. "student_t(nu=5)" or
/// "skew_normal(xi=4,omega=2,alpha=1)". Parameters with defaults may be
/// omitted. ParamError on unknown families, keys or bad numbers.
DistSpec parse_dist_spec(const std::string& text);

// ---------------------------------------------------------------------------
// Simulation study of the moment fit

struct Table1Cell {
  DistSpec input;
  LwfParams tau;
};

/// Student nu in {5, 1.5, 1} x gamma in {0.1, 0.3, 0.5} followed by Pareto
/// alpha in {5, 1.5, 1} x gamma in {0.1, 0.2, 0.25}; mu = 0.2, sigma = 1.5.
std::vector<Table1Cell> default_table1_grid();

/// Columns: family, nu_or_alpha, gamma, mu_minus_mu_hat, gamma_minus_gamma_hat,
/// sigma_over_sigma_hat, status, iterations. Cell i uses substream i of
/// `seed`. A forward sample that overflows is reported with status
/// "overflow" and empty estimates.
CsvTable run_table1(std::span<const Table1Cell> grid, std::size_t n, std::uint64_t seed,
                    std::size_t threads = 1);

// ---------------------------------------------------------------------------
// Goodness of fit after back-transformation

struct Table2Config {
  /// Fernandez-Steel gammas; an empty entry is the symmetric t.
  std::vector<std::optional<double>> t_gammas{std::nullopt, 0.20, 0.40, 0.75, 0.90};
  double t_df = 4.0;
  /// Skew-normal slants; an empty entry is the normal.
  std::vector<std::optional<double>> sn_alphas{std::nullopt, 0.10, 0.50, 1.00, 2.50, 5.00, 8.00};
  double sn_xi = 4.0;
  double sn_omega = 2.0;
  std::size_t n = 1000;
  bool bootstrap = false;
  std::size_t bootstrap_replicates = 199;

  void validate() const;
};

/// One row per entry of t_gammas then sn_alphas. Each row simulates U, forms
/// y = u exp(-b u) c + a with (a, b, c) drawn from the grids a in 0:0.01:1,
/// b in 0:0.01:1 with b max(u) <= 1, c in 0.1:0.01:1.5, fits the moment
/// model, back-transforms and tests for a Student t.
///
/// Columns: family, skew_param, a, b, c, skewness, p_naive, p_bootstrap,
/// fit_status. skewness is that of the simulated input; p_bootstrap is empty
/// unless config.bootstrap.
CsvTable run_table2(const Table2Config& config, std::uint64_t seed, std::size_t threads = 1);

// ---------------------------------------------------------------------------
// Tail regimes

struct RegimeScanConfig {
  /// 0 means the length of the series.
  std::size_t band_n = 0;
  std::size_t replicates = 100;
  double band_beta = 2.0;
  double overlay_beta = 1.001;
  /// Classification window; 0 picks round(0.07 n) and round(0.85 n).
  std::size_t k_lo = 0;
  std::size_t k_hi = 0;

  void validate() const;
};

struct RegimeScanResult {
  /// k, band_nu5, band_nu2, band_nu1, data, overlay, regime.
  /// `data` is the series at band_beta, `overlay` at overlay_beta.
  CsvTable table;
  RegimeClassification classification;
  std::size_t zeros = 0;
};

/// Applies the zeros policy of `series`, builds the bands, overlays the
/// modified Hill path of the absolute values and classifies the series with
/// the band_beta curve. InputError for fewer than 100 observations.
RegimeScanResult run_regime_scan(const ReturnsSeries& series, const RegimeScanConfig& config,
                                 std::uint64_t seed, std::size_t threads = 1);

/// Columns: series, k, alpha_hat. One block per beta; absent entries are
/// written as empty cells.
CsvTable tail_plot(std::span<const double> x, std::span<const double> betas,
                   PathTransform transform = PathTransform::AbsoluteValues);

// ---------------------------------------------------------------------------
// Serial dependence after back-transformation

struct AcfCheckConfig {
  /// Normal(0, 1), Weibull(1.5, 1), Exponential(1) and Student t(5).
  std::vector<DistSpec> specs = default_specs();
  std::size_t n = 1000;
  std::size_t max_lag = 30;
  /// Skip the fit and inspect the simulated values unchanged.
  bool passthrough = false;

  static std::vector<DistSpec> default_specs();
  void validate() const;
};

/// Columns: family, lag, acf, band, flagged, ljung_box_p, fit_status.
CsvTable run_acf_check(const AcfCheckConfig& config, std::uint64_t seed, std::size_t threads = 1);

// ---------------------------------------------------------------------------
// Single-sample utilities

/// Columns: index, u, y with y = forward(u, tau).
CsvTable simulate_table(const DistSpec& spec, const LwfParams& tau, std::size_t n, std::uint64_t seed);

enum class TransformDirection { Forward, Inverse };

/// Columns: index, input, output, clamped.
CsvTable transform_table(std::span<const double> x, const LwfParams& tau, TransformDirection direction,
                         InversePolicy policy = InversePolicy::Clamp);

/// Columns: iteration, mu, sigma, gamma, status. The status cell is filled on
/// the last row only.
CsvTable igmm_table(const FitReport& report);

}  // namespace lwf
