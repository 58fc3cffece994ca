#include "lwf/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "lwf/errors.hpp"
#include "lwf/parallel.hpp"
#include "lwf/rng.hpp"
#include "lwf/stat_tests.hpp"

namespace lwf {

namespace {

double parse_number(const std::string& key, std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParamError(fmt::format("distribution: bad value '{}' for {}", text, key));
  }
  return v;
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

DistSpec parse_dist_spec(const std::string& text) {
  auto open = text.find('(');
  std::string family = text.substr(0, open);
  std::map<std::string, double> kv;
  if (open != std::string::npos) {
    if (text.back() != ')') throw ParamError(fmt::format("distribution: missing ')' in '{}'", text));
    std::string_view body(text.data() + open + 1, text.size() - open - 2);
    while (!body.empty()) {
      auto comma = body.find(',');
      auto item = body.substr(0, comma);
      auto eq = item.find('=');
      if (eq == std::string_view::npos) throw ParamError(fmt::format("distribution: expected key=value, got '{}'", item));
      std::string key(item.substr(0, eq));
      key.erase(std::remove(key.begin(), key.end(), ' '), key.end());
      if (kv.count(key)) throw ParamError(fmt::format("distribution: duplicate key '{}'", key));
      kv[key] = parse_number(key, item.substr(eq + 1));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
  }

  auto take = [&](const char* key, std::optional<double> fallback = std::nullopt) {
    auto it = kv.find(key);
    if (it == kv.end()) {
      if (!fallback) throw ParamError(fmt::format("distribution: {} needs {}", family, key));
      return *fallback;
    }
    double v = it->second;
    kv.erase(it);
    return v;
  };

  DistSpec spec;
  if (family == "normal") {
    double mu = take("mu", 0.0);
    spec = dist::Normal{mu, take("sigma", 1.0)};
  } else if (family == "student_t" || family == "t") {
    spec = dist::StudentT{take("nu")};
  } else if (family == "pareto") {
    spec = dist::Pareto{take("alpha")};
  } else if (family == "exponential") {
    spec = dist::Exponential{take("rate", 1.0)};
  } else if (family == "weibull") {
    double shape = take("shape");
    spec = dist::Weibull{shape, take("scale", 1.0)};
  } else if (family == "skewed_t") {
    double nu = take("nu");
    spec = dist::SkewedT{nu, take("gamma")};
  } else if (family == "skew_normal") {
    double xi = take("xi", 0.0);
    double omega = take("omega", 1.0);
    spec = dist::SkewNormal{xi, omega, take("alpha")};
  } else {
    throw ParamError(fmt::format("distribution: unknown family '{}'", family));
  }
  if (!kv.empty()) throw ParamError(fmt::format("distribution: unknown key '{}' for {}", kv.begin()->first, family));
  validate(spec);
  return spec;
}

std::vector<Table1Cell> default_table1_grid() {
  std::vector<Table1Cell> grid;
  for (double nu : {5.0, 1.5, 1.0}) {
    for (double g : {0.1, 0.3, 0.5}) grid.push_back({dist::StudentT{nu}, {0.2, 1.5, g}});
  }
  for (double alpha : {5.0, 1.5, 1.0}) {
    for (double g : {0.1, 0.2, 0.25}) grid.push_back({dist::Pareto{alpha}, {0.2, 1.5, g}});
  }
  return grid;
}

CsvTable run_table1(std::span<const Table1Cell> grid, std::size_t n, std::uint64_t seed, std::size_t threads) {
  for (const auto& cell : grid) {
    validate(cell.input);
    cell.tau.validate();
  }
  std::vector<std::vector<std::string>> rows(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const auto& cell = grid[i];
    std::string family;
    double shape = 0.0;
    if (auto* t = std::get_if<dist::StudentT>(&cell.input)) {
      family = "student_t";
      shape = t->nu;
    } else if (auto* p = std::get_if<dist::Pareto>(&cell.input)) {
      family = "pareto";
      shape = p->alpha;
    } else {
      family = describe(cell.input);
      shape = std::nan("");
    }
    auto u = draw(cell.input, n, substream_seed(seed, i)).values;
    auto y = forward(u, cell.tau);
    std::vector<std::string> row{family, format_number(shape), format_number(cell.tau.gamma)};
    if (!std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); })) {
      row.insert(row.end(), {"", "", "", "overflow", "0"});
    } else {
      auto fit = igmm_fit(y);
      const auto& t = fit.tau_hat;
      row.push_back(format_number(cell.tau.mu - t.mu));
      row.push_back(format_number(cell.tau.gamma - t.gamma));
      row.push_back(format_number(cell.tau.sigma / t.sigma));
      row.emplace_back(to_string(fit.status));
      row.push_back(std::to_string(fit.iterations));
    }
    rows[i] = std::move(row);
  });

  CsvTable table({"family", "nu_or_alpha", "gamma", "mu_minus_mu_hat", "gamma_minus_gamma_hat",
                  "sigma_over_sigma_hat", "status", "iterations"});
  for (auto& r : rows) table.add_row(std::move(r));
  return table;
}

void Table2Config::validate() const {
  if (!(t_df > 0.0)) throw ParamError("table2: t_df must be positive");
  if (!(sn_omega > 0.0) || !std::isfinite(sn_xi)) throw ParamError("table2: need finite xi and omega > 0");
  for (const auto& g : t_gammas) {
    if (g && !(*g > 0.0)) throw ParamError("table2: skewed-t gamma must be positive");
  }
  for (const auto& a : sn_alphas) {
    if (a && !std::isfinite(*a)) throw ParamError("table2: skew-normal alpha must be finite");
  }
  if (n < 20) throw ParamError("table2: n must be at least 20");
  if (bootstrap && bootstrap_replicates < 99) throw ParamError("table2: at least 99 bootstrap replicates");
}

CsvTable run_table2(const Table2Config& config, std::uint64_t seed, std::size_t threads) {
  config.validate();
  struct RowSpec {
    std::string family;
    std::optional<double> param;
    DistSpec spec;
  };
  std::vector<RowSpec> specs;
  for (const auto& g : config.t_gammas) {
    if (g) {
      specs.push_back({"skewed_t", g, dist::SkewedT{config.t_df, *g}});
    } else {
      specs.push_back({"student_t", g, dist::StudentT{config.t_df}});
    }
  }
  for (const auto& a : config.sn_alphas) {
    if (a) {
      specs.push_back({"skew_normal", a, dist::SkewNormal{config.sn_xi, config.sn_omega, *a}});
    } else {
      specs.push_back({"normal", a, dist::Normal{config.sn_xi, config.sn_omega}});
    }
  }

  std::vector<std::vector<std::string>> rows(specs.size());
  parallel_for(specs.size(), threads, [&](std::size_t i) {
    const std::uint64_t row_seed = substream_seed(seed, i);
    auto u = draw(specs[i].spec, config.n, row_seed).values;

    Rng grid = Rng::substream(row_seed, 99);
    const double umax = *std::max_element(u.begin(), u.end());
    std::uint64_t b_max = 100;
    while (b_max > 0 && static_cast<double>(b_max) / 100.0 * umax > 1.0) --b_max;
    const double a = static_cast<double>(grid.below(101)) / 100.0;
    const double b = static_cast<double>(grid.below(b_max + 1)) / 100.0;
    const double c = 0.1 + static_cast<double>(grid.below(141)) / 100.0;

    auto y = forward(u, {a, c, -b});
    auto fit = igmm_fit(y);
    auto back = inverse(y, fit.tau_hat, InversePolicy::Clamp).values;
    auto naive = ks_naive_t(back);
    std::string p_boot;
    if (config.bootstrap) {
      p_boot = format_number(
          ks_bootstrap_t(back, config.bootstrap_replicates, substream_seed(row_seed, 7)).p_value);
    }
    rows[i] = {specs[i].family,
               opt_number(specs[i].param),
               format_number(a),
               format_number(b),
               format_number(c),
               format_number(moments(u).skewness),
               format_number(naive.p_value),
               p_boot,
               std::string(to_string(fit.status))};
  });

  CsvTable table({"family", "skew_param", "a", "b", "c", "skewness", "p_naive", "p_bootstrap", "fit_status"});
  for (auto& r : rows) table.add_row(std::move(r));
  return table;
}

void RegimeScanConfig::validate() const {
  if (replicates == 0) throw ParamError("regime-scan: replicates must be positive");
  if (!(band_beta > 0.0) || !(overlay_beta > 0.0)) throw ParamError("regime-scan: beta must be positive");
  if (k_hi != 0 && k_lo > k_hi) throw ParamError("regime-scan: k_lo exceeds k_hi");
  if (band_n != 0 && band_n < 100) throw ParamError("regime-scan: band n must be at least 100");
}

RegimeScanResult run_regime_scan(const ReturnsSeries& series, const RegimeScanConfig& config,
                                 std::uint64_t seed, std::size_t threads) {
  config.validate();
  if (series.values.size() < 100) {
    throw InputError(fmt::format("regime-scan: series has {} observations, need at least 100", series.values.size()));
  }
  for (double v : series.values) {
    if (!std::isfinite(v)) throw InputError("regime-scan: series holds non-finite values");
  }
  auto cleaned = series.apply_zeros(substream_seed(seed, 1));
  const auto& x = cleaned.values;
  if (x.size() < 100) {
    throw InputError(fmt::format("regime-scan: {} observations left after removing zeros", x.size()));
  }
  const std::size_t n = x.size();
  const std::size_t band_n = config.band_n ? config.band_n : n;

  auto bands = build_regime_bands(band_n, config.replicates, config.band_beta, substream_seed(seed, 0), threads);
  auto data = modified_hill_path(x, config.band_beta, PathTransform::AbsoluteValues);
  auto overlay = modified_hill_path(x, config.overlay_beta, PathTransform::AbsoluteValues);

  auto scaled = [&](double f) {
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(f * static_cast<double>(n))), 1, n - 1);
  };
  const std::size_t k_lo = config.k_lo ? config.k_lo : scaled(0.07);
  const std::size_t k_hi = config.k_hi ? config.k_hi : scaled(0.85);

  RegimeScanResult result{CsvTable({"k", "band_nu5", "band_nu2", "band_nu1", "data", "overlay", "regime"}),
                          classify_regime(data, bands, k_lo, k_hi), cleaned.zeros};
  const std::string regime(to_string(result.classification.regime));
  const std::size_t k_max = std::max(n, band_n) - 1;
  for (std::size_t k = 1; k <= k_max; ++k) {
    result.table.add_row({std::to_string(k), opt_number(bands.band(5.0).at(k)), opt_number(bands.band(2.0).at(k)),
                          opt_number(bands.band(1.0).at(k)), opt_number(data.at(k)), opt_number(overlay.at(k)),
                          regime});
  }
  return result;
}

CsvTable tail_plot(std::span<const double> x, std::span<const double> betas, PathTransform transform) {
  CsvTable table({"series", "k", "alpha_hat"});
  for (double beta : betas) {
    auto path = modified_hill_path(x, beta, transform);
    const std::string label = fmt::format("beta={}", format_number(beta));
    for (std::size_t i = 0; i < path.k_values.size(); ++i) {
      table.add_row({label, std::to_string(path.k_values[i]), opt_number(path.alpha_hat[i])});
    }
  }
  return table;
}

std::vector<DistSpec> AcfCheckConfig::default_specs() {
  return {dist::Normal{0.0, 1.0}, dist::Weibull{1.5, 1.0}, dist::Exponential{1.0}, dist::StudentT{5.0}};
}

void AcfCheckConfig::validate() const {
  for (const auto& s : specs) lwf::validate(s);
  if (max_lag == 0) throw ParamError("acf-check: max_lag must be positive");
  if (4 * max_lag >= n) throw ParamError("acf-check: max_lag must stay below n / 4");
  if (n < 10) throw ParamError("acf-check: n must be at least 10");
}

CsvTable run_acf_check(const AcfCheckConfig& config, std::uint64_t seed, std::size_t threads) {
  config.validate();
  std::vector<std::size_t> lags(config.max_lag);
  std::iota(lags.begin(), lags.end(), std::size_t{1});

  std::vector<CsvTable> parts(config.specs.size(),
                              CsvTable({"family", "lag", "acf", "band", "flagged", "ljung_box_p", "fit_status"}));
  parallel_for(config.specs.size(), threads, [&](std::size_t i) {
    auto u = draw(config.specs[i], config.n, substream_seed(seed, i)).values;
    std::vector<double> x;
    std::string status;
    if (config.passthrough) {
      x = std::move(u);
      status = "passthrough";
    } else {
      auto fit = igmm_fit(u);
      x = inverse(u, fit.tau_hat, InversePolicy::Clamp).values;
      status = std::string(to_string(fit.status));
    }
    auto r = acf(x, config.max_lag);
    const std::string p = format_number(ljung_box(x, lags).p_value);
    const std::string family = describe(config.specs[i]);
    for (std::size_t k = 0; k < r.values.size(); ++k) {
      parts[i].add_row({family, std::to_string(k + 1), format_number(r.values[k]), format_number(r.band),
                        std::abs(r.values[k]) > r.band ? "1" : "0", p, status});
    }
  });
  CsvTable table(parts.empty() ? std::vector<std::string>{"family", "lag", "acf", "band", "flagged", "ljung_box_p",
                                                         "fit_status"}
                               : parts.front().header());
  for (const auto& part : parts) table.append(part);
  return table;
}

CsvTable simulate_table(const DistSpec& spec, const LwfParams& tau, std::size_t n, std::uint64_t seed) {
  tau.validate();
  auto u = draw(spec, n, seed).values;
  auto y = forward(u, tau);
  CsvTable table({"index", "u", "y"});
  for (std::size_t i = 0; i < n; ++i) table.add_row({std::to_string(i), format_number(u[i]), format_number(y[i])});
  return table;
}

CsvTable transform_table(std::span<const double> x, const LwfParams& tau, TransformDirection direction,
                         InversePolicy policy) {
  tau.validate();
  std::vector<double> out;
  std::vector<char> clamped(x.size(), 0);
  if (direction == TransformDirection::Forward) {
    out = forward(x, tau);
  } else {
    auto rep = inverse(x, tau, policy);
    out = std::move(rep.values);
    for (auto i : rep.clamped_indices) clamped[i] = 1;
  }
  CsvTable table({"index", "input", "output", "clamped"});
  for (std::size_t i = 0; i < x.size(); ++i) {
    table.add_row({std::to_string(i), format_number(x[i]), format_number(out[i]), clamped[i] ? "1" : "0"});
  }
  return table;
}

CsvTable igmm_table(const FitReport& report) {
  CsvTable table({"iteration", "mu", "sigma", "gamma", "status"});
  for (std::size_t i = 0; i < report.trace.size(); ++i) {
    const auto& t = report.trace[i];
    table.add_row({std::to_string(i), format_number(t.mu), format_number(t.sigma), format_number(t.gamma),
                   i + 1 == report.trace.size() ? std::string(to_string(report.status)) : std::string()});
  }
  return table;
}

}  // namespace lwf
