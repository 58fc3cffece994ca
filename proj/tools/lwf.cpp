#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lwf/errors.hpp"
#include "lwf/experiments.hpp"
#include "lwf/parallel.hpp"
#include "lwf/rng.hpp"

namespace {

enum ExitCode { kOk = 0, kInputError = 1, kNumericFailure = 2 };

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;
};

struct DataSource {
  std::string input;
  std::string column = "0";
  bool no_header = false;
  std::string dist;
  std::size_t n = 1000;
  std::string zeros = "fill";

  void attach(CLI::App* cmd, bool with_dist) {
    cmd->add_option("--input", input, "CSV file to read");
    cmd->add_option("--column", column, "Column name or 0-based index")->capture_default_str();
    cmd->add_flag("--no-header", no_header, "The CSV file has no header row");
    cmd->add_option("--zeros", zeros, "Handling of exact zeros: drop or fill")
        ->check(CLI::IsMember({"drop", "fill"}))
        ->capture_default_str();
    if (with_dist) {
      cmd->add_option("--dist", dist, "Simulate instead of reading, e.g. student_t(nu=5)");
      cmd->add_option("--n", n, "Simulated sample size")->capture_default_str();
    }
  }

  lwf::ZerosPolicy policy() const { return zeros == "drop" ? lwf::ZerosPolicy::Drop : lwf::ZerosPolicy::UniformFill; }

  lwf::ReturnsSeries load(std::uint64_t seed) const {
    if (!input.empty() && !dist.empty()) throw lwf::InputError("give either --input or --dist, not both");
    if (!dist.empty()) {
      lwf::ReturnsSeries s;
      s.values = lwf::draw(lwf::parse_dist_spec(dist), n, seed).values;
      s.zeros_policy = policy();
      return s;
    }
    if (input.empty()) throw lwf::InputError("an --input file is required");
    return lwf::ingest_csv(input, column, !no_header, policy());
  }
};

void emit(const lwf::CsvTable& table, const std::string& path) {
  if (path.empty() || path == "-") {
    table.write(std::cout);
    std::cout.flush();
    if (!std::cout) throw lwf::IoError("cannot write to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw lwf::IoError(fmt::format("cannot open '{}' for writing", path));
  table.write(out);
  out.close();
  if (!out) throw lwf::IoError(fmt::format("cannot write '{}'", path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lambert W x F transforms, moment fits, tail regimes and goodness-of-fit experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed of every random draw")->capture_default_str();
  app.add_option("--out", g.out, "Output CSV path (standard output when omitted)");
  app.add_option("--threads", g.threads, "Worker threads (overrides LWF_THREADS)")->check(CLI::NonNegativeNumber);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Draw a sample and apply the forward transform");
  std::string sim_dist;
  std::size_t sim_n = 1000;
  lwf::LwfParams sim_tau;
  sim->add_option("--dist", sim_dist, "Input distribution, e.g. student_t(nu=5)")->required();
  sim->add_option("--n", sim_n, "Sample size")->capture_default_str();
  sim->add_option("--mu", sim_tau.mu)->capture_default_str();
  sim->add_option("--sigma", sim_tau.sigma)->capture_default_str();
  sim->add_option("--gamma", sim_tau.gamma)->capture_default_str();

  // transform
  auto* tr = app.add_subcommand("transform", "Forward or inverse transform of a CSV column");
  DataSource tr_src;
  tr_src.attach(tr, false);
  lwf::LwfParams tr_tau;
  std::string tr_direction = "inverse";
  std::string tr_policy = "clamp";
  tr->add_option("--mu", tr_tau.mu)->capture_default_str();
  tr->add_option("--sigma", tr_tau.sigma)->capture_default_str();
  tr->add_option("--gamma", tr_tau.gamma)->capture_default_str();
  tr->add_option("--direction", tr_direction)->check(CLI::IsMember({"forward", "inverse"}))->capture_default_str();
  tr->add_option("--policy", tr_policy, "Inverse beyond the branch point: strict or clamp")
      ->check(CLI::IsMember({"strict", "clamp"}))
      ->capture_default_str();

  // igmm-fit
  auto* fit = app.add_subcommand("igmm-fit", "Fit (mu, sigma, gamma) by iterative moment matching");
  DataSource fit_src;
  fit_src.attach(fit, true);
  lwf::IgmmConfig fit_cfg;
  fit->add_option("--tol", fit_cfg.tol)->capture_default_str();
  fit->add_option("--max-iter", fit_cfg.max_iter)->capture_default_str();

  // tail-plot
  auto* tp = app.add_subcommand("tail-plot", "Modified Hill plot series for one or more beta");
  DataSource tp_src;
  tp_src.attach(tp, true);
  std::vector<double> tp_betas{2.0};
  bool tp_raw = false;
  tp->add_option("--beta", tp_betas, "Harmonic moment parameter(s)")->capture_default_str();
  tp->add_flag("--raw", tp_raw, "Use the values as given instead of their absolute values");

  // regime-scan
  auto* rs = app.add_subcommand("regime-scan", "Regime bands, data overlay and classification");
  DataSource rs_src;
  rs_src.attach(rs, true);
  lwf::RegimeScanConfig rs_cfg;
  rs->add_option("--band-n", rs_cfg.band_n, "Band sample size (default: series length)");
  rs->add_option("--replicates", rs_cfg.replicates, "Samples averaged per band")->capture_default_str();
  rs->add_option("--band-beta", rs_cfg.band_beta, "Beta of the bands and the classified curve")->capture_default_str();
  rs->add_option("--overlay-beta", rs_cfg.overlay_beta, "Beta of the overlay curve")->capture_default_str();
  rs->add_option("--k-lo", rs_cfg.k_lo, "Lower end of the classification window");
  rs->add_option("--k-hi", rs_cfg.k_hi, "Upper end of the classification window");

  // table1
  auto* t1 = app.add_subcommand("table1", "Moment-fit errors over the default simulation grid");
  std::size_t t1_n = 1000;
  t1->add_option("--n", t1_n)->capture_default_str();

  // table2
  auto* t2 = app.add_subcommand("table2", "Student-t goodness of fit after back-transformation");
  lwf::Table2Config t2_cfg;
  t2->add_option("--n", t2_cfg.n)->capture_default_str();
  t2->add_flag("--bootstrap", t2_cfg.bootstrap, "Add parametric bootstrap p-values");
  t2->add_option("--replicates", t2_cfg.bootstrap_replicates, "Bootstrap replicates")->capture_default_str();

  // acf-check
  auto* ac = app.add_subcommand("acf-check", "Autocorrelation of back-transformed samples");
  lwf::AcfCheckConfig ac_cfg;
  std::vector<std::string> ac_dists;
  ac->add_option("--dist", ac_dists, "Input distribution(s); default: the four standard families");
  ac->add_option("--n", ac_cfg.n)->capture_default_str();
  ac->add_option("--max-lag", ac_cfg.max_lag, "Largest lag")->capture_default_str();
  ac->add_flag("--passthrough", ac_cfg.passthrough, "Skip the fit (i.i.d. control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    const std::size_t threads = lwf::resolve_threads(g.threads);
    std::optional<lwf::CsvTable> table;

    if (*sim) {
      table = lwf::simulate_table(lwf::parse_dist_spec(sim_dist), sim_tau, sim_n, g.seed);
    } else if (*tr) {
      auto series = tr_src.load(g.seed);
      table = lwf::transform_table(
          series.values, tr_tau,
          tr_direction == "forward" ? lwf::TransformDirection::Forward : lwf::TransformDirection::Inverse,
          tr_policy == "strict" ? lwf::InversePolicy::Strict : lwf::InversePolicy::Clamp);
    } else if (*fit) {
      fit_cfg.validate();
      auto series = fit_src.load(g.seed);
      auto report = lwf::igmm_fit(series.values, fit_cfg);
      table = lwf::igmm_table(report);
    } else if (*tp) {
      auto series = tp_src.load(g.seed);
      auto cleaned = series.apply_zeros(lwf::substream_seed(g.seed, 1));
      table = lwf::tail_plot(cleaned.values, tp_betas,
                             tp_raw ? lwf::PathTransform::Raw : lwf::PathTransform::AbsoluteValues);
    } else if (*rs) {
      auto series = rs_src.load(g.seed);
      auto result = lwf::run_regime_scan(series, rs_cfg, g.seed, threads);
      const auto& c = result.classification;
      std::cerr << fmt::format("regime {} (I {:.3f}, II {:.3f}, III {:.3f} over {} points; {} zeros)\n",
                               lwf::to_string(c.regime), c.fraction_i, c.fraction_ii, c.fraction_iii, c.points,
                               result.zeros);
      table = std::move(result.table);
    } else if (*t1) {
      auto grid = lwf::default_table1_grid();
      table = lwf::run_table1(grid, t1_n, g.seed, threads);
    } else if (*t2) {
      table = lwf::run_table2(t2_cfg, g.seed, threads);
    } else if (*ac) {
      if (!ac_dists.empty()) {
        ac_cfg.specs.clear();
        for (const auto& d : ac_dists) ac_cfg.specs.push_back(lwf::parse_dist_spec(d));
      }
      table = lwf::run_acf_check(ac_cfg, g.seed, threads);
    }

    emit(*table, g.out);
    return kOk;
  } catch (const lwf::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const lwf::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const lwf::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const lwf::ParamError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const lwf::DegenerateError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const lwf::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const lwf::RangeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  }
}
