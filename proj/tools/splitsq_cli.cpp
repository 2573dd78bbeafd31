// splitsq: sweeps, figure tables, strategy comparison, the gradient example
// and oracle certification from the command line.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "splitsq/analytic.hpp"
#include "splitsq/certify.hpp"
#include "splitsq/errors.hpp"
#include "splitsq/experiments.hpp"
#include "splitsq/oracle.hpp"
#include "splitsq/witness.hpp"

namespace {

using namespace splitsq;

constexpr int kUsage = 1;
constexpr int kCertifyFailed = 2;

struct StateFlags {
  std::string state = "sss_pn";
  int n = 100;
  int modes = 2;
  std::vector<double> p;
  std::vector<int> nk;
  std::optional<double> mu;
  std::string mu_grid;
  std::optional<double> m;
  int eta = 1;
  CLI::Option* modes_option = nullptr;

  // Without --modes, the length of --p or --nk sets the mode count.
  void resolve_modes() {
    if (modes_option && modes_option->count() > 0) return;
    if (!p.empty()) modes = static_cast<int>(p.size());
    if (!nk.empty()) modes = static_cast<int>(nk.size());
  }
};

struct OutputFlags {
  std::string format = "csv";
  std::string out;
};

void add_state_flags(CLI::App* cmd, StateFlags& f, bool grid) {
  cmd->add_option("--state", f.state, "sss_pn, sss_npn or dicke_pn")->capture_default_str();
  cmd->add_option("--n", f.n, "total particle number")->capture_default_str();
  f.modes_option = cmd->add_option("--modes", f.modes, "number of modes")->capture_default_str();
  cmd->add_option("--p", f.p, "splitting probabilities a,b,...")->delimiter(',');
  cmd->add_option("--nk", f.nk, "fixed counts per mode a,b,...")->delimiter(',');
  cmd->add_option("--mu", f.mu, "twisting strength");
  if (grid) cmd->add_option("--mu-grid", f.mu_grid, "lo:hi:steps");
  cmd->add_option("--m", f.m, "Dicke m (half-integers allowed)");
  cmd->add_option("--eta", f.eta, "repetitions")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, OutputFlags& f) {
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("--out", f.out, "output file (default stdout)");
}

int two_m_of(double m) {
  const double t = 2 * m;
  if (std::abs(t - std::round(t)) > 1e-9) throw DomainError("--m must be an integer or half-integer");
  return static_cast<int>(std::lround(t));
}

void emit(const OutputFlags& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw DomainError("cannot open " + o.out + " for writing");
  f << text;
}

void emit_table(const OutputFlags& o, const Table& t) {
  emit(o, o.format == "json" ? to_json(t).dump(2) + "\n" : to_csv(t));
}

void emit_json(const OutputFlags& o, const nlohmann::json& j) { emit(o, j.dump(2) + "\n"); }

SplitConfig config_of(const StateFlags& f) {
  const auto kind = parse_state_kind(f.state);
  if (kind == StateKind::sss_npn) {
    if (!f.p.empty()) throw DomainError("sss_npn takes --nk, not --p");
    if (!f.nk.empty()) {
      if (static_cast<int>(f.nk.size()) != f.modes) throw DomainError("--nk needs one count per mode");
      const auto cfg = SplitConfig::deterministic(f.nk);
      if (cfg.n_total() != f.n) throw DomainError("--nk must sum to --n");
      return cfg;
    }
    if (f.n % f.modes != 0) throw DomainError("equal fixed counts need --n divisible by --modes");
    return SplitConfig::equal(f.n, f.modes, false);
  }
  if (!f.nk.empty()) throw DomainError("--nk applies to sss_npn only");
  if (!f.p.empty()) {
    if (static_cast<int>(f.p.size()) != f.modes) throw DomainError("--p needs one probability per mode");
    return SplitConfig::probabilistic(f.n, f.p);
  }
  return SplitConfig::equal(f.n, f.modes, true);
}

MomentSet moments_of(const StateFlags& f, const SplitConfig& cfg) {
  if (parse_state_kind(f.state) == StateKind::dicke_pn) {
    if (!f.m) throw DomainError("dicke_pn needs --m");
    const DickeParams d(f.n, two_m_of(*f.m));
    return split_dicke_linear_moments(cfg, d,
                                      std::vector<ModeDirections>(cfg.modes(), {Direction::x_axis(), Direction::y_axis()}));
  }
  if (!f.mu) throw DomainError("squeezed states need --mu");
  const OatParams oat(f.n, *f.mu);
  const auto dirs = optimal_directions(f.n, *f.mu, cfg.modes());
  return cfg.partition_noise() ? sss_pn_moments(cfg, oat, dirs) : sss_npn_moments(cfg, oat, dirs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiparameter squeezing and mode entanglement of split spin ensembles"};
  app.require_subcommand(1);

  StateFlags sweep_state;
  OutputFlags sweep_out;
  std::vector<std::string> sweep_outputs;
  auto* sweep = app.add_subcommand("sweep", "evaluate witness quantities on a parameter grid");
  add_state_flags(sweep, sweep_state, true);
  add_output_flags(sweep, sweep_out);
  sweep->add_option("--outputs", sweep_outputs, "quantities to emit (default: all)")->delimiter(',');

  std::string objective = "lambda_min_xi2";
  StateFlags opt_state;
  OutputFlags opt_out;
  auto* opt = app.add_subcommand("optimal-mu", "minimize a squeezing eigenvalue over mu");
  opt->add_option("--objective", objective)->check(CLI::IsMember({"lambda_min_xi2", "lambda_min_xi2_ms"}))->capture_default_str();
  opt->add_option("--state", opt_state.state, "sss_pn or sss_npn")->capture_default_str();
  opt->add_option("--n", opt_state.n)->capture_default_str();
  opt->add_option("--modes", opt_state.modes)->capture_default_str();
  add_output_flags(opt, opt_out);

  int cmp_n = 1'000'000, cmp_modes = 2;
  std::vector<double> coeffs;
  OutputFlags cmp_out;
  auto* cmp = app.add_subcommand("compare", "local versus nonlocal squeezing strategies");
  cmp->add_option("--n", cmp_n)->capture_default_str();
  cmp->add_option("--modes", cmp_modes)->capture_default_str();
  cmp->add_option("--coeffs", coeffs, "weights n_k (normalized; default equal)")->delimiter(',');
  add_output_flags(cmp, cmp_out);

  std::string which;
  std::optional<int> fig_n;
  std::vector<int> fig_modes;
  std::vector<double> fig_m;
  std::string fig_grid;
  char panel = 'a';
  OutputFlags fig_out;
  auto* fig = app.add_subcommand("figure", "regenerate figure data");
  fig->add_option("which", which, "fig2a, fig2b, fig3, fig5 or fig6")->required();
  fig->add_option("--n", fig_n);
  fig->add_option("--modes", fig_modes)->delimiter(',');
  fig->add_option("--m", fig_m, "Dicke m values")->delimiter(',');
  fig->add_option("--grid", fig_grid, "lo:hi:steps");
  fig->add_option("--panel", panel, "fig3 panel a or b")->capture_default_str();
  add_output_flags(fig, fig_out);

  int grad_n = 1000, grad_eta = 1;
  double target_db = -10.0;
  OutputFlags grad_out;
  auto* grad = app.add_subcommand("gradient", "two-mode gradient sensing example");
  grad->add_option("--n", grad_n)->capture_default_str();
  grad->add_option("--target-db", target_db)->capture_default_str();
  grad->add_option("--eta", grad_eta)->capture_default_str();
  add_output_flags(grad, grad_out);

  int max_n = 6;
  std::uint64_t seed = 1;
  OutputFlags cert_out;
  auto* cert = app.add_subcommand("certify", "check the analytic moments against the Fock-basis oracle");
  cert->add_option("--max-n", max_n)->capture_default_str();
  cert->add_option("--seed", seed)->capture_default_str();
  add_output_flags(cert, cert_out);

  StateFlags wit_state;
  OutputFlags wit_out;
  auto* wit = app.add_subcommand("witness", "witness report for one state");
  add_state_flags(wit, wit_state, false);
  add_output_flags(wit, wit_out);

  StateFlags dump_state;
  OutputFlags dump_out;
  auto* dump = app.add_subcommand("dump-state", "oracle amplitudes of a small state");
  add_state_flags(dump, dump_state, false);
  add_output_flags(dump, dump_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    for (StateFlags* f : {&sweep_state, &wit_state, &dump_state}) f->resolve_modes();
    if (*sweep) {
      SweepSpec spec;
      spec.state = parse_state_kind(sweep_state.state);
      spec.n_total = sweep_state.n;
      spec.modes = sweep_state.modes;
      if (!sweep_state.p.empty()) spec.p = sweep_state.p;
      if (!sweep_state.nk.empty()) spec.counts = sweep_state.nk;
      if (sweep_state.m) spec.two_m = two_m_of(*sweep_state.m);
      spec.eta = sweep_state.eta;
      spec.outputs = sweep_outputs;
      if (spec.state != StateKind::dicke_pn) {
        if (!sweep_state.mu_grid.empty())
          spec.mu_grid = parse_grid(sweep_state.mu_grid);
        else if (sweep_state.mu)
          spec.mu_grid = {*sweep_state.mu};
        else
          throw DomainError("sweep needs --mu or --mu-grid");
      }
      emit_table(sweep_out, run_sweep(spec));
    } else if (*opt) {
      const auto kind = parse_state_kind(opt_state.state);
      if (kind == StateKind::dicke_pn) throw DomainError("optimal-mu applies to squeezed states");
      const OptimalMuParams params{opt_state.n, opt_state.modes, kind == StateKind::sss_pn};
      const auto obj = objective == "lambda_min_xi2" ? Objective::lambda_min_xi2 : Objective::lambda_min_xi2_ms;
      const auto r = optimal_mu(obj, params);
      emit_json(opt_out, {{"objective", objective},
                          {"state", opt_state.state},
                          {"n_total", params.n_total},
                          {"modes", params.modes},
                          {"mu_star", r.mu_star},
                          {"value", r.value},
                          {"value_db", 10 * std::log10(r.value)}});
    } else if (*cmp) {
      const auto r = coeffs.empty() ? strategy_comparison(cmp_n, cmp_modes)
                                    : strategy_comparison(cmp_n, cmp_modes, LinearCombination{coeffs});
      emit_json(cmp_out, to_json(r));
    } else if (*fig) {
      FigureOverrides o;
      o.n_total = fig_n;
      if (!fig_modes.empty()) o.modes = fig_modes;
      if (!fig_m.empty()) {
        std::vector<int> t;
        for (double m : fig_m) t.push_back(two_m_of(m));
        o.two_m = t;
      }
      if (!fig_grid.empty()) o.grid = parse_grid(fig_grid);
      o.panel = panel;
      emit_table(fig_out, figure_data(which, o));
    } else if (*grad) {
      emit_json(grad_out, to_json(gradient_example(grad_n, target_db, grad_eta)));
    } else if (*cert) {
      const auto r = oracle_certify(max_n, seed);
      emit_json(cert_out, r.to_json());
      return r.passed() ? 0 : kCertifyFailed;
    } else if (*wit) {
      const auto cfg = config_of(wit_state);
      const auto ms = moments_of(wit_state, cfg);
      emit_json(wit_out, to_json(witness_report(ms, EstimationConfig(wit_state.eta, cfg.mean_counts()))));
    } else if (*dump) {
      const auto cfg = config_of(dump_state);
      oracle::FockState st;
      const auto kind = parse_state_kind(dump_state.state);
      if (kind == StateKind::dicke_pn) {
        if (!dump_state.m) throw DomainError("dicke_pn needs --m");
        st = oracle::split_dicke_state(DickeParams(dump_state.n, two_m_of(*dump_state.m)), cfg.p());
      } else {
        if (!dump_state.mu) throw DomainError("squeezed states need --mu");
        st = kind == StateKind::sss_pn ? oracle::split_state(oracle::oat_state(dump_state.n, *dump_state.mu), cfg.p())
                                       : oracle::npn_state(cfg, *dump_state.mu).to_fock();
      }
      std::ostringstream s;
      oracle::write_dump(s, st);
      emit(dump_out, s.str());
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return 0;
}
