#include "splitsq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "splitsq/analytic.hpp"
#include "splitsq/closed_form.hpp"
#include "splitsq/errors.hpp"
#include "splitsq/kernels.hpp"
#include "splitsq/witness.hpp"

namespace splitsq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMuGrid = 2048;

double to_db(double x) { return 10.0 * std::log10(x); }

// Evaluates f, turning a library error into NaN.
double guard(const std::function<double()>& f) {
  try {
    return f();
  } catch (const Error&) {
    return kNaN;
  }
}

ModeDirections directions_at(int n, double mu) {
  try {
    return optimal_directions(n, mu);
  } catch (const UndefinedAngle&) {
    // μ → 0 limit of the squeezing angle; any pair works at the isotropic points.
    const double c = std::cos(kPi / 4), s = std::sin(kPi / 4);
    return {Direction(0, c, s), Direction(0, -s, c)};
  }
}

MomentSet squeezed_moments(const SplitConfig& cfg, double mu) {
  const auto d = directions_at(cfg.n_total(), mu);
  const std::vector<ModeDirections> dirs(cfg.modes(), d);
  const OatParams oat(cfg.n_total(), mu);
  return cfg.partition_noise() ? sss_pn_moments(cfg, oat, dirs) : sss_npn_moments(cfg, oat, dirs);
}

std::vector<Direction> x_axes(int modes) { return std::vector<Direction>(modes, Direction::x_axis()); }

MomentSet dicke_linear(const SplitConfig& cfg, const DickeParams& d) {
  return split_dicke_linear_moments(cfg, d, std::vector<ModeDirections>(cfg.modes(), {Direction::x_axis(), Direction::y_axis()}));
}

std::string label(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

std::vector<double> logspace_rounded(double lo, double hi, int n, long multiple) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const double x = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
    const long v = std::max(multiple, std::lround(x / multiple) * multiple);
    if (out.empty() || out.back() != v) out.push_back(static_cast<double>(v));
  }
  return out;
}

std::vector<double> int_range(int lo, int hi) {
  std::vector<double> out;
  for (int i = lo; i <= hi; ++i) out.push_back(i);
  return out;
}

int as_int(double x, const char* what) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-9 || r < 1) throw DomainError(std::string(what) + ": grid values must be positive integers");
  return static_cast<int>(r);
}

}  // namespace

// ---------------------------------------------------------------------------
// optimal μ

double objective_value(Objective obj, const OptimalMuParams& params, double mu) {
  if (params.n_total < 2) throw DomainError("objective_value: N must be at least 2");
  if (params.modes < 1) throw DomainError("objective_value: at least one mode");
  if (mu == 0.0) return 1.0;
  double v;
  if (obj == Objective::lambda_min_xi2)
    v = closed_form::lambda_min_xi2(params.n_total, mu);
  else if (params.partition_noise)
    v = closed_form::lambda_min_xi2_ms_pn_equal(params.n_total, params.modes, mu);
  else
    v = closed_form::lambda_min_xi2_ms_npn_equal(params.n_total, params.modes, mu);
  return std::isfinite(v) ? v : kInf;
}

OptimalMu optimal_mu(Objective obj, const OptimalMuParams& params) {
  if (params.n_total < 2) throw DomainError("optimal_mu: N must be at least 2");
  if (obj == Objective::lambda_min_xi2_ms && !params.partition_noise && params.n_total % params.modes != 0)
    throw DomainError("optimal_mu: fixed counts need N divisible by M");
  auto f = [&](double mu) { return objective_value(obj, params, mu); };

  int best = 1;
  double best_value = kInf;
  for (int i = 1; i <= kMuGrid; ++i) {
    const double v = f(kPi * i / kMuGrid);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = kPi * (best - 1) / kMuGrid;
  double hi = kPi * std::min(best + 1, kMuGrid) / kMuGrid;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-10) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  const double mu = 0.5 * (lo + hi);
  const double v = f(mu);
  if (v <= best_value) return {mu, v};
  return {kPi * best / kMuGrid, best_value};
}

// ---------------------------------------------------------------------------
// local vs nonlocal strategies

StrategyComparison strategy_comparison(int n_total, int modes, const LinearCombination& n) {
  if (modes < 1) throw DomainError("strategy_comparison: at least one mode");
  if (static_cast<int>(n.coefficients.size()) != modes)
    throw DimensionMismatch("strategy_comparison: one coefficient per mode");
  if (!n.is_normalized()) throw DomainError("strategy_comparison: n must be normalized");
  if (n_total < 2) throw DomainError("strategy_comparison: N must be at least 2");

  StrategyComparison out{n, 0, 0, 0, 0, 0, {}};

  // Nonlocal: split with p_k = n_k², flip the modes with negative weight.
  std::vector<double> p, weights;
  std::vector<bool> flips;
  for (double c : n.coefficients) {
    if (c == 0.0) continue;
    p.push_back(c * c);
    weights.push_back(c);
    flips.push_back(c < 0);
  }
  const double psum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= psum;
  const auto nonlocal = optimal_mu(Objective::lambda_min_xi2, {n_total, 1, true});
  const auto cfg = SplitConfig::probabilistic(n_total, p);
  const auto ms = apply_pi_flips(squeezed_moments(cfg, nonlocal.mu_star), flips);
  out.mu_star_nonlocal = nonlocal.mu_star;
  out.xi2_me_opt = quadratic_form(xi2_matrix(ms, EstimationConfig::from_split(cfg)).sym(), weights);

  // Local: independent squeezing of round(n_k²·N) particles per mode.
  double largest = -1.0;
  for (double c : n.coefficients) {
    LocalMode mode{static_cast<int>(std::lround(c * c * n_total)), 0.0, 1.0};
    if (mode.n_particles >= 2) {
      const auto opt = optimal_mu(Objective::lambda_min_xi2, {mode.n_particles, 1, true});
      mode.mu_star = opt.mu_star;
      mode.xi2 = opt.value;
    }
    out.xi2_ms_opt += c * c * mode.xi2;
    if (std::abs(c) > largest) {
      largest = std::abs(c);
      out.mu_star_local = mode.mu_star;
    }
    out.local.push_back(mode);
  }
  out.gain_ratio = out.xi2_ms_opt / out.xi2_me_opt;
  return out;
}

StrategyComparison strategy_comparison(int n_total, int modes) {
  if (modes < 1) throw DomainError("strategy_comparison: at least one mode");
  return strategy_comparison(n_total, modes, LinearCombination::unit(Vector(modes, 1.0)));
}

nlohmann::json to_json(const StrategyComparison& r) {
  nlohmann::json local = nlohmann::json::array();
  for (const auto& m : r.local) local.push_back({{"n_particles", m.n_particles}, {"mu_star", m.mu_star}, {"xi2", m.xi2}});
  return {{"n_coefficients", r.n_coefficients.coefficients},
          {"xi2_me_opt", r.xi2_me_opt},
          {"xi2_ms_opt", r.xi2_ms_opt},
          {"gain_ratio", r.gain_ratio},
          {"mu_star_nonlocal", r.mu_star_nonlocal},
          {"mu_star_local", r.mu_star_local},
          {"local", local}};
}

// ---------------------------------------------------------------------------
// gradient sensing with two modes

GradientReport gradient_example(int n_total, double target_db, int eta) {
  if (n_total < 2) throw DomainError("gradient_example: N must be at least 2");
  if (eta < 1) throw DomainError("gradient_example: eta must be positive");
  if (!(target_db < 0.0)) throw DomainError("gradient_example: target must be below 0 dB");
  const auto opt = optimal_mu(Objective::lambda_min_xi2, {n_total, 1, true});
  if (to_db(opt.value) > target_db)
    throw TargetUnreachable("gradient_example: target below the optimum of " + label(to_db(opt.value)) + " dB");

  // Descending branch: ξ² falls from 1 at μ = 0 to the optimum.
  auto g = [&](double mu) { return to_db(closed_form::lambda_min_xi2(n_total, mu)) - target_db; };
  double lo = 0.0, hi = opt.mu_star;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  const double mu = std::abs(g(lo)) < std::abs(g(hi)) && lo > 0 ? lo : hi;
  if (std::abs(g(mu)) > 1e-6) throw TargetUnreachable("gradient_example: bisection did not reach the target");

  const auto cfg = SplitConfig::probabilistic(n_total, {0.5, 0.5});
  const auto est = EstimationConfig::from_split(cfg, eta);
  const auto ms = apply_pi_flips(squeezed_moments(cfg, mu), {false, true});
  const auto xi = xi2_matrix(ms, est);
  const LinearCombination n = LinearCombination::unit({1.0, -1.0});

  GradientReport r{};
  r.n_total = n_total;
  r.eta = eta;
  r.target_db = target_db;
  r.mu = mu;
  r.global_xi2 = quadratic_form(xi.sym(), n.coefficients);
  r.global_xi2_db = to_db(r.global_xi2);
  r.local_xi2 = xi.sym()(0, 0);
  r.local_xi2_db = to_db(r.local_xi2);

  const double n_all = n_total, n_a = 0.5 * n_total;
  r.nonlocal_delta_sqrt = std::sqrt(r.global_xi2 / (eta * n_all));
  r.local_delta_sqrt = std::sqrt(r.local_xi2 / (eta * n_a));
  r.nonlocal_delta_linear = r.global_xi2 / std::sqrt(eta * n_all);
  r.local_delta_linear = r.local_xi2 / std::sqrt(eta * n_a);
  r.ratio_sqrt = r.local_delta_sqrt / r.nonlocal_delta_sqrt;
  r.ratio_linear = r.local_delta_linear / r.nonlocal_delta_linear;
  r.uncertainty_ratio = r.local_xi2 / r.global_xi2 * std::sqrt(n_all / n_a);

  const auto moment = moment_matrix(ms);
  r.nonlocal_delta_moments = std::sqrt(combo_variance(estimator_covariance(moment, est), n));
  double local_var = 0.0;
  for (std::size_t k = 0; k < 2; ++k)
    local_var += n.coefficients[k] * n.coefficients[k] / (eta * moment.sym()(k, k));
  r.local_delta_moments = std::sqrt(local_var);
  return r;
}

nlohmann::json to_json(const GradientReport& r) {
  return {{"n_total", r.n_total},
          {"eta", r.eta},
          {"target_db", r.target_db},
          {"mu", r.mu},
          {"global_xi2", r.global_xi2},
          {"global_xi2_db", r.global_xi2_db},
          {"local_xi2", r.local_xi2},
          {"local_xi2_db", r.local_xi2_db},
          {"nonlocal_delta_sqrt", r.nonlocal_delta_sqrt},
          {"local_delta_sqrt", r.local_delta_sqrt},
          {"nonlocal_delta_linear", r.nonlocal_delta_linear},
          {"local_delta_linear", r.local_delta_linear},
          {"ratio_sqrt", r.ratio_sqrt},
          {"ratio_linear", r.ratio_linear},
          {"uncertainty_ratio", r.uncertainty_ratio},
          {"nonlocal_delta_moments", r.nonlocal_delta_moments},
          {"local_delta_moments", r.local_delta_moments}};
}

// ---------------------------------------------------------------------------
// figures

namespace {

Table fig2a(const FigureOverrides& o) {
  const int n = o.n_total.value_or(500);
  const auto modes = o.modes.value_or(std::vector<int>{2, 4, 5, 10});
  Table t;
  t.grid_name = "mu";
  t.grid = o.grid.value_or(linspace(0.0, 0.2, 201));
  validate_mu_grid(t.grid);
  t.spec = {{"figure", "fig2a"}, {"n_total", n}, {"modes", modes}};

  auto column = [&](auto f) {
    return kernels::map_grid<double>(t.grid.size(), o.parallel, [&](std::size_t i) { return guard([&] { return f(t.grid[i]); }); });
  };
  t.add("lambda_min_xi2", column([&](double mu) { return mu == 0 ? 1.0 : closed_form::lambda_min_xi2(n, mu); }));
  for (int m : modes) {
    const std::string s = "_M" + std::to_string(m);
    const bool npn_ok = n % m == 0 && n / m >= 1;
    t.add("lambda_min_xi2_ms_pn" + s,
          column([&](double mu) { return mu == 0 ? 1.0 : closed_form::lambda_min_xi2_ms_pn_equal(n, m, mu); }));
    t.add("inv_lambda_max_chi2_ms_pn" + s,
          column([&](double mu) { return 1.0 / closed_form::lambda_max_chi_inv2_ms_pn_equal(n, m, mu); }));
    t.add("lambda_min_xi2_ms_npn" + s, column([&](double mu) {
            if (!npn_ok) return kNaN;
            return mu == 0 ? 1.0 : closed_form::lambda_min_xi2_ms_npn_equal(n, m, mu);
          }));
    t.add("inv_lambda_max_chi2_ms_npn" + s, column([&](double mu) {
            return npn_ok ? 1.0 / closed_form::lambda_max_chi_inv2_ms_npn_equal(n, m, mu) : kNaN;
          }));
  }
  return t;
}

long lcm_of(const std::vector<int>& v) {
  long l = 1;
  for (int x : v) l = std::lcm(l, static_cast<long>(x));
  return l;
}

Table fig2b(const FigureOverrides& o) {
  const auto modes = o.modes.value_or(std::vector<int>{2, 4, 5, 10});
  Table t;
  t.grid_name = "n_total";
  t.grid = o.grid.value_or(logspace_rounded(10, 1e5, 40, lcm_of(modes)));
  t.spec = {{"figure", "fig2b"}, {"modes", modes}};
  std::vector<int> ns;
  for (double x : t.grid) ns.push_back(as_int(x, "fig2b"));

  const auto global = kernels::map_grid<OptimalMu>(ns.size(), o.parallel, [&](std::size_t i) {
    return ns[i] < 2 ? OptimalMu{kNaN, kNaN} : optimal_mu(Objective::lambda_min_xi2, {ns[i], 1, true});
  });
  std::vector<double> v, mu;
  for (const auto& g : global) {
    v.push_back(g.value);
    mu.push_back(g.mu_star);
  }
  t.add("min_xi2", v);
  t.add("mu_star_xi2", mu);
  for (int m : modes) {
    for (bool pn : {true, false}) {
      const auto res = kernels::map_grid<OptimalMu>(ns.size(), o.parallel, [&](std::size_t i) {
        if (ns[i] < 2 || (!pn && ns[i] % m != 0)) return OptimalMu{kNaN, kNaN};
        return optimal_mu(Objective::lambda_min_xi2_ms, {ns[i], m, pn});
      });
      std::vector<double> val, at;
      for (const auto& r : res) {
        val.push_back(r.value);
        at.push_back(r.mu_star);
      }
      const std::string s = std::string(pn ? "_pn" : "_npn") + "_M" + std::to_string(m);
      t.add("min_xi2_ms" + s, val);
      t.add("mu_star_xi2_ms" + s, at);
    }
  }
  return t;
}

Table fig3(const FigureOverrides& o) {
  Table t;
  if (o.panel == 'a') {
    const std::vector<int> ns = o.n_total ? std::vector<int>{*o.n_total} : std::vector<int>{100, 10'000, 1'000'000};
    t.grid_name = "modes";
    t.grid = o.grid.value_or(int_range(1, 10));
    t.spec = {{"figure", "fig3"}, {"panel", "a"}, {"n_total", ns}};
    std::vector<int> ms;
    for (double x : t.grid) ms.push_back(as_int(x, "fig3"));
    for (int n : ns) {
      t.add("gain_ratio_N" + std::to_string(n), kernels::map_grid<double>(ms.size(), o.parallel, [&](std::size_t i) {
              return guard([&] { return strategy_comparison(n, ms[i]).gain_ratio; });
            }));
    }
    std::vector<double> asym;
    for (int m : ms) asym.push_back(std::pow(m, 2.0 / 3.0));
    t.add("m_pow_two_thirds", asym);
  } else if (o.panel == 'b') {
    const auto modes = o.modes.value_or(std::vector<int>{2, 3, 4});
    t.grid_name = "n_total";
    t.grid = o.grid.value_or(logspace_rounded(10, 1e6, 30, 1));
    t.spec = {{"figure", "fig3"}, {"panel", "b"}, {"modes", modes}};
    std::vector<int> ns;
    for (double x : t.grid) ns.push_back(as_int(x, "fig3"));
    for (int m : modes) {
      t.add("gain_ratio_M" + std::to_string(m), kernels::map_grid<double>(ns.size(), o.parallel, [&](std::size_t i) {
              return guard([&] { return strategy_comparison(ns[i], m).gain_ratio; });
            }));
      t.add("m_pow_two_thirds_M" + std::to_string(m), std::vector<double>(ns.size(), std::pow(m, 2.0 / 3.0)));
    }
  } else {
    throw UnknownFigure("fig3: panel must be 'a' or 'b'");
  }
  return t;
}

std::vector<int> default_two_m(const FigureOverrides& o, std::vector<int> m_values) {
  if (o.two_m) return *o.two_m;
  for (int& m : m_values) m *= 2;
  return m_values;
}

Table fig5(const FigureOverrides& o) {
  const int n = o.n_total.value_or(100);
  const auto two_ms = default_two_m(o, {0, 10, 20, 30, 40});
  Table t;
  t.grid_name = "p";
  t.grid = o.grid.value_or(linspace(0.01, 0.99, 99));
  t.spec = {{"figure", "fig5"}, {"n_total", n}, {"two_m", two_ms}};
  for (double p : t.grid)
    if (!(p > 0 && p < 1)) throw DomainError("fig5: splitting ratios must lie in (0, 1)");
  for (int tm : two_ms) {
    const DickeParams d(n, tm);
    const std::string s = "_m" + label(d.m());
    t.add("lambda_min_xi2_nl" + s, kernels::map_grid<double>(t.grid.size(), o.parallel, [&](std::size_t i) {
            return guard([&] {
              const auto cfg = SplitConfig::probabilistic(n, {t.grid[i], 1.0 - t.grid[i]});
              return xi2_matrix(split_dicke_nl_reduced(cfg, d, x_axes(2)), EstimationConfig::from_split(cfg)).lambda_min();
            });
          }));
    t.add("reference" + s, std::vector<double>(t.grid.size(), 1.0 / closed_form::lambda_max_chi_inv2_split_dicke(d)));
  }
  return t;
}

Table fig6(const FigureOverrides& o) {
  const int n = o.n_total.value_or(100);
  const auto two_ms = default_two_m(o, {0, 10, 20, 30, 40});
  Table t;
  t.grid_name = "modes";
  t.grid = o.grid.value_or(int_range(1, 50));
  t.spec = {{"figure", "fig6"}, {"n_total", n}, {"two_m", two_ms}};
  std::vector<int> ms;
  for (double x : t.grid) ms.push_back(as_int(x, "fig6"));
  for (int tm : two_ms) {
    const DickeParams d(n, tm);
    t.add("inv_lambda_max_chi2_ms_m" + label(d.m()), kernels::map_grid<double>(ms.size(), o.parallel, [&](std::size_t i) {
            return guard([&] {
              const auto cfg = SplitConfig::equal(n, ms[i], true);
              return 1.0 / chi_inv2_ms_matrix(dicke_linear(cfg, d), true).lambda_max();
            });
          }));
  }
  std::vector<double> bound;
  for (int m : ms) bound.push_back(1.0 / m);
  t.add("one_over_modes", bound);
  return t;
}

}  // namespace

Table figure_data(const std::string& which, const FigureOverrides& overrides) {
  if (which == "fig2a") return fig2a(overrides);
  if (which == "fig2b") return fig2b(overrides);
  if (which == "fig3") return fig3(overrides);
  if (which == "fig5") return fig5(overrides);
  if (which == "fig6") return fig6(overrides);
  throw UnknownFigure("figure_data: unknown figure '" + which + "'");
}

// ---------------------------------------------------------------------------
// sweeps

StateKind parse_state_kind(const std::string& s) {
  if (s == "sss_pn") return StateKind::sss_pn;
  if (s == "sss_npn") return StateKind::sss_npn;
  if (s == "dicke_pn") return StateKind::dicke_pn;
  throw DomainError("unknown state kind '" + s + "' (expected sss_pn, sss_npn or dicke_pn)");
}

const char* to_string(StateKind s) {
  switch (s) {
    case StateKind::sss_pn: return "sss_pn";
    case StateKind::sss_npn: return "sss_npn";
    case StateKind::dicke_pn: return "dicke_pn";
  }
  return "?";
}

std::vector<std::string> sweep_quantities(StateKind s) {
  if (s == StateKind::dicke_pn)
    return {"inv_lambda_max_chi2", "inv_lambda_max_chi2_ms", "lambda_min_xi2_nl", "lambda_min_xi2_ms_nl",
            "qfi_certified_depth", "reference"};
  return {"lambda_min_xi2",     "lambda_max_xi2",  "lambda_min_xi2_ms", "inv_lambda_max_chi2",
          "inv_lambda_max_chi2_ms", "xi2_db",     "certified_depth",   "qfi_certified_depth",
          "f_minus",            "f_plus",          "theta_s"};
}

void validate_mu_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("mu grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] < 2 * kPi)) throw DomainError("mu grid values must lie in [0, 2π)");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("mu grid must be strictly increasing");
  }
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw DomainError("grid must be lo:hi:steps");
  try {
    std::size_t used = 0;
    const double lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw DomainError("bad grid bound");
    const double hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw DomainError("bad grid bound");
    const int steps = std::stoi(parts[2], &used);
    if (used != parts[2].size() || steps < 1) throw DomainError("grid steps must be a positive integer");
    return linspace(lo, hi, steps);
  } catch (const std::logic_error&) {
    throw DomainError("grid must be lo:hi:steps with numeric fields");
  }
}

namespace {

SplitConfig sweep_config(const SweepSpec& spec) {
  if (spec.state == StateKind::sss_npn) {
    if (spec.p) throw DomainError("sss_npn takes --nk, not --p");
    if (spec.counts) {
      if (static_cast<int>(spec.counts->size()) != spec.modes) throw DimensionMismatch("--nk needs one count per mode");
      const auto cfg = SplitConfig::deterministic(*spec.counts);
      if (cfg.n_total() != spec.n_total) throw DomainError("--nk must sum to --n");
      return cfg;
    }
    if (spec.n_total % spec.modes != 0) throw DomainError("equal fixed counts need N divisible by M");
    return SplitConfig::equal(spec.n_total, spec.modes, false);
  }
  if (spec.counts) throw DomainError("--nk applies to sss_npn only");
  if (spec.p) {
    if (static_cast<int>(spec.p->size()) != spec.modes) throw DimensionMismatch("--p needs one probability per mode");
    return SplitConfig::probabilistic(spec.n_total, *spec.p);
  }
  return SplitConfig::equal(spec.n_total, spec.modes, true);
}

std::vector<double> squeezed_point(const SplitConfig& cfg, int eta, double mu) {
  const int n = cfg.n_total();
  std::vector<double> v(11, kNaN);
  try {
    const auto f = f_n_pm(n, mu);
    v[8] = f.f_minus;
    v[9] = f.f_plus;
    v[10] = guard([&] { return squeezing_angle(n, mu); });
    const auto ms = squeezed_moments(cfg, mu);
    const auto est = EstimationConfig(eta, cfg.mean_counts());
    v[0] = guard([&] { return xi2_matrix(ms, est).lambda_min(); });
    v[1] = guard([&] { return xi2_matrix(ms, est).lambda_max(); });
    v[2] = guard([&] { return xi2_ms_matrix(ms).lambda_min(); });
    v[3] = guard([&] { return 1.0 / chi_inv2_matrix(ms, est, true).lambda_max(); });
    v[4] = guard([&] { return 1.0 / chi_inv2_ms_matrix(ms, true).lambda_max(); });
    v[5] = to_db(v[0]);
    v[6] = guard([&] { return double(k_producibility_witness(xi2_ms_matrix(ms)).certified_depth); });
    v[7] = guard([&] { return double(qfi_depth_witness(chi_inv2_ms_matrix(ms, true)).certified_depth); });
  } catch (const Error&) {
  }
  return v;
}

std::vector<double> dicke_point(const SweepSpec& spec, const SplitConfig& cfg, int two_m) {
  std::vector<double> v(6, kNaN);
  try {
    const DickeParams d(spec.n_total, two_m);
    const auto est = EstimationConfig(spec.eta, cfg.mean_counts());
    const auto lin = dicke_linear(cfg, d);
    v[0] = guard([&] { return 1.0 / chi_inv2_matrix(lin, est, true).lambda_max(); });
    v[1] = guard([&] { return 1.0 / chi_inv2_ms_matrix(lin, true).lambda_max(); });
    const auto nl = split_dicke_nl_reduced(cfg, d, x_axes(cfg.modes()));
    v[2] = guard([&] { return xi2_matrix(nl, est).lambda_min(); });
    v[3] = guard([&] { return xi2_ms_matrix(nl).lambda_min(); });
    v[4] = guard([&] { return double(qfi_depth_witness(chi_inv2_ms_matrix(lin, true)).certified_depth); });
    v[5] = guard([&] { return 1.0 / closed_form::lambda_max_chi_inv2_split_dicke(d); });
  } catch (const Error&) {
  }
  return v;
}

}  // namespace

Table run_sweep(const SweepSpec& spec, bool parallel) {
  if (spec.n_total < 1) throw DomainError("sweep: N must be positive");
  if (spec.modes < 1) throw DomainError("sweep: at least one mode");
  if (spec.eta < 1) throw DomainError("sweep: eta must be positive");
  const auto all = sweep_quantities(spec.state);
  const auto outputs = spec.outputs.empty() ? all : spec.outputs;
  std::vector<std::size_t> pick;
  for (const auto& name : outputs) {
    const auto it = std::find(all.begin(), all.end(), name);
    if (it == all.end()) throw DomainError("sweep: unknown output '" + name + "' for " + to_string(spec.state));
    pick.push_back(static_cast<std::size_t>(it - all.begin()));
  }
  const auto cfg = sweep_config(spec);

  Table t;
  t.spec = {{"state", to_string(spec.state)}, {"n_total", spec.n_total}, {"modes", spec.modes}, {"eta", spec.eta}};
  if (cfg.partition_noise())
    t.spec["p"] = cfg.p();
  else
    t.spec["nk"] = cfg.counts();

  std::vector<std::vector<double>> rows;
  if (spec.state == StateKind::dicke_pn) {
    std::vector<int> two_ms;
    if (spec.two_m) {
      two_ms.push_back(*spec.two_m);
    } else {
      for (int tm = -spec.n_total; tm <= spec.n_total; tm += 2) two_ms.push_back(tm);
    }
    DickeParams(spec.n_total, two_ms.front());
    t.grid_name = "m";
    for (int tm : two_ms) t.grid.push_back(0.5 * tm);
    rows = kernels::map_grid<std::vector<double>>(two_ms.size(), parallel,
                                                  [&](std::size_t i) { return dicke_point(spec, cfg, two_ms[i]); });
  } else {
    validate_mu_grid(spec.mu_grid);
    t.grid_name = "mu";
    t.grid = spec.mu_grid;
    rows = kernels::map_grid<std::vector<double>>(t.grid.size(), parallel,
                                                  [&](std::size_t i) { return squeezed_point(cfg, spec.eta, t.grid[i]); });
  }
  for (std::size_t c = 0; c < pick.size(); ++c) {
    std::vector<double> col;
    for (const auto& r : rows) col.push_back(r[pick[c]]);
    t.add(outputs[c], col);
  }
  return t;
}

}  // namespace splitsq
