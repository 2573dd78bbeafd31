#pragma once

#include <optional>
#include <string>
#include <vector>

#include "splitsq/metrology.hpp"
#include "splitsq/params.hpp"
#include "splitsq/table.hpp"

namespace splitsq {

enum class Objective { lambda_min_xi2, lambda_min_xi2_ms };

struct OptimalMuParams {
  int n_total = 2;
  int modes = 1;  // equal split; only used by lambda_min_xi2_ms
  bool partition_noise = true;
};

struct OptimalMu {
  double mu_star;
  double value;
};

// Closed-form objective at one μ; non-finite values are reported as +inf.
double objective_value(Objective obj, const OptimalMuParams& params, double mu);

// Minimum over μ ∈ (0, π]: 2048-point grid, then golden section on the
// bracket around the best grid point down to a width of 1e-10. The value is
// never above any grid value. The objectives are even under μ → 2π - μ.
OptimalMu optimal_mu(Objective obj, const OptimalMuParams& params);

struct LocalMode {
  int n_particles;  // round(n_k²·N)
  double mu_star;
  double xi2;       // 1 when the mode holds fewer than two particles
};

struct StrategyComparison {
  LinearCombination n_coefficients;
  double xi2_me_opt;  // nᵀξ²n of the split state at the nonlocal optimum
  double xi2_ms_opt;  // Σ n_k²·ξ²_k of independently squeezed modes
  double gain_ratio;  // xi2_ms_opt / xi2_me_opt
  double mu_star_nonlocal;
  double mu_star_local;  // of the mode with the largest |n_k|
  std::vector<LocalMode> local;
};

StrategyComparison strategy_comparison(int n_total, int modes, const LinearCombination& n);
// Equal weights |n_k| = 1/√M.
StrategyComparison strategy_comparison(int n_total, int modes);

struct GradientReport {
  int n_total;
  int eta;
  double target_db;
  double mu;
  double global_xi2;
  double global_xi2_db;
  double local_xi2;  // (ξ²)_AA of the two-mode split state
  double local_xi2_db;
  // Δ((θ_A - θ_B)/√2) in radians, with Δ = √(ξ²)/√(ηN) ("sqrt") or ξ²/√(ηN) ("linear").
  double nonlocal_delta_sqrt;
  double local_delta_sqrt;
  double nonlocal_delta_linear;
  double local_delta_linear;
  double ratio_sqrt;
  double ratio_linear;
  double uncertainty_ratio;  // (ξ_A²/ξ²)·√(N/N_A)
  // √(nᵀΣn) from the method-of-moments covariance, and the same for
  // independent per-mode estimates.
  double nonlocal_delta_moments;
  double local_delta_moments;
};

// Throws TargetUnreachable if target_db lies below the optimum for n_total,
// DomainError unless target_db < 0.
GradientReport gradient_example(int n_total = 1000, double target_db = -10.0, int eta = 1);
nlohmann::json to_json(const GradientReport& r);
nlohmann::json to_json(const StrategyComparison& r);

struct FigureOverrides {
  std::optional<int> n_total;
  std::optional<std::vector<int>> modes;
  std::optional<std::vector<int>> two_m;
  std::optional<std::vector<double>> grid;
  char panel = 'a';  // fig3 only: 'a' ratio vs M, 'b' ratio vs N
  bool parallel = true;
};

// which ∈ {fig2a, fig2b, fig3, fig5, fig6}; throws UnknownFigure otherwise.
Table figure_data(const std::string& which, const FigureOverrides& overrides = {});

enum class StateKind { sss_pn, sss_npn, dicke_pn };
StateKind parse_state_kind(const std::string& s);  // throws DomainError
const char* to_string(StateKind s);

struct SweepSpec {
  StateKind state = StateKind::sss_pn;
  int n_total = 100;
  int modes = 2;
  std::optional<std::vector<double>> p;   // default equal
  std::optional<std::vector<int>> counts;  // sss_npn; default equal
  std::vector<double> mu_grid;             // squeezed states
  std::optional<int> two_m;                // dicke_pn; default: every m
  std::vector<std::string> outputs;        // empty: all for the state kind
  int eta = 1;
};

std::vector<std::string> sweep_quantities(StateKind s);
// Throws DomainError unless strictly increasing within [0, 2π).
void validate_mu_grid(const std::vector<double>& grid);
// "lo:hi:steps" → steps points from lo to hi inclusive (steps = 1 gives lo).
std::vector<double> parse_grid(const std::string& text);

// Points where a quantity is undefined hold NaN.
Table run_sweep(const SweepSpec& spec, bool parallel = true);

}  // namespace splitsq
