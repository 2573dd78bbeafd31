#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include <doctest.h>

#include "splitsq/analytic.hpp"
#include "splitsq/closed_form.hpp"
#include "splitsq/errors.hpp"
#include "splitsq/experiments.hpp"
#include "splitsq/oracle.hpp"
#include "splitsq/witness.hpp"

using namespace splitsq;
using std::numbers::pi;

namespace {

MomentSet squeezed(const SplitConfig& cfg, double mu) {
  const auto dirs = optimal_directions(cfg.n_total(), mu, cfg.modes());
  return cfg.partition_noise() ? sss_pn_moments(cfg, {cfg.n_total(), mu}, dirs)
                               : sss_npn_moments(cfg, {cfg.n_total(), mu}, dirs);
}

TaggedMatrix ms_matrix(const SymMatrix& m) { return {MatrixKind::xi2_ms, Provenance::closed_form, m}; }

}  // namespace

TEST_CASE("shot-noise witness") {
  const auto coherent = SplitConfig::probabilistic(10, {0.5, 0.5});
  const auto ms0 = sss_pn_moments(coherent, {10, 0.0}, std::vector<ModeDirections>(2, {Direction::y_axis(), Direction::z_axis()}));
  CHECK_FALSE(shot_noise_witness(xi2_matrix(ms0, EstimationConfig::from_split(coherent))));

  const auto opt = optimal_mu(Objective::lambda_min_xi2, {100, 1, true});
  const auto cfg = SplitConfig::probabilistic(100, {0.5, 0.5});
  CHECK(shot_noise_witness(xi2_matrix(squeezed(cfg, opt.mu_star), EstimationConfig::from_split(cfg))));

  const auto two = SplitConfig::probabilistic(2, {0.5, 0.5});
  const auto xi = xi2_matrix(squeezed(two, pi / 3), EstimationConfig::from_split(two));
  CHECK(xi.lambda_min() == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(shot_noise_witness(xi));

  CHECK_THROWS_AS(shot_noise_witness(ms_matrix(SymMatrix::identity(2))), DomainError);
}

TEST_CASE("k-producibility thresholds") {
  const auto none = k_producibility_witness(ms_matrix(SymMatrix::identity(3)));
  CHECK(none.largest_violated_k == 0);
  CHECK(none.certified_depth == 1);
  CHECK(none.thresholds_crossed.empty());

  const auto d = k_producibility_witness(ms_matrix(SymMatrix::diagonal({0.45, 1.0, 2.0})));
  CHECK(d.largest_violated_k == 2);
  CHECK(d.certified_depth == 3);
  REQUIRE(d.thresholds_crossed.size() == 2);
  CHECK(d.thresholds_crossed[1].bound == doctest::Approx(0.5));

  // Capped at the number of modes.
  const auto cap = k_producibility_witness(ms_matrix(SymMatrix::diagonal({0.01, 1.0})));
  CHECK(cap.largest_violated_k == 2);
  CHECK(cap.certified_depth == 2);

  // Borderline values are not certified.
  const auto edge = k_producibility_witness(ms_matrix(SymMatrix::diagonal({0.5, 1.0, 1.0})));
  CHECK(edge.largest_violated_k == 1);
}

TEST_CASE("fixed-count split at the optimum crosses the 1/(M-1) line") {
  const int n = 500, modes = 4;
  const auto opt = optimal_mu(Objective::lambda_min_xi2_ms, {n, modes, false});
  CHECK(opt.value < 1.0 / (modes - 1));
  const auto ms = squeezed(SplitConfig::equal(n, modes, false), opt.mu_star);
  const auto d = k_producibility_witness(xi2_ms_matrix(ms));
  CHECK(d.largest_violated_k >= modes - 1);
  CHECK(d.certified_depth == modes);
}

TEST_CASE("thresholds are monotone and permutation invariant") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.05, 1.5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 5;
    Vector diag(n);
    for (double& x : diag) x = u(rng);
    const auto a = k_producibility_witness(ms_matrix(SymMatrix::diagonal(diag)));
    for (std::size_t i = 0; i < a.thresholds_crossed.size(); ++i) CHECK(a.thresholds_crossed[i].k == static_cast<int>(i + 1));
    std::reverse(diag.begin(), diag.end());
    const auto b = k_producibility_witness(ms_matrix(SymMatrix::diagonal(diag)));
    CHECK(a.largest_violated_k == b.largest_violated_k);
    CHECK(a.certified_depth == b.certified_depth);
  }
}

TEST_CASE("QFI depth witness") {
  const DickeParams d(100, 0);
  auto chi_ms = [&](int modes) {
    const auto cfg = SplitConfig::equal(100, modes, true);
    return chi_inv2_ms_matrix(split_dicke_linear_moments(cfg, d, std::vector<ModeDirections>(modes, {Direction::x_axis(), Direction::y_axis()})),
                              true);
  };
  const auto two = qfi_depth_witness(chi_ms(2));
  CHECK(two.value == doctest::Approx(1300.0 / 2550.0).epsilon(1e-13));
  CHECK(two.largest_violated_k == 1);
  CHECK(two.certified_depth == 2);

  int last = 0;
  for (int modes : {2, 5, 10, 20, 40}) {
    const auto w = qfi_depth_witness(chi_ms(modes));
    CHECK(w.largest_violated_k >= last);
    last = w.largest_violated_k;
  }
  CHECK(last > 1);
  CHECK(closed_form::lambda_max_chi_inv2_ms_split_dicke_uniform(d, 1'000'000) == doctest::Approx(51.0).epsilon(1e-3));

  const TaggedMatrix id(MatrixKind::chi_inv2_ms, Provenance::closed_form, SymMatrix::identity(3));
  CHECK(qfi_depth_witness(id).certified_depth == 1);
}

TEST_CASE("hierarchy checks") {
  for (int n : {4, 40, 400})
    for (double mu = 0.0; mu < 2 * pi; mu += 0.37) {
      const auto cfg = SplitConfig::probabilistic(n, {0.2, 0.3, 0.5});
      MomentSet ms;
      try {
        ms = squeezed(cfg, mu);
      } catch (const UndefinedAngle&) {
        ms = sss_pn_moments(cfg, {n, mu}, std::vector<ModeDirections>(3, {Direction::y_axis(), Direction::z_axis()}));
      }
      const auto est = EstimationConfig::from_split(cfg);
      std::optional<TaggedMatrix> xi, xi_ms;
      try {
        xi = xi2_matrix(ms, est);
        xi_ms = xi2_ms_matrix(ms);
      } catch (const VanishingPolarization&) {
        continue;
      }
      CHECK(hierarchy_check(*xi, chi_inv2_matrix(ms, est, true), HierarchyKind::standard));
      CHECK(hierarchy_check(*xi_ms, chi_inv2_ms_matrix(ms, true), HierarchyKind::mode_sep));
    }

  // Split Dicke: local nonlinear measurement leaves a strict gap.
  const DickeParams d(40, 4);
  const auto cfg = SplitConfig::probabilistic(40, {0.5, 0.5});
  const auto est = EstimationConfig::from_split(cfg);
  const auto nl = split_dicke_nl_reduced(cfg, d, {Direction::x_axis(), Direction::x_axis()});
  const auto lin = split_dicke_linear_moments(cfg, d, std::vector<ModeDirections>(2, {Direction::x_axis(), Direction::y_axis()}));
  const auto xi = xi2_matrix(nl, est);
  const auto chi = chi_inv2_matrix(lin, est, true);
  CHECK(hierarchy_check(xi, chi, HierarchyKind::standard));
  CHECK(xi.lambda_min() > 1.0 / chi.lambda_max() + 1e-3);
  CHECK(hierarchy_check(xi2_ms_matrix(nl), chi_inv2_ms_matrix(lin, true), HierarchyKind::mode_sep));

  // Coherent state: both sides equal 1.
  const auto c0 = sss_pn_moments(cfg, {40, 0.0}, std::vector<ModeDirections>(2, {Direction::y_axis(), Direction::z_axis()}));
  CHECK(hierarchy_check(xi2_matrix(c0, est), chi_inv2_matrix(c0, est, true), HierarchyKind::standard));

  CHECK_THROWS_AS(hierarchy_check(xi2_ms_matrix(c0), chi_inv2_matrix(c0, est, true), HierarchyKind::standard), DomainError);
  const TaggedMatrix big(MatrixKind::chi_inv2, Provenance::closed_form, SymMatrix::identity(3));
  CHECK_THROWS_AS(hierarchy_check(xi2_matrix(c0, est), big, HierarchyKind::standard), DimensionMismatch);
}

TEST_CASE("pi flips leave the witness unchanged") {
  const auto cfg = SplitConfig::probabilistic(60, {0.2, 0.3, 0.5});
  const auto ms = squeezed(cfg, 0.08);
  const auto est = EstimationConfig::from_split(cfg);
  const auto a = witness_report(ms, est);
  const auto b = witness_report(apply_pi_flips(ms, {true, false, true}), est);
  CHECK(a.lambda_min_xi2 == doctest::Approx(b.lambda_min_xi2).epsilon(1e-13));
  CHECK(a.lambda_min_xi2_ms == doctest::Approx(b.lambda_min_xi2_ms).epsilon(1e-13));
  CHECK(a.certified_depth == b.certified_depth);
}

TEST_CASE("k-producible oracle states are never over-certified") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> mud(0.05, 1.2), pd(0.2, 0.8);
  // Partitions of four modes into blocks of at most two.
  const std::vector<std::vector<std::vector<int>>> layouts{
      {{0, 1}}, {{0}, {1}}, {{0, 1}, {2}}, {{0, 2}, {1, 3}}, {{0, 1}, {2, 3}}, {{0}, {1, 2}, {3}}};
  for (const auto& layout : layouts) {
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<oracle::Block> blocks;
      std::vector<ModeDirections> dirs;
      int modes = 0;
      for (const auto& b : layout) modes += static_cast<int>(b.size());
      dirs.assign(modes, {Direction::y_axis(), Direction::z_axis()});
      for (const auto& b : layout) {
        const int n = b.size() == 2 ? 4 : 2;
        const double mu = mud(rng);
        const double p = pd(rng);
        const std::vector<double> probs = b.size() == 2 ? std::vector<double>{p, 1 - p} : std::vector<double>{1.0};
        blocks.push_back({b, oracle::split_state(oracle::oat_state(n, mu), probs)});
        for (int k : b) dirs[k] = optimal_directions(n, mu);
      }
      const auto st = oracle::kproducible_reference(blocks);
      const auto ms = oracle::linear_moments(st, dirs);
      const auto xi_ms = xi2_ms_matrix(ms);
      CHECK(xi_ms.lambda_min() >= 0.5 - 1e-9);
      CHECK(k_producibility_witness(xi_ms).certified_depth <= 2);
      const auto chi_ms = chi_inv2_ms_matrix(ms, true);
      CHECK(1.0 / chi_ms.lambda_max() >= 0.5 - 1e-9);
      CHECK(qfi_depth_witness(chi_ms).certified_depth <= 2);
    }
  }
}

TEST_CASE("witness report serializes every field") {
  const auto cfg = SplitConfig::probabilistic(50, {0.5, 0.5});
  const auto j = to_json(witness_report(squeezed(cfg, 0.1), EstimationConfig::from_split(cfg)));
  for (const char* key : {"lambda_min_xi2", "lambda_min_xi2_ms", "inv_lambda_max_chi2", "inv_lambda_max_chi2_ms",
                          "particle_entangled", "largest_violated_k", "certified_depth", "thresholds_crossed",
                          "qfi_largest_violated_k", "qfi_certified_depth", "hierarchy_ok", "hierarchy_ms_ok"})
    CHECK(j.contains(key));
  CHECK(j["particle_entangled"] == true);
}
