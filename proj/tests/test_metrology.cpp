#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "splitsq/analytic.hpp"
#include "splitsq/closed_form.hpp"
#include "splitsq/errors.hpp"
#include "splitsq/metrology.hpp"
#include "splitsq/oracle.hpp"

using namespace splitsq;
using std::numbers::pi;

namespace {

std::vector<ModeDirections> yz_frames(int modes) {
  return std::vector<ModeDirections>(modes, {Direction::y_axis(), Direction::z_axis()});
}

std::vector<ModeDirections> xy_frames(int modes) {
  return std::vector<ModeDirections>(modes, {Direction::x_axis(), Direction::y_axis()});
}

MomentSet squeezed(const SplitConfig& cfg, double mu) {
  const auto dirs = optimal_directions(cfg.n_total(), mu, cfg.modes());
  return cfg.partition_noise() ? sss_pn_moments(cfg, {cfg.n_total(), mu}, dirs)
                               : sss_npn_moments(cfg, {cfg.n_total(), mu}, dirs);
}

double rel_diff(const SymMatrix& a, const SymMatrix& b) {
  return (a - b).max_abs() / std::max(1.0, b.max_abs());
}

std::vector<double> random_p(std::mt19937_64& rng, int modes) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(modes);
  double s = 0;
  for (double& x : p) s += x = u(rng);
  for (double& x : p) x /= s;
  return p;
}

}  // namespace

TEST_CASE("Gamma and moment matrix of the split coherent state") {
  const auto cfg = SplitConfig::probabilistic(4, {0.5, 0.5});
  const auto ms = sss_pn_moments(cfg, {4, 0.0}, yz_frames(2));
  const auto gamma = gamma_matrix(ms);
  CHECK(gamma.kind() == MatrixKind::gamma);
  CHECK(rel_diff(gamma.sym(), SymMatrix::diagonal({0.5, 0.5})) <= 1e-15);
  CHECK(rel_diff(invert_spd(gamma.sym()), SymMatrix::diagonal({2, 2})) <= 1e-15);
  const auto m = moment_matrix(ms);
  CHECK(m.kind() == MatrixKind::moment);
  CHECK(m.provenance() == Provenance::from_moments);
  CHECK(rel_diff(m.sym(), SymMatrix::diagonal({2, 2})) <= 1e-14);
  const auto c = commutator_matrix(ms);
  CHECK(c.kind() == MatrixKind::commutator);
  CHECK_THROWS_AS(c.sym(), DomainError);
}

TEST_CASE("moment matrix of a single-mode Dicke state with the nonlinear family") {
  const auto cfg = SplitConfig::probabilistic(2, {1.0});
  const auto ms = split_dicke_nl_moments(cfg, DickeParams(2, 0));
  const auto m = moment_matrix(ms, RedundancyPolicy::project);
  CHECK(rel_diff(m.sym(), SymMatrix::diagonal({4, 4})) <= 1e-12);
  for (int two_j = 1; two_j <= 100; two_j += 3)
    for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
      const DickeParams d(two_j, two_m);
      const auto single = SplitConfig::probabilistic(two_j, {1.0});
      const double expected = closed_form::dicke_nl_moment(d);
      const auto full = moment_matrix(split_dicke_nl_moments(single, d), RedundancyPolicy::project);
      CHECK(rel_diff(full.sym(), SymMatrix::diagonal({expected, expected})) <= 1e-9);
    }
}

TEST_CASE("moment matrix from analytic and oracle moments agree") {
  const double mu = 0.7;
  const auto cfg = SplitConfig::probabilistic(6, {0.4, 0.6});
  const auto dirs = optimal_directions(6, mu, 2);
  const auto a = moment_matrix(sss_pn_moments(cfg, {6, mu}, dirs));
  const auto b = moment_matrix(oracle::linear_moments(oracle::split_state(oracle::oat_state(6, mu), {0.4, 0.6}), dirs));
  CHECK(b.provenance() == Provenance::from_oracle);
  CHECK((a.sym() - b.sym()).max_abs() <= 1e-9);
}

TEST_CASE("strict moment matrix rejects a singular covariance") {
  const auto cfg = SplitConfig::probabilistic(4, {1.0});
  CHECK_THROWS_AS(moment_matrix(split_dicke_nl_moments(cfg, DickeParams(4, 4))), SingularCovariance);
}

TEST_CASE("estimator covariance and combination variance") {
  const TaggedMatrix single(MatrixKind::moment, Provenance::closed_form, SymMatrix::diagonal({50}));
  CHECK(estimator_covariance(single, EstimationConfig(1, {50})).sym()(0, 0) == doctest::Approx(0.02));

  const TaggedMatrix m(MatrixKind::moment, Provenance::closed_form, SymMatrix::diagonal({2, 2}));
  const auto s10 = estimator_covariance(m, EstimationConfig(10, {1, 1}));
  CHECK(s10.kind() == MatrixKind::sigma);
  CHECK(s10.sym()(0, 0) == doctest::Approx(0.05));
  CHECK(s10.sym()(1, 1) == doctest::Approx(0.05));
  const auto s20 = estimator_covariance(m, EstimationConfig(20, {1, 1}));
  CHECK(s20.sym()(0, 0) == doctest::Approx(0.5 * s10.sym()(0, 0)));

  const TaggedMatrix sigma(MatrixKind::sigma, Provenance::closed_form, SymMatrix{{0.3, 0.1}, {0.1, 0.7}});
  CHECK(combo_variance(sigma, LinearCombination::unit({0, 1})) == doctest::Approx(0.7));
  const TaggedMatrix iso(MatrixKind::sigma, Provenance::closed_form, SymMatrix::diagonal({0.4, 0.4}));
  CHECK(combo_variance(iso, LinearCombination::unit({0.3, -2})) == doctest::Approx(0.4));

  const TaggedMatrix singular(MatrixKind::moment, Provenance::closed_form, SymMatrix::diagonal({1, 0}));
  CHECK_THROWS_AS(estimator_covariance(singular, EstimationConfig(1, {1, 1})), SingularMoment);
  CHECK_THROWS_AS(EstimationConfig(0, {1}), DomainError);
  CHECK_THROWS_AS(EstimationConfig(1, {0}), DomainError);
  CHECK_THROWS_AS(LinearCombination::unit({0, 0}), DomainError);
}

TEST_CASE("squeezing matrices of the split coherent state are the identity") {
  const auto cfg = SplitConfig::probabilistic(8, {0.25, 0.75});
  const auto ms = sss_pn_moments(cfg, {8, 0.0}, yz_frames(2));
  const auto est = EstimationConfig::from_split(cfg);
  CHECK(rel_diff(xi2_matrix(ms, est).sym(), SymMatrix::identity(2)) <= 1e-14);
  CHECK(rel_diff(xi2_ms_matrix(ms).sym(), SymMatrix::identity(2)) <= 1e-14);
  CHECK(rel_diff(chi_inv2_matrix(ms, est, true).sym(), SymMatrix::identity(2)) <= 1e-14);
  CHECK(rel_diff(chi_inv2_ms_matrix(ms, true).sym(), SymMatrix::identity(2)) <= 1e-14);
  CHECK_THROWS_AS(chi_inv2_matrix(ms, est, false), ImpureStateUnsupported);
  CHECK_THROWS_AS(chi_inv2_ms_matrix(ms, false), ImpureStateUnsupported);
}

TEST_CASE("single mode reduces to the Wineland coefficient") {
  for (int n : {3, 20, 150}) {
    for (double mu : {0.01, 0.2, 1.1}) {
      const auto cfg = SplitConfig::probabilistic(n, {1.0});
      const auto ms = squeezed(cfg, mu);
      const double expected = n * ms.cov_ss(0, 0) / (ms.mean_x[0] * ms.mean_x[0]);
      CHECK(xi2_matrix(ms, EstimationConfig::from_split(cfg)).lambda_min() == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("pipeline matrices equal their closed forms") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> nd(10, 500), md(1, 8);
  std::uniform_real_distribution<double> mud(1e-3, 0.5);
  for (int trial = 0; trial < 60; ++trial) {
    const int modes = md(rng);
    const int n = std::max(nd(rng), modes);
    const double mu = mud(rng);
    const auto p = random_p(rng, modes);
    const auto pn = SplitConfig::probabilistic(n, p);
    const auto ms = squeezed(pn, mu);
    const auto est = EstimationConfig::from_split(pn);
    CHECK(rel_diff(xi2_matrix(ms, est).sym(), closed_form::xi2_sss_pn(n, p, mu).reconstruct()) <= 1e-10);
    CHECK(rel_diff(xi2_ms_matrix(ms).sym(), closed_form::xi2_ms_sss_pn(n, p, mu).reconstruct()) <= 1e-10);
    CHECK(rel_diff(chi_inv2_matrix(ms, est, true).sym(), closed_form::chi_inv2_sss_pn(n, p, mu).reconstruct()) <= 1e-10);
    CHECK(rel_diff(chi_inv2_ms_matrix(ms, true).sym(), closed_form::chi_inv2_ms_sss_pn(n, p, mu).reconstruct()) <= 1e-10);

    std::vector<int> counts(modes, 1);
    std::uniform_int_distribution<int> pick(0, modes - 1);
    for (int i = modes; i < n; ++i) ++counts[pick(rng)];
    const auto npn = SplitConfig::deterministic(counts);
    const auto ms2 = squeezed(npn, mu);
    const auto est2 = EstimationConfig::from_split(npn);
    CHECK(rel_diff(xi2_matrix(ms2, est2).sym(), closed_form::xi2_sss_npn(counts, mu).reconstruct()) <= 1e-10);
    CHECK(rel_diff(xi2_ms_matrix(ms2).sym(), closed_form::xi2_ms_sss_npn(counts, mu).reconstruct()) <= 1e-10);
    CHECK(rel_diff(chi_inv2_matrix(ms2, est2, true).sym(), closed_form::chi_inv2_sss_npn(counts, mu).reconstruct()) <= 1e-10);
    CHECK(rel_diff(chi_inv2_ms_matrix(ms2, true).sym(), closed_form::chi_inv2_ms_sss_npn(counts, mu).reconstruct()) <=
          1e-10);

    const int two_m = -n + 2 * std::uniform_int_distribution<int>(1, n - 1)(rng);
    const DickeParams d(n, two_m);
    const auto dk = split_dicke_linear_moments(pn, d, xy_frames(modes));
    CHECK(rel_diff(chi_inv2_matrix(dk, est, true).sym(), closed_form::chi_inv2_split_dicke(d, p).reconstruct()) <= 1e-10);
    CHECK(rel_diff(chi_inv2_ms_matrix(dk, true).sym(), closed_form::chi_inv2_ms_split_dicke(d, p).reconstruct()) <= 1e-10);
  }
}

TEST_CASE("closed-form eigenvalues") {
  const int n = 300;
  const double mu = 0.04;
  const auto f = f_n_pm(n, mu);
  const double c = c_n(n, mu);
  for (int modes : {2, 3, 5}) {
    const auto p = std::vector<double>(modes, 1.0 / modes);
    const auto ms = squeezed(SplitConfig::probabilistic(n, p), mu);
    CHECK(xi2_ms_matrix(ms).lambda_min() ==
          doctest::Approx(((n - 1) * f.f_minus + 1) / c * (1 + (n - 1) * f.f_plus / modes)).epsilon(1e-11));
    CHECK(chi_inv2_matrix(ms, EstimationConfig::from_split(SplitConfig::probabilistic(n, p)), true).lambda_max() ==
          doctest::Approx((n - 1) * f.f_plus + 1).epsilon(1e-11));
    CHECK(chi_inv2_ms_matrix(ms, true).lambda_max() ==
          doctest::Approx(modes * ((n - 1) * f.f_plus + 1) / ((n - 1) * f.f_plus + modes)).epsilon(1e-11));
    const auto ms2 = squeezed(SplitConfig::equal(n, modes, false), mu);
    CHECK(xi2_ms_matrix(ms2).lambda_min() ==
          doctest::Approx(((n - 1) * f.f_minus + 1) / c * (1 + (n - modes) * f.f_plus / modes)).epsilon(1e-11));
    CHECK(closed_form::lambda_min_xi2_ms_npn_equal(n, modes, mu) == doctest::Approx(xi2_ms_matrix(ms2).lambda_min()).epsilon(1e-11));
    CHECK(closed_form::lambda_max_chi_inv2_ms_npn_equal(n, modes, mu) ==
          doctest::Approx(chi_inv2_ms_matrix(ms2, true).lambda_max()).epsilon(1e-11));
  }
}

TEST_CASE("split Dicke Fisher matrices") {
  const DickeParams d(100, 0);
  const auto cfg = SplitConfig::probabilistic(100, {0.5, 0.5});
  const auto ms = split_dicke_linear_moments(cfg, d, xy_frames(2));
  CHECK(chi_inv2_matrix(ms, EstimationConfig::from_split(cfg), true).lambda_max() == doctest::Approx(51.0).epsilon(1e-13));
  const auto ms_corr = chi_inv2_ms_matrix(ms, true);
  CHECK(ms_corr.lambda_max() == doctest::Approx(2550.0 / 1300.0).epsilon(1e-13));
  CHECK(ms_corr.sym()(0, 0) == 1.0);
  CHECK(ms_corr.sym()(1, 1) == 1.0);
  CHECK(closed_form::lambda_max_chi_inv2_ms_split_dicke_uniform(d, 2) == doctest::Approx(2550.0 / 1300.0));
}

TEST_CASE("large-M limits") {
  // The gap closes like (N-1)f⁺/M.
  const int n = 100;
  const double mu = 0.1;
  CHECK(closed_form::lambda_max_chi_inv2_ms_pn_equal(n, 1'000'000, mu) ==
        doctest::Approx(closed_form::lambda_max_chi_inv2(n, mu)).epsilon(1e-4));
  CHECK(closed_form::lambda_min_xi2_ms_pn_equal(n, 100'000, mu) ==
        doctest::Approx(closed_form::lambda_min_xi2(n, mu)).epsilon(1e-3));
}

TEST_CASE("error conditions") {
  const auto cfg = SplitConfig::probabilistic(5, {0.5, 0.5});
  const auto ms = sss_pn_moments(cfg, {5, pi}, yz_frames(2));
  CHECK_THROWS_AS(xi2_matrix(ms, EstimationConfig::from_split(cfg)), VanishingPolarization);
  MomentSet frozen;
  frozen.mean_x = {1.0};
  frozen.cov_ss = SymMatrix::diagonal({0.25});
  frozen.cov_rr = SymMatrix::diagonal({0.0});
  frozen.comm = Matrix{{1.0}};
  CHECK_THROWS_AS(xi2_ms_matrix(frozen), ZeroGeneratorVariance);
  CHECK_THROWS_AS(xi2_matrix(ms, EstimationConfig(1, {1, 1, 1})), DimensionMismatch);
}

TEST_CASE("pi flips") {
  const auto cfg = SplitConfig::probabilistic(40, {0.3, 0.7});
  const auto ms = squeezed(cfg, 0.15);
  const auto est = EstimationConfig::from_split(cfg);
  const auto same = apply_pi_flips(ms, {false, false});
  CHECK(rel_diff(same.cov_ss, ms.cov_ss) == 0.0);
  const auto twice = apply_pi_flips(apply_pi_flips(ms, {false, true}), {false, true});
  CHECK(rel_diff(twice.cov_ss, ms.cov_ss) == 0.0);
  CHECK(rel_diff(twice.cov_rr, ms.cov_rr) == 0.0);

  const auto flipped = apply_pi_flips(ms, {false, true});
  CHECK(flipped.mean_x == ms.mean_x);
  const auto e0 = xi2_matrix(ms, est).eigen();
  const auto e1 = xi2_matrix(flipped, est).eigen();
  CHECK(e1.min() == doctest::Approx(e0.min()).epsilon(1e-13));
  const auto v = e1.vector(0);
  CHECK(v[0] == doctest::Approx(std::sqrt(0.3)).epsilon(1e-10));
  CHECK(v[1] == doctest::Approx(-std::sqrt(0.7)).epsilon(1e-10));
}

TEST_CASE("optimal nonlinear observable for Dicke states") {
  const auto a = dicke_optimal_observable(DickeParams(10, 0), Direction::x_axis());
  CHECK(a == std::array<double, 4>{0, 0, 0, 1});
  const auto b = dicke_optimal_observable(DickeParams(10, 2), Direction::y_axis());
  CHECK(b == std::array<double, 4>{-1, 0, 1, 0});
  CHECK_THROWS_AS(dicke_optimal_observable(DickeParams(10, 2), Direction::z_axis()), DomainError);

  // Parallel to Γ⁺Cᵀr from the single-mode tables, for any r in the xy plane.
  for (int two_m : {-6, -2, 0, 4}) {
    const DickeParams d(10, two_m);
    const auto full = split_dicke_nl_moments(SplitConfig::probabilistic(10, {1.0}), d);
    const auto g = pseudo_inverse_psd(full.cov_ss, 1e-12).inverse.to_matrix();
    for (double phi : {0.0, 0.4, 1.3, 2.2, 4.0}) {
      const Direction r(std::cos(phi), std::sin(phi), 0);
      Vector ctr(4);
      for (int b = 0; b < 4; ++b) ctr[b] = r.x() * full.comm(0, b) + r.y() * full.comm(1, b);
      const auto s = g * ctr;
      const auto c = dicke_optimal_observable(d, r);
      const Vector cv(c.begin(), c.end());
      CHECK(std::abs(dot(s, cv)) == doctest::Approx(norm(s) * norm(cv)).epsilon(1e-10));
    }
  }

  for (int two_j = 2; two_j <= 100; two_j += 7)
    for (int two_m = -two_j + 2; two_m <= two_j - 2; two_m += 2) {
      const DickeParams d(two_j, two_m);
      const auto cfg = SplitConfig::probabilistic(two_j, {1.0});
      for (const auto& r : {Direction::x_axis(), Direction::y_axis(), Direction::normalized(1, 1, 0)}) {
        const auto ms = split_dicke_nl_reduced(cfg, d, {r});
        CHECK(moment_matrix(ms).sym()(0, 0) == doctest::Approx(closed_form::dicke_nl_moment(d)).epsilon(1e-9));
      }
    }
}

TEST_CASE("hierarchies and Fisher bound on pure states") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> mud(1e-3, 2 * pi - 1e-3);
  for (int trial = 0; trial < 80; ++trial) {
    const int modes = 1 + trial % 4;
    const int n = 4 + 13 * trial;
    const auto p = random_p(rng, modes);
    const auto cfg = SplitConfig::probabilistic(n, p);
    const double mu = mud(rng);
    MomentSet ms;
    try {
      ms = squeezed(cfg, mu);
      const auto est = EstimationConfig::from_split(cfg);
      const auto xi = xi2_matrix(ms, est);
      const auto chi = chi_inv2_matrix(ms, est, true);
      CHECK(xi.lambda_min() >= 1.0 / chi.lambda_max() - 1e-9);
      CHECK(xi2_ms_matrix(ms).lambda_min() >= 1.0 / chi_inv2_ms_matrix(ms, true).lambda_max() - 1e-9);
      // Method-of-moments sensitivity never beats the quantum Fisher matrix 4Γ_r.
      const auto fq = 4.0 * ms.cov_rr;
      const auto m = moment_matrix(ms).sym();
      CHECK(is_psd(fq - m, 1e-9 * fq.max_abs()));
    } catch (const VanishingPolarization&) {
    }
  }
}

TEST_CASE("collective squeezing does not depend on partition noise or on splitting") {
  for (int n : {6, 60, 600}) {
    for (double mu : {0.002, 0.05, 0.3}) {
      const double unsplit = closed_form::lambda_min_xi2(n, mu);
      const auto pn = SplitConfig::probabilistic(n, {0.5, 0.5});
      const auto npn = SplitConfig::deterministic({n / 2, n - n / 2});
      const double a = xi2_matrix(squeezed(pn, mu), EstimationConfig::from_split(pn)).lambda_min();
      const double b = xi2_matrix(squeezed(npn, mu), EstimationConfig::from_split(npn)).lambda_min();
      const auto single = SplitConfig::probabilistic(n, {1.0});
      const double c = xi2_matrix(squeezed(single, mu), EstimationConfig::from_split(single)).lambda_min();
      CHECK(a == doctest::Approx(unsplit).epsilon(1e-12));
      CHECK(b == doctest::Approx(unsplit).epsilon(1e-12));
      CHECK(c == doctest::Approx(unsplit).epsilon(1e-12));
    }
  }
}
