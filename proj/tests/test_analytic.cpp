#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <doctest.h>

#ifdef SPLITSQ_HAVE_BOOST_MP
#include <boost/multiprecision/cpp_bin_float.hpp>
#endif

#include "splitsq/analytic.hpp"
#include "splitsq/errors.hpp"
#include "splitsq/oracle.hpp"

using namespace splitsq;
using std::numbers::pi;

namespace {

ModeDirections yz_frame() { return {Direction::y_axis(), Direction::z_axis()}; }

double max_abs_diff(const SymMatrix& a, const SymMatrix& b) { return (a - b).max_abs(); }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

double max_abs_diff(const MomentSet& a, const MomentSet& b) {
  double m = std::max({max_abs_diff(a.cov_ss, b.cov_ss), max_abs_diff(a.cov_rr, b.cov_rr), max_abs_diff(a.comm, b.comm)});
  for (std::size_t k = 0; k < a.mean_x.size(); ++k) m = std::max(m, std::abs(a.mean_x[k] - b.mean_x[k]));
  return m;
}

std::vector<Direction> sample_directions() {
  return {Direction::x_axis(), Direction::y_axis(), Direction::z_axis(), Direction::normalized(1, 2, -2),
          Direction::normalized(-0.3, 0.5, 0.8)};
}

// Spin operators as dense (2j+1)-dimensional matrices, basis index n = j + m.
struct Dense {
  int d;
  std::vector<std::complex<double>> a;
  explicit Dense(int dim) : d(dim), a(dim * dim) {}
  std::complex<double>& operator()(int i, int j) { return a[i * d + j]; }
  std::complex<double> operator()(int i, int j) const { return a[i * d + j]; }
};

Dense mul(const Dense& x, const Dense& y) {
  Dense out(x.d);
  for (int i = 0; i < x.d; ++i)
    for (int k = 0; k < x.d; ++k)
      for (int j = 0; j < x.d; ++j) out(i, j) += x(i, k) * y(k, j);
  return out;
}

Dense lin(std::complex<double> s, const Dense& x, std::complex<double> t, const Dense& y) {
  Dense out(x.d);
  for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] = s * x.a[i] + t * y.a[i];
  return out;
}

std::array<Dense, 3> spin_matrices(int two_j) {
  const int d = two_j + 1;
  const double j = 0.5 * two_j;
  Dense jp(d), jm(d), jz(d);
  for (int n = 0; n < d; ++n) {
    const double m = n - j;
    jz(n, n) = m;
    if (n + 1 < d) {
      const double c = std::sqrt(j * (j + 1) - m * (m + 1));
      jp(n + 1, n) = c;
      jm(n, n + 1) = c;
    }
  }
  const std::complex<double> i(0, 1);
  return {lin(0.5, jp, 0.5, jm), lin(-0.5 * i, jp, 0.5 * i, jm), jz};
}

}  // namespace

TEST_CASE("f_n_pm examples") {
  const auto a = f_n_pm(100, 0.0);
  CHECK(a.f_minus == 0.0);
  CHECK(a.f_plus == 0.0);
  const auto b = f_n_pm(2, pi / 3);
  CHECK(b.f_minus == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(b.f_plus == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(f_n_pm(1, 0.1), DomainError);
  CHECK_THROWS_AS(f_n_pm(10, -0.1), DomainError);
  CHECK_THROWS_AS(f_n_pm(10, 2 * pi), DomainError);
}

TEST_CASE("f_n_pm at N = 2 reduces to -+sin(mu/2)") {
  for (double mu = 0.05; mu < 2 * pi; mu += 0.1) {
    const auto f = f_n_pm(2, mu);
    CHECK(f.f_minus == doctest::Approx(-std::sin(mu / 2)).epsilon(1e-13));
    CHECK(f.f_plus == doctest::Approx(std::sin(mu / 2)).epsilon(1e-13));
  }
}

#ifdef SPLITSQ_HAVE_BOOST_MP
TEST_CASE("f_n_pm matches a 400-digit evaluation") {
  // The defining expression cancels down to f⁻ ~ 1e-180 for these inputs.
  using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400>>;
  for (int n : {3, 64, 65, 200, 500, 5000}) {
    for (double mu_d : {1e-4, 0.02, 0.3, 1.7, 3.0, 5.5}) {
      const Big mu = mu_d;
      const Big c = pow(cos(mu), n - 2);
      const Big s = sin(mu / 2) * pow(cos(mu / 2), n - 2);
      const Big root = sqrt((c - 1) * (c - 1) + 16 * s * s);
      const Big fm = Big(0.25) - (c + root) / 4;
      const Big fp = Big(0.25) - (c - root) / 4;
      const auto f = f_n_pm(n, mu_d);
      const double fm_ref = static_cast<double>(fm), fp_ref = static_cast<double>(fp);
      CHECK(std::abs(f.f_minus - fm_ref) <= 1e-13 * std::abs(fm_ref));
      CHECK(std::abs(f.f_plus - fp_ref) <= 1e-13 * std::abs(fp_ref));
    }
  }
}
#endif

TEST_CASE("f- <= 0 <= f+ everywhere") {
  for (int n = 2; n <= 600; n += 7)
    for (double mu = 0.0; mu < 2 * pi; mu += 0.013) {
      const auto f = f_n_pm(n, mu);
      CHECK(f.f_minus <= 0.0);
      CHECK(f.f_plus >= 0.0);
    }
}

TEST_CASE("cos powers keep their sign at large exponents") {
  CHECK(pow_cos(3.0, 101) < 0);
  CHECK(pow_cos(3.0, 100) > 0);
  CHECK(pow_cos(3.0, 999) == doctest::Approx(-std::pow(std::abs(std::cos(3.0)), 999)).epsilon(1e-12));
  CHECK(std::isfinite(pow_cos(pi / 2, 998)));
  CHECK(one_minus_pow_cos(1e-9, 3) == doctest::Approx(1.5e-18).epsilon(1e-6));
}

TEST_CASE("squeezing angle at small mu tends to pi/4") {
  for (int n : {3, 10, 100, 1000}) CHECK(squeezing_angle(n, 1e-7) == doctest::Approx(pi / 4).epsilon(1e-3));
  CHECK_THROWS_AS(squeezing_angle(10, 0.0), UndefinedAngle);
}

TEST_CASE("squeezing angle for N = 3, mu = pi matches the oracle covariance") {
  const auto st = oracle::split_state(oracle::oat_state(3, pi), {1.0});
  const Direction y = Direction::y_axis(), z = Direction::z_axis();
  SymMatrix cov(2);
  cov.set(0, 0, oracle::sym_second(st, 0, y, 0, y) - std::pow(oracle::mean(st, 0, y), 2));
  cov.set(1, 1, oracle::sym_second(st, 0, z, 0, z) - std::pow(oracle::mean(st, 0, z), 2));
  cov.set(0, 1, oracle::sym_second(st, 0, y, 0, z) - oracle::mean(st, 0, y) * oracle::mean(st, 0, z));
  const auto e = eig_sym(cov);
  const auto s = e.vector(0);
  const double th = squeezing_angle(3, pi);
  CHECK(std::abs(-std::sin(th) * s[0] + std::cos(th) * s[1]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("squeezing angle is the minimal-variance direction") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(1e-3, 2 * pi - 1e-3);
  std::uniform_int_distribution<int> nd(3, 500);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = nd(rng);
    const double mu = u(rng);
    const auto cfg = SplitConfig::probabilistic(n, {1.0});
    const auto oc = OatCoefficients::of({n, mu});
    const auto d = optimal_directions(n, mu);
    const double vs = sss_pn_second(cfg, oc, d.s, d.s, 0, 0);
    const double vr = sss_pn_second(cfg, oc, d.r, d.r, 0, 0);
    CHECK(vs <= vr + 1e-12 * std::abs(vr));

    // Compare with the eigenvector of the yz block.
    const Direction y = Direction::y_axis(), z = Direction::z_axis();
    SymMatrix cov(2);
    cov.set(0, 0, sss_pn_second(cfg, oc, y, y, 0, 0));
    cov.set(1, 1, sss_pn_second(cfg, oc, z, z, 0, 0));
    cov.set(0, 1, sss_pn_second(cfg, oc, y, z, 0, 0));
    const auto e = eig_sym(cov);
    if (e.eigenvalues[1] - e.eigenvalues[0] > 1e-6 * e.eigenvalues[1]) {
      const auto s = e.vector(0);
      CHECK(std::abs(d.s.y() * s[0] + d.s.z() * s[1]) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("split squeezed PN: coherent limit") {
  const auto cfg = SplitConfig::probabilistic(4, {0.5, 0.5});
  const auto ms = sss_pn_moments(cfg, {4, 0.0}, {yz_frame(), yz_frame()});
  CHECK(ms.mean_x[0] == doctest::Approx(1.0));
  CHECK(ms.cov_ss(0, 0) == doctest::Approx(0.5));
  CHECK(ms.cov_ss(0, 1) == doctest::Approx(0.0));
  CHECK(ms.comm(0, 0) == doctest::Approx(ms.mean_x[0]));
}

TEST_CASE("split squeezed PN: N = 6, p = (0.3, 0.7), mu = 0.7 against the oracle") {
  const double mu = 0.7;
  const auto cfg = SplitConfig::probabilistic(6, {0.3, 0.7});
  const auto oc = OatCoefficients::of({6, mu});
  const auto st = oracle::split_state(oracle::oat_state(6, mu), {0.3, 0.7});
  const auto dirs = sample_directions();
  for (const auto& u : dirs)
    for (const auto& v : dirs)
      for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(sss_pn_mean(cfg, oc, u, k) - oracle::mean(st, k, u)) <= 1e-10);
        for (int l = 0; l < 2; ++l)
          CHECK(std::abs(sss_pn_second(cfg, oc, u, v, k, l) - oracle::sym_second(st, k, u, l, v)) <= 1e-10);
      }
  const auto opt = optimal_directions(6, mu, 2);
  CHECK(max_abs_diff(sss_pn_moments(cfg, {6, mu}, opt), oracle::linear_moments(st, opt)) <= 1e-10);
}

TEST_CASE("split squeezed PN: squeezed variance in the optimal frame") {
  const int n = 10;
  const double mu = 0.3, p = 0.5;
  const auto cfg = SplitConfig::probabilistic(n, {p, 1 - p});
  const auto ms = sss_pn_moments(cfg, {n, mu}, optimal_directions(n, mu, 2));
  const auto f = f_n_pm(n, mu);
  CHECK(ms.cov_ss(0, 0) == doctest::Approx(p * p * n * (n - 1) / 4.0 * f.f_minus + p * n / 4.0).epsilon(1e-13));
  CHECK(ms.cov_rr(0, 1) == doctest::Approx(p * (1 - p) * n * (n - 1) / 4.0 * f.f_plus).epsilon(1e-13));
  CHECK(ms.mean_x[1] == doctest::Approx(n / 2.0 * (1 - p) * std::pow(std::cos(mu / 2), n - 1)).epsilon(1e-13));
}

TEST_CASE("split squeezed without PN: examples") {
  const auto cfg0 = SplitConfig::deterministic({2, 3});
  const auto ms0 = sss_npn_moments(cfg0, {5, 0.0}, {yz_frame(), yz_frame()});
  CHECK(ms0.cov_ss(0, 0) == doctest::Approx(0.5));
  CHECK(ms0.cov_ss(1, 1) == doctest::Approx(0.75));
  CHECK(ms0.cov_ss(0, 1) == doctest::Approx(0.0));

  const auto cfg = SplitConfig::deterministic({3, 3});
  const double mu = 0.7;
  const auto st = oracle::npn_state(cfg, mu).to_fock();
  const auto oc = OatCoefficients::of({6, mu});
  const auto dirs = sample_directions();
  for (const auto& u : dirs)
    for (const auto& v : dirs)
      for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(sss_npn_mean(cfg, oc, u, k) - oracle::mean(st, k, u)) <= 1e-10);
        for (int l = 0; l < 2; ++l)
          CHECK(std::abs(sss_npn_second(cfg, oc, u, v, k, l) - oracle::sym_second(st, k, u, l, v)) <= 1e-10);
      }

  const auto cfg8 = SplitConfig::deterministic({3, 5});
  const auto ms8 = sss_npn_moments(cfg8, {8, 0.5}, optimal_directions(8, 0.5, 2));
  CHECK(ms8.mean_x[0] == doctest::Approx(1.5 * std::pow(std::cos(0.25), 7)).epsilon(1e-14));
}

TEST_CASE("PN and fixed-count moments differ only by the partition-noise term") {
  const int n = 12;
  const std::vector<int> counts{3, 4, 5};
  std::vector<double> p;
  for (int c : counts) p.push_back(static_cast<double>(c) / n);
  for (double mu : {0.05, 0.4, 1.3, 4.0}) {
    const auto dirs = optimal_directions(n, mu, 3);
    const auto a = sss_pn_moments(SplitConfig::probabilistic(n, p), {n, mu}, dirs);
    const auto b = sss_npn_moments(SplitConfig::deterministic(counts), {n, mu}, dirs);
    const auto f = f_n_pm(n, mu);
    for (int k = 0; k < 3; ++k) {
      CHECK(a.mean_x[k] == doctest::Approx(b.mean_x[k]).epsilon(1e-15));
      for (int l = 0; l < 3; ++l) {
        const double shape = -static_cast<double>(counts[k]) * counts[l] / n + (k == l ? counts[k] : 0);
        CHECK(a.cov_ss(k, l) - b.cov_ss(k, l) == doctest::Approx(f.f_minus / 4 * shape).epsilon(1e-10));
        CHECK(a.cov_rr(k, l) - b.cov_rr(k, l) == doctest::Approx(f.f_plus / 4 * shape).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("covariances are PSD and permute with the modes") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.05, 1.0), mud(1e-3, 2 * pi - 1e-3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p{u(rng), u(rng), u(rng)};
    const double s = p[0] + p[1] + p[2];
    for (double& x : p) x /= s;
    const int n = 5 + trial * 7;
    const double mu = mud(rng);
    const auto dirs = optimal_directions(n, mu, 3);
    const auto a = sss_pn_moments(SplitConfig::probabilistic(n, p), {n, mu}, dirs);
    CHECK(is_psd(a.cov_ss, 1e-10 * std::max(1.0, a.cov_ss.max_abs())));
    CHECK(is_psd(a.cov_rr, 1e-10 * std::max(1.0, a.cov_rr.max_abs())));

    const std::vector<int> perm{2, 0, 1};
    const auto b = sss_pn_moments(SplitConfig::probabilistic(n, {p[2], p[0], p[1]}), {n, mu}, dirs);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        CHECK(b.cov_ss(k, l) == doctest::Approx(a.cov_ss(perm[k], perm[l])).epsilon(1e-13));
        CHECK(b.cov_rr(k, l) == doctest::Approx(a.cov_rr(perm[k], perm[l])).epsilon(1e-13));
      }
  }
}

TEST_CASE("split Fock moments") {
  const auto cfg = SplitConfig::probabilistic(4, {0.5, 0.5});
  const DickeParams d(4, 2);
  const auto m = split_fock_moments(cfg, d, Direction::z_axis(), Direction::z_axis(), 0, 0);
  CHECK(m.mean_u_k == doctest::Approx(0.5));

  // Coherent pole: no transverse cross-mode correlation.
  const auto top = split_fock_moments(cfg, DickeParams(4, 4), Direction::x_axis(), Direction::x_axis(), 0, 1);
  CHECK(top.cross_uv_kl == doctest::Approx(0.0));

  const DickeParams d0(4, 0);
  const auto st = oracle::split_dicke_state(d0, {0.5, 0.5});
  for (const auto& u : sample_directions())
    for (const auto& v : sample_directions())
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const auto a = split_fock_moments(cfg, d0, u, v, k, l);
          CHECK(std::abs(a.mean_u_k - oracle::mean(st, k, u)) <= 1e-10);
          CHECK(std::abs(a.second_u_k - oracle::sym_second(st, k, u, k, u)) <= 1e-10);
          CHECK(std::abs(a.cross_uv_kl - oracle::sym_second(st, k, u, l, v)) <= 1e-10);
        }
  CHECK_THROWS_AS(DickeParams(4, 6), DomainError);
  CHECK_THROWS_AS(DickeParams(4, 1), DomainError);
}

TEST_CASE("single-mode Dicke tables: examples") {
  const auto t = dicke_single_mode_tables(DickeParams(4, 2));
  CHECK(t.comm[0][kJy] == doctest::Approx(1.0));
  for (int two_j : {1, 2, 7, 10})
    for (int two_m = -two_j; two_m <= two_j; two_m += 2) CHECK(dicke_single_mode_tables(DickeParams(two_j, two_m)).cov[kJz][kJz] == 0.0);
}

TEST_CASE("single-mode Dicke tables match dense angular-momentum matrices") {
  for (auto [two_j, two_m] : {std::pair{10, 4}, std::pair{7, -3}, std::pair{4, 0}, std::pair{3, 3}}) {
    const auto [x, y, z] = spin_matrices(two_j);
    const std::vector<Dense> ops{x,
                                 y,
                                 z,
                                 lin(0.5, mul(x, z), 0.5, mul(z, x)),
                                 lin(0.5, mul(x, y), 0.5, mul(y, x)),
                                 lin(0.5, mul(y, z), 0.5, mul(z, y)),
                                 mul(x, x),
                                 mul(y, y),
                                 mul(z, z)};
    const int n = (two_j + two_m) / 2;
    auto ev = [&](const Dense& a) { return a(n, n); };
    const auto t = dicke_single_mode_tables(DickeParams(two_j, two_m));
    for (int a = 0; a < kDickeOpCount; ++a)
      for (int b = 0; b < kDickeOpCount; ++b) {
        const auto sym = lin(0.5, mul(ops[a], ops[b]), 0.5, mul(ops[b], ops[a]));
        const double cov = ev(sym).real() - ev(ops[a]).real() * ev(ops[b]).real();
        CHECK(std::abs(t.cov[a][b] - cov) <= 1e-11 * std::max(1.0, std::abs(cov)));
      }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < kDickeOpCount; ++b) {
        const auto c = lin(1.0, mul(ops[a], ops[b]), -1.0, mul(ops[b], ops[a]));
        const double val = (std::complex<double>(0, -1) * ev(c)).real();
        CHECK(std::abs(t.comm[a][b] - val) <= 1e-11 * std::max(1.0, std::abs(val)));
      }
  }
}

TEST_CASE("split Dicke nonlinear moments") {
  const auto cfg = SplitConfig::probabilistic(100, {0.5, 0.5});
  const auto ms = split_dicke_nl_moments(cfg, DickeParams(100, 0));
  CHECK(ms.cov_ss(0, 0) == doctest::Approx(325.0).epsilon(1e-14));
  CHECK(ms.comm(0, 1) == doctest::Approx(0.0));

  const auto top = split_dicke_nl_moments(cfg, DickeParams(100, 100));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(top.cov_ss(a, 4 + b) == doctest::Approx(0.0));

  const DickeParams d(4, 0);
  const auto cfg2 = SplitConfig::probabilistic(4, {0.4, 0.6});
  const auto st = oracle::split_dicke_state(d, {0.4, 0.6});
  CHECK(max_abs_diff(split_dicke_nl_moments(cfg2, d), oracle::nl_moments(st)) <= 1e-10);

  // Commutators: −i⟨[J_x,k, J_y,k]⟩ = m·p_k and the twisted pair.
  const DickeParams d3(6, 2);
  const auto cfg3 = SplitConfig::probabilistic(6, {0.25, 0.75});
  const auto m3 = split_dicke_nl_moments(cfg3, d3);
  const double jj = 3.0 * 4.0, m = 1.0;
  CHECK(m3.comm(2, 5) == doctest::Approx(m * 0.75));
  CHECK(m3.comm(3, 6) == doctest::Approx((jj - 3 * m * m) / 2 * 0.75 * 0.75));
}
