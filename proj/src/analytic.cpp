#include "splitsq/analytic.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "splitsq/errors.hpp"

namespace splitsq {

namespace {

using Vec3 = std::array<double, 3>;

// log|cos x| without cancellation near cos x = ±1.
double log_abs_cos(double x) {
  const double c = std::cos(x);
  if (c > 0.5) {
    const double h = std::sin(0.5 * x);
    return std::log1p(-2.0 * h * h);
  }
  if (c < -0.5) {
    const double h = std::cos(0.5 * x);
    return std::log1p(-2.0 * h * h);
  }
  return std::log(std::abs(c));
}

void check_mu(double mu) {
  if (!(mu >= 0.0 && mu < 2.0 * std::numbers::pi)) throw DomainError("mu must lie in [0, 2pi)");
}

void check_mode(const SplitConfig& cfg, int k) {
  if (k < 0 || k >= cfg.modes()) throw DomainError("mode index out of range");
}

// K(u, v) of the OAT two-particle correlator, symmetric in u and v.
double oat_kernel(const OatCoefficients& oc, const Vec3& u, const Vec3& v) {
  return u[0] * v[0] + u[1] * v[1] + (u[0] * v[0] - u[1] * v[1]) * oc.c + 2.0 * (u[1] * v[2] + u[2] * v[1]) * oc.s;
}

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double pn_mean(const SplitConfig& cfg, const OatCoefficients& oc, const Vec3& u, int k) {
  return cfg.p()[k] * cfg.n_total() / 2.0 * u[0] * oc.mean;
}

double pn_second(const SplitConfig& cfg, const OatCoefficients& oc, const Vec3& u, const Vec3& v, int k, int l) {
  const double n = cfg.n_total();
  const auto& p = cfg.p();
  double out = p[k] * p[l] * n * (n - 1) / 8.0 * oat_kernel(oc, u, v);
  if (k == l) out += p[k] * n / 4.0 * dot3(u, v);
  return out;
}

double npn_mean(const SplitConfig& cfg, const OatCoefficients& oc, const Vec3& u, int k) {
  return cfg.counts()[k] / 2.0 * u[0] * oc.mean;
}

double npn_second(const SplitConfig& cfg, const OatCoefficients& oc, const Vec3& u, const Vec3& v, int k, int l) {
  const double nk = cfg.counts()[k];
  if (k != l) return nk * cfg.counts()[l] / 8.0 * oat_kernel(oc, u, v);
  const double transverse = u[0] * v[0] + u[1] * v[1];
  const double twisted = (u[0] * v[0] - u[1] * v[1]) * oc.c + 2.0 * (u[1] * v[2] + u[2] * v[1]) * oc.s;
  return nk / 4.0 * u[2] * v[2] + nk / 8.0 * ((nk + 1) * transverse + (nk - 1) * twisted);
}

using MeanFn = std::function<double(const Vec3&, int)>;
using SecondFn = std::function<double(const Vec3&, const Vec3&, int, int)>;

MomentSet linear_moment_set(int modes, const std::vector<ModeDirections>& dirs, const MeanFn& mean,
                            const SecondFn& second) {
  if (static_cast<int>(dirs.size()) != modes) throw DimensionMismatch("need one direction pair per mode");
  MomentSet ms;
  ms.mean_x.resize(modes);
  ms.cov_ss = SymMatrix(modes);
  ms.cov_rr = SymMatrix(modes);
  ms.comm = Matrix(modes, modes);
  const Vec3 x{1, 0, 0};
  for (int k = 0; k < modes; ++k) {
    ms.mean_x[k] = mean(x, k);
    const Vec3& rk = dirs[k].r.components();
    const Vec3& sk = dirs[k].s.components();
    ms.comm(k, k) = mean(cross(dirs[k].r, dirs[k].s), k);
    for (int l = k; l < modes; ++l) {
      const Vec3& rl = dirs[l].r.components();
      const Vec3& sl = dirs[l].s.components();
      ms.cov_ss.set(k, l, second(sk, sl, k, l) - mean(sk, k) * mean(sl, l));
      ms.cov_rr.set(k, l, second(rk, rl, k, l) - mean(rk, k) * mean(rl, l));
    }
    ms.generator_labels.push_back("J_r," + std::to_string(k));
    ms.observable_labels.push_back("J_s," + std::to_string(k));
  }
  return ms;
}

}  // namespace

double pow_cos(double x, long n) {
  if (n < 0) throw DomainError("pow_cos: negative exponent");
  const double c = std::cos(x);
  if (n <= 64) {
    double result = 1.0, base = c;
    for (long e = n; e > 0; e >>= 1) {
      if (e & 1) result *= base;
      base *= base;
    }
    return result;
  }
  const double sign = (c < 0 && (n & 1)) ? -1.0 : 1.0;
  if (c == 0.0) return 0.0;
  return sign * std::exp(static_cast<double>(n) * log_abs_cos(x));
}

double one_minus_pow_cos(double x, long n) {
  if (n == 0) return 0.0;
  if (std::cos(x) > 0.0) return -std::expm1(static_cast<double>(n) * log_abs_cos(x));
  return 1.0 - pow_cos(x, n);
}

FPair f_n_pm(int n_total, double mu) {
  if (n_total < 2) throw DomainError("f_n_pm: N must be at least 2");
  check_mu(mu);
  const double a = one_minus_pow_cos(mu, n_total - 2);
  const double t = 4.0 * std::abs(std::sin(0.5 * mu) * pow_cos(0.5 * mu, n_total - 2));
  const double root = std::hypot(a, t);
  const double sum = a + root;
  if (sum == 0.0) return {0.0, 0.0};
  // (a - √(a²+b))/4 rewritten to avoid cancellation when b ≪ a².
  return {-(t * t) / (4.0 * sum), sum / 4.0};
}

double c_n(int n_total, double mu) {
  if (n_total < 1) throw DomainError("c_n: N must be positive");
  return pow_cos(0.5 * mu, 2L * n_total - 2);
}

double squeezing_angle(int n_total, double mu) {
  if (n_total < 2) throw DomainError("squeezing_angle: N must be at least 2");
  check_mu(mu);
  const double num = 4.0 * std::sin(0.5 * mu) * pow_cos(0.5 * mu, n_total - 2);
  const double den = one_minus_pow_cos(mu, n_total - 2);
  if (std::abs(num) < 1e-14 && std::abs(den) < 1e-14)
    throw UndefinedAngle("squeezing_angle: yz covariance is isotropic, squeezing direction undefined");
  double theta = 0.5 * std::atan2(num, den);

  // Transverse part of ⟨J_u²⟩ for u in the yz plane; the isotropic term is
  // the same for both candidates and drops out.
  auto q = [&](double uy, double uz) { return uy * uy * den + uy * uz * num; };
  const double qs = q(-std::sin(theta), std::cos(theta));
  const double qr = q(std::cos(theta), std::sin(theta));
  if (qs > qr) theta += (theta <= 0 ? 0.5 : -0.5) * std::numbers::pi;
  return theta;
}

ModeDirections optimal_directions(int n_total, double mu) {
  const double th = squeezing_angle(n_total, mu);
  return {Direction::normalized(0, std::cos(th), std::sin(th)), Direction::normalized(0, -std::sin(th), std::cos(th))};
}

std::vector<ModeDirections> optimal_directions(int n_total, double mu, int modes) {
  return std::vector<ModeDirections>(modes, optimal_directions(n_total, mu));
}

OatCoefficients OatCoefficients::of(const OatParams& oat) {
  OatCoefficients oc;
  oc.n_total = oat.n_total;
  oc.mean = pow_cos(0.5 * oat.mu, oat.n_total - 1);
  if (oat.n_total >= 2) {
    oc.c = pow_cos(oat.mu, oat.n_total - 2);
    oc.s = std::sin(0.5 * oat.mu) * pow_cos(0.5 * oat.mu, oat.n_total - 2);
  }
  return oc;
}

double sss_pn_mean(const SplitConfig& cfg, const OatCoefficients& oc, const Direction& u, int k) {
  check_mode(cfg, k);
  return pn_mean(cfg, oc, u.components(), k);
}

double sss_pn_second(const SplitConfig& cfg, const OatCoefficients& oc, const Direction& u, const Direction& v,
                     int k, int l) {
  check_mode(cfg, k);
  check_mode(cfg, l);
  return pn_second(cfg, oc, u.components(), v.components(), k, l);
}

double sss_npn_mean(const SplitConfig& cfg, const OatCoefficients& oc, const Direction& u, int k) {
  check_mode(cfg, k);
  return npn_mean(cfg, oc, u.components(), k);
}

double sss_npn_second(const SplitConfig& cfg, const OatCoefficients& oc, const Direction& u,
                      const Direction& v, int k, int l) {
  check_mode(cfg, k);
  check_mode(cfg, l);
  return npn_second(cfg, oc, u.components(), v.components(), k, l);
}

MomentSet sss_pn_moments(const SplitConfig& cfg, const OatParams& oat, const std::vector<ModeDirections>& dirs) {
  if (!cfg.partition_noise()) throw DomainError("sss_pn_moments: split must be probabilistic");
  if (cfg.n_total() != oat.n_total) throw DomainError("sss_pn_moments: particle numbers differ");
  const auto oc = OatCoefficients::of(oat);
  return linear_moment_set(
      cfg.modes(), dirs, [&](const Vec3& u, int k) { return pn_mean(cfg, oc, u, k); },
      [&](const Vec3& u, const Vec3& v, int k, int l) { return pn_second(cfg, oc, u, v, k, l); });
}

MomentSet sss_npn_moments(const SplitConfig& cfg, const OatParams& oat, const std::vector<ModeDirections>& dirs) {
  if (cfg.partition_noise()) throw DomainError("sss_npn_moments: split must have fixed counts");
  if (cfg.n_total() != oat.n_total) throw DomainError("sss_npn_moments: counts do not add up to N");
  const auto oc = OatCoefficients::of(oat);
  return linear_moment_set(
      cfg.modes(), dirs, [&](const Vec3& u, int k) { return npn_mean(cfg, oc, u, k); },
      [&](const Vec3& u, const Vec3& v, int k, int l) { return npn_second(cfg, oc, u, v, k, l); });
}

namespace {

void check_dicke_split(const SplitConfig& cfg, const DickeParams& dicke) {
  if (!cfg.partition_noise()) throw DomainError("split Dicke moments need a probabilistic split");
  if (cfg.n_total() != dicke.n_total()) throw DomainError("split Dicke moments: N differs from 2j");
}

double fock_mean(const SplitConfig& cfg, const DickeParams& d, const Vec3& u, int k) {
  return cfg.p()[k] * d.m() * u[2];
}

double fock_second(const SplitConfig& cfg, const DickeParams& d, const Vec3& u, const Vec3& v, int k, int l) {
  const double j = d.j(), m = d.m();
  const auto& p = cfg.p();
  const double transverse = u[0] * v[0] + u[1] * v[1];
  if (k == l)
    return p[k] / 2.0 * ((j + (j * j - m * m) * p[k]) * transverse + (j - j * p[k] + 2 * m * m * p[k]) * u[2] * v[2]);
  return (j * j - m * m) / 2.0 * p[k] * p[l] * transverse + (m * m - j / 2.0) * p[k] * p[l] * u[2] * v[2];
}

}  // namespace

FockMoments split_fock_moments(const SplitConfig& cfg, const DickeParams& dicke, const Direction& u,
                               const Direction& v, int k, int l) {
  check_dicke_split(cfg, dicke);
  check_mode(cfg, k);
  check_mode(cfg, l);
  return {fock_mean(cfg, dicke, u.components(), k), fock_second(cfg, dicke, u.components(), u.components(), k, k),
          fock_second(cfg, dicke, u.components(), v.components(), k, l)};
}

MomentSet split_dicke_linear_moments(const SplitConfig& cfg, const DickeParams& dicke,
                                     const std::vector<ModeDirections>& dirs) {
  check_dicke_split(cfg, dicke);
  return linear_moment_set(
      cfg.modes(), dirs, [&](const Vec3& u, int k) { return fock_mean(cfg, dicke, u, k); },
      [&](const Vec3& u, const Vec3& v, int k, int l) { return fock_second(cfg, dicke, u, v, k, l); });
}

DickeTables dicke_single_mode_tables(const DickeParams& dicke) {
  const double j = dicke.j(), m = dicke.m(), jj = j * (j + 1), m2 = m * m;
  const double lin = 0.5 * (jj - m2);
  const double quad = (m2 * (m2 + 5) + jj * (jj - 2 * (m2 + 1))) / 8.0;
  const double mixed = m / 4.0 * (2 * jj - (2 * m2 + 1));
  const double anti = (jj + (4 * jj - 5) * m2 - 4 * m2 * m2) / 8.0;

  DickeTables t;
  auto set = [&](int a, int b, double v) { t.cov[a][b] = t.cov[b][a] = v; };
  set(kJx, kJx, lin);
  set(kJy, kJy, lin);
  set(kJx, kXZ, mixed);
  set(kJy, kYZ, mixed);
  set(kXZ, kXZ, anti);
  set(kYZ, kYZ, anti);
  set(kXY, kXY, quad);
  set(kJx2, kJx2, quad);
  set(kJy2, kJy2, quad);
  set(kJx2, kJy2, -quad);

  const double twist = 0.5 * (jj - 3 * m2);
  t.comm[0][kJy] = m;
  t.comm[1][kJx] = -m;
  t.comm[0][kYZ] = -twist;
  t.comm[1][kXZ] = twist;
  return t;
}

MomentSet split_dicke_nl_moments(const SplitConfig& cfg, const DickeParams& dicke) {
  check_dicke_split(cfg, dicke);
  const int modes = cfg.modes();
  const auto& p = cfg.p();
  const double j = dicke.j(), m = dicke.m(), jj = j * (j + 1), m2 = m * m, d = j * j - m2;

  MomentSet ms;
  ms.order = MeasurementOrder::nonlinear;
  ms.mean_x.assign(modes, 0.0);
  ms.cov_ss = SymMatrix(4 * modes);
  ms.cov_rr = SymMatrix(2 * modes);
  ms.comm = Matrix(2 * modes, 4 * modes);

  enum { X = 0, Y = 1, XZ = 2, YZ = 3 };
  for (int k = 0; k < modes; ++k) {
    const double pk = p[k];
    const double var_lin = 0.5 * pk * (j + d * pk);
    const double lin_nl = 0.5 * pk * pk * (0.5 * (2 * j - 1) * m + m * d * pk);
    const double var_nl = pk * pk / 8.0 *
                          (j * (3 * j - 1) - m2 + 2 * (j - 1) * ((j - 1) * j + m2) * pk -
                           2 * d * (j - 2 * m2 - 1) * pk * pk);
    ms.cov_ss.set(4 * k + X, 4 * k + X, var_lin);
    ms.cov_ss.set(4 * k + Y, 4 * k + Y, var_lin);
    ms.cov_ss.set(4 * k + X, 4 * k + XZ, lin_nl);
    ms.cov_ss.set(4 * k + Y, 4 * k + YZ, lin_nl);
    ms.cov_ss.set(4 * k + XZ, 4 * k + XZ, var_nl);
    ms.cov_ss.set(4 * k + YZ, 4 * k + YZ, var_nl);
    ms.cov_rr.set(2 * k + X, 2 * k + X, var_lin);
    ms.cov_rr.set(2 * k + Y, 2 * k + Y, var_lin);

    for (int l = k + 1; l < modes; ++l) {
      const double pl = p[l];
      const double lin = 0.5 * pk * pl * d;
      const double nl = -0.25 * pk * pk * pl * pl * d * (j - 2 * m2 - 1);
      for (int a : {X, Y}) {
        ms.cov_ss.set(4 * k + a, 4 * l + a, lin);
        ms.cov_ss.set(4 * k + a, 4 * l + a + 2, 0.5 * pk * pl * pl * m * d);
        ms.cov_ss.set(4 * k + a + 2, 4 * l + a, 0.5 * pk * pk * pl * m * d);
        ms.cov_ss.set(4 * k + a + 2, 4 * l + a + 2, nl);
        ms.cov_rr.set(2 * k + a, 2 * l + a, lin);
      }
    }

    const double twist = 0.5 * (jj - 3 * m2) * pk * pk;
    ms.comm(2 * k + X, 4 * k + Y) = m * pk;
    ms.comm(2 * k + Y, 4 * k + X) = -m * pk;
    ms.comm(2 * k + Y, 4 * k + XZ) = twist;
    ms.comm(2 * k + X, 4 * k + YZ) = -twist;

    const std::string tag = std::to_string(k);
    for (const char* g : {"J_x,", "J_y,"}) ms.generator_labels.push_back(g + tag);
    for (const char* o : {"J_x,", "J_y,", "{J_x,J_z}/2,", "{J_y,J_z}/2,"}) ms.observable_labels.push_back(o + tag);
  }
  return ms;
}

}  // namespace splitsq
