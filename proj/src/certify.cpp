#include "splitsq/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "splitsq/analytic.hpp"
#include "splitsq/errors.hpp"
#include "splitsq/kernels.hpp"
#include "splitsq/oracle.hpp"

namespace splitsq {

namespace {

enum Family { kSqueezedPn, kSqueezedNpn, kFockLinear, kDickeSingle, kDickeNonlinear, kFamilyCount };
constexpr const char* kFamilyNames[kFamilyCount] = {"split_squeezed_pn", "split_squeezed_npn", "split_fock_linear",
                                                    "dicke_single_mode", "split_dicke_nonlinear"};
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Draw {
  Family family;
  int n, modes;
  double mu;
  std::vector<double> p;
  std::vector<int> counts;
  int two_m;
  Direction u, v;
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  int below(int n) { return std::min(n - 1, static_cast<int>(uniform() * n)); }

  Direction direction() {
    const double z = 2 * uniform() - 1, phi = 2 * std::numbers::pi * uniform();
    const double r = std::sqrt(std::max(0.0, 1 - z * z));
    return Direction::normalized(r * std::cos(phi), r * std::sin(phi), z);
  }
  std::vector<double> probabilities(int modes) {
    std::vector<double> p(modes);
    double sum = 0;
    for (double& x : p) sum += x = 0.1 + uniform();
    for (double& x : p) x /= sum;
    return p;
  }
  std::vector<int> counts(int n, int modes) {
    std::vector<int> c(modes, 1);
    for (int i = modes; i < n; ++i) ++c[below(modes)];
    return c;
  }
  double mu() { return 2 * std::numbers::pi * (1e-6 + (1 - 2e-6) * uniform()); }

 private:
  std::mt19937_64 rng_;
};

double dev(double a, double b) {
  const double d = std::abs(a - b);
  return std::isnan(d) ? kInf : d;
}

double max_dev(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) return kInf;
  double m = 0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, dev(a(i, j), b(i, j)));
  return m;
}

double max_dev(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return kInf;
  double m = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, dev(a(i, j), b(i, j)));
  return m;
}

double max_dev(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return kInf;
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, dev(a[i], b[i]));
  return m;
}

double max_dev(const MomentSet& a, const MomentSet& b) {
  return std::max({max_dev(a.mean_x, b.mean_x), max_dev(a.cov_ss, b.cov_ss), max_dev(a.cov_rr, b.cov_rr),
                   max_dev(a.comm, b.comm)});
}

// General-direction first and second moments, for every mode pair.
template <class Mean, class Second>
double general_moments(const oracle::FockState& st, const Draw& d, Mean analytic_mean, Second analytic_second) {
  double m = 0;
  for (int k = 0; k < d.modes; ++k) {
    m = std::max(m, dev(analytic_mean(d.u, k), oracle::mean(st, k, d.u)));
    for (int l = 0; l < d.modes; ++l) {
      m = std::max(m, dev(analytic_second(d.u, d.v, k, l), oracle::sym_second(st, k, d.u, l, d.v)));
      m = std::max(m, dev(analytic_second(d.u, d.u, k, l), oracle::sym_second(st, k, d.u, l, d.u)));
    }
  }
  return m;
}

// Moments in the squeezed/anti-squeezed frame written with f±:
//   ⟨J_x,k⟩ = N̄_k/2·cos^{N-1}(μ/2)
//   Cov(J_s,k, J_s,l) = g_kl·f⁻ + δ_kl·N̄_k/4, and the same with r and f⁺,
// where g_kl = p_k p_l N(N-1)/4 with partition noise, N_k(N_l - δ_kl)/4 without.
double frame_moments(const oracle::FockState& st, const Draw& d, const SplitConfig& cfg, double offset) {
  const auto dirs = optimal_directions(d.n, d.mu, d.modes);
  const auto ms = oracle::linear_moments(st, dirs);
  const auto f = f_n_pm(d.n, d.mu);
  const double fm = f.f_minus + offset;
  const double mean = pow_cos(0.5 * d.mu, d.n - 1);
  const auto nk = cfg.mean_counts();
  double m = 0;
  for (int k = 0; k < d.modes; ++k) {
    m = std::max(m, dev(nk[k] / 2 * mean, ms.mean_x[k]));
    for (int l = 0; l < d.modes; ++l) {
      const double g = cfg.partition_noise() ? cfg.p()[k] * cfg.p()[l] * d.n * (d.n - 1) / 4.0
                                             : nk[k] * (nk[l] - (k == l)) / 4.0;
      const double diag = k == l ? nk[k] / 4 : 0.0;
      m = std::max(m, dev(g * fm + diag, ms.cov_ss(k, l)));
      m = std::max(m, dev(g * f.f_plus + diag, ms.cov_rr(k, l)));
    }
  }
  return m;
}

double run_squeezed(const Draw& d, const CertifyOptions& opt) {
  const OatParams oat(d.n, d.mu);
  const auto oc = OatCoefficients::of(oat);
  const auto dirs = optimal_directions(d.n, d.mu, d.modes);
  if (d.family == kSqueezedPn) {
    const auto cfg = SplitConfig::probabilistic(d.n, d.p);
    const auto st = oracle::split_state(oracle::oat_state(d.n, d.mu), d.p);
    double m = general_moments(
        st, d, [&](const Direction& u, int k) { return sss_pn_mean(cfg, oc, u, k); },
        [&](const Direction& u, const Direction& v, int k, int l) { return sss_pn_second(cfg, oc, u, v, k, l); });
    m = std::max(m, max_dev(sss_pn_moments(cfg, oat, dirs), oracle::linear_moments(st, dirs)));
    return std::max(m, frame_moments(st, d, cfg, opt.fminus_offset));
  }
  const auto cfg = SplitConfig::deterministic(d.counts);
  const auto st = oracle::npn_state(cfg, d.mu).to_fock();
  double m = general_moments(
      st, d, [&](const Direction& u, int k) { return sss_npn_mean(cfg, oc, u, k); },
      [&](const Direction& u, const Direction& v, int k, int l) { return sss_npn_second(cfg, oc, u, v, k, l); });
  m = std::max(m, max_dev(sss_npn_moments(cfg, oat, dirs), oracle::linear_moments(st, dirs)));
  return std::max(m, frame_moments(st, d, cfg, 0.0));
}

double run_fock_linear(const Draw& d) {
  const auto cfg = SplitConfig::probabilistic(d.n, d.p);
  const DickeParams dk(d.n, d.two_m);
  const auto st = oracle::split_dicke_state(dk, d.p);
  double m = 0;
  for (int k = 0; k < d.modes; ++k) {
    for (int l = 0; l < d.modes; ++l) {
      const auto a = split_fock_moments(cfg, dk, d.u, d.v, k, l);
      m = std::max(m, dev(a.mean_u_k, oracle::mean(st, k, d.u)));
      m = std::max(m, dev(a.second_u_k, oracle::sym_second(st, k, d.u, k, d.u)));
      m = std::max(m, dev(a.cross_uv_kl, oracle::sym_second(st, k, d.u, l, d.v)));
    }
  }
  const std::vector<ModeDirections> dirs(d.modes, {Direction::x_axis(), Direction::y_axis()});
  return std::max(m, max_dev(split_dicke_linear_moments(cfg, dk, dirs), oracle::linear_moments(st, dirs)));
}

double run_dicke_single(const Draw& d) {
  using oracle::OpExpr;
  const DickeParams dk(d.n, d.two_m);
  const auto st = oracle::split_dicke_state(dk, {1.0});
  const auto x = OpExpr::jx(0), y = OpExpr::jy(0), z = OpExpr::jz(0);
  const std::vector<OpExpr> ops{x,
                                y,
                                z,
                                oracle::anticommutator_half(x, z),
                                oracle::anticommutator_half(x, y),
                                oracle::anticommutator_half(y, z),
                                x * x,
                                y * y,
                                z * z};
  std::vector<OpExpr> exprs = ops;
  for (std::size_t a = 0; a < ops.size(); ++a)
    for (std::size_t b = 0; b < ops.size(); ++b) exprs.push_back(oracle::anticommutator_half(ops[a], ops[b]));
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < ops.size(); ++b) exprs.push_back(oracle::commutator(ops[a], ops[b]));
  const auto values = oracle::expect_many_serial(st, exprs);

  const auto tables = dicke_single_mode_tables(dk);
  const std::size_t n = ops.size();
  double m = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const double cov = values[n + a * n + b].real() - values[a].real() * values[b].real();
      m = std::max(m, dev(tables.cov[a][b], cov));
    }
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const double c = (oracle::Complex(0, -1) * values[n + n * n + a * n + b]).real();
      m = std::max(m, dev(tables.comm[a][b], c));
    }
  return m;
}

double run_dicke_nonlinear(const Draw& d) {
  const auto cfg = SplitConfig::probabilistic(d.n, d.p);
  const DickeParams dk(d.n, d.two_m);
  return max_dev(split_dicke_nl_moments(cfg, dk), oracle::nl_moments(oracle::split_dicke_state(dk, d.p)));
}

double run(const Draw& d, const CertifyOptions& opt) {
  try {
    switch (d.family) {
      case kSqueezedPn:
      case kSqueezedNpn: return run_squeezed(d, opt);
      case kFockLinear: return run_fock_linear(d);
      case kDickeSingle: return run_dicke_single(d);
      case kDickeNonlinear: return run_dicke_nonlinear(d);
      default: break;
    }
  } catch (const Error&) {
  }
  return kInf;
}

}  // namespace

bool CertifyReport::passed() const {
  return std::all_of(families.begin(), families.end(), [](const FamilyResult& f) { return f.passed; });
}

nlohmann::json CertifyReport::to_json() const {
  nlohmann::json fams = nlohmann::json::array();
  for (const auto& f : families) {
    nlohmann::json dev = std::isfinite(f.max_abs_dev) ? nlohmann::json(f.max_abs_dev) : nlohmann::json(nullptr);
    fams.push_back({{"name", f.name}, {"max_abs_dev", dev}, {"samples", f.samples}, {"passed", f.passed}});
  }
  return {{"max_n", max_n}, {"seed", seed}, {"tolerance", tolerance}, {"passed", passed()}, {"families", fams}};
}

CertifyReport oracle_certify(int max_n, std::uint64_t seed, const CertifyOptions& options) {
  if (max_n > 8) throw DomainError("oracle_certify: max_n is limited to 8");
  CertifyReport report{max_n, seed, options.tolerance, {}};
  if (max_n < 2) return report;

  Sampler s(seed);
  std::vector<Draw> draws;
  for (int f = 0; f < kFamilyCount; ++f) {
    for (int n = 2; n <= max_n; ++n) {
      for (int modes : {2, 3}) {
        if (f == kSqueezedNpn && n < modes) continue;
        for (int i = 0; i < options.draws; ++i) {
          const int dm = f == kDickeSingle ? 1 : modes;
          Draw d{static_cast<Family>(f), n, dm, s.mu(), s.probabilities(dm), s.counts(n, std::min(n, dm)),
                 -n + 2 * s.below(n + 1), s.direction(), s.direction()};
          draws.push_back(std::move(d));
        }
      }
    }
  }

  const auto devs = kernels::map_grid<double>(draws.size(), options.parallel,
                                              [&](std::size_t i) { return run(draws[i], options); });
  for (int f = 0; f < kFamilyCount; ++f) report.families.push_back({kFamilyNames[f], 0.0, 0, true});
  for (std::size_t i = 0; i < draws.size(); ++i) {
    auto& fam = report.families[draws[i].family];
    fam.max_abs_dev = std::max(fam.max_abs_dev, devs[i]);
    ++fam.samples;
  }
  for (auto& fam : report.families) fam.passed = fam.max_abs_dev <= options.tolerance;
  return report;
}

}  // namespace splitsq
