#include "splitsq/metrology.hpp"

#include <cmath>

#include "splitsq/analytic.hpp"
#include "splitsq/errors.hpp"

namespace splitsq {

namespace {

Provenance provenance_of(const MomentSet& ms) {
  return ms.source == MomentSource::oracle ? Provenance::from_oracle : Provenance::from_moments;
}

void require_reduced(const MomentSet& ms, const char* what) {
  if (!ms.reduced())
    throw DimensionMismatch(std::string(what) + ": needs one generator and one observable per mode");
}

Vector polarizations(const MomentSet& ms) {
  Vector d(ms.modes());
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = ms.comm(k, k);
    if (!(std::abs(d[k]) >= 1e-14))
      throw VanishingPolarization("commutator expectation of mode " + std::to_string(k) + " vanishes");
  }
  return d;
}

Vector generator_spreads(const MomentSet& ms) {
  Vector s(ms.modes());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double var = ms.cov_rr(k, k);
    if (!(var >= 1e-16)) throw ZeroGeneratorVariance("generator variance of mode " + std::to_string(k) + " vanishes");
    s[k] = std::sqrt(var);
  }
  return s;
}

}  // namespace

const char* to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::xi2: return "xi2";
    case MatrixKind::xi2_ms: return "xi2_ms";
    case MatrixKind::chi_inv2: return "chi_inv2";
    case MatrixKind::chi_inv2_ms: return "chi_inv2_ms";
    case MatrixKind::moment: return "moment";
    case MatrixKind::sigma: return "sigma";
    case MatrixKind::gamma: return "gamma";
    case MatrixKind::commutator: return "commutator";
  }
  return "?";
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::closed_form: return "closed_form";
    case Provenance::from_moments: return "from_moments";
    case Provenance::from_oracle: return "from_oracle";
  }
  return "?";
}

TaggedMatrix::TaggedMatrix(MatrixKind kind, Provenance provenance, SymMatrix m)
    : kind_(kind), provenance_(provenance), general_(m.to_matrix()), sym_(std::move(m)) {
  if (kind == MatrixKind::commutator) throw DomainError("TaggedMatrix: use TaggedMatrix::commutator");
}

TaggedMatrix TaggedMatrix::commutator(Provenance provenance, Matrix m) {
  return TaggedMatrix(MatrixKind::commutator, provenance, std::move(m));
}

const SymMatrix& TaggedMatrix::sym() const {
  if (!sym_) throw DomainError("TaggedMatrix: commutator matrix is not symmetric");
  return *sym_;
}

EstimationConfig::EstimationConfig(int eta, Vector n_k) : repetitions(eta), shot_noise_diag(std::move(n_k)) {
  if (eta < 1) throw DomainError("EstimationConfig: repetitions must be at least 1");
  for (double n : shot_noise_diag)
    if (!(n > 0)) throw DomainError("EstimationConfig: particle numbers must be positive");
}

EstimationConfig EstimationConfig::from_split(const SplitConfig& cfg, int eta) { return {eta, cfg.mean_counts()}; }

LinearCombination LinearCombination::unit(Vector n) {
  const double len = norm(n);
  if (!(len > 0)) throw DomainError("LinearCombination: zero vector");
  for (double& x : n) x /= len;
  return {std::move(n)};
}

bool LinearCombination::is_normalized() const { return std::abs(norm(coefficients) - 1.0) <= 1e-12; }

TaggedMatrix gamma_matrix(const MomentSet& ms) { return {MatrixKind::gamma, provenance_of(ms), ms.cov_ss}; }

TaggedMatrix commutator_matrix(const MomentSet& ms) { return TaggedMatrix::commutator(provenance_of(ms), ms.comm); }

TaggedMatrix moment_matrix(const MomentSet& ms, RedundancyPolicy policy) {
  if (ms.comm.cols() != ms.cov_ss.dim()) throw DimensionMismatch("moment_matrix: commutator/covariance mismatch");
  if (policy == RedundancyPolicy::strict)
    return {MatrixKind::moment, provenance_of(ms), congruence(ms.comm, invert_spd(ms.cov_ss))};

  const auto pinv = pseudo_inverse_psd(ms.cov_ss, 1e-10);
  const Matrix leak = ms.comm * pinv.null_basis;
  double scale = 0.0, worst = 0.0;
  for (double v : ms.comm.data()) scale = std::max(scale, std::abs(v));
  for (double v : leak.data()) worst = std::max(worst, std::abs(v));
  if (worst > 1e-9 * std::max(1.0, scale))
    throw SingularCovariance("moment_matrix: covariance is singular along a direction the commutators see");
  return {MatrixKind::moment, provenance_of(ms), congruence(ms.comm, pinv.inverse)};
}

TaggedMatrix estimator_covariance(const TaggedMatrix& moment, const EstimationConfig& est) {
  if (moment.kind() != MatrixKind::moment) throw DomainError("estimator_covariance: expects a moment matrix");
  try {
    return {MatrixKind::sigma, moment.provenance(), (1.0 / est.repetitions) * invert_spd(moment.sym())};
  } catch (const SingularCovariance& e) {
    throw SingularMoment(std::string("estimator_covariance: ") + e.what());
  }
}

double combo_variance(const TaggedMatrix& sigma, const LinearCombination& n) {
  if (sigma.kind() != MatrixKind::sigma) throw DomainError("combo_variance: expects an estimator covariance");
  return quadratic_form(sigma.sym(), n.coefficients);
}

TaggedMatrix xi2_matrix(const MomentSet& ms, const EstimationConfig& est) {
  require_reduced(ms, "xi2_matrix");
  if (est.shot_noise_diag.size() != ms.modes()) throw DimensionMismatch("xi2_matrix: N_k size mismatch");
  const Vector d = polarizations(ms);
  const Vector& n = est.shot_noise_diag;
  SymMatrix xi(ms.modes());
  for (std::size_t k = 0; k < ms.modes(); ++k)
    for (std::size_t l = k; l < ms.modes(); ++l)
      xi.set(k, l, std::sqrt(n[k] * n[l]) * ms.cov_ss(k, l) / (d[k] * d[l]));
  return {MatrixKind::xi2, provenance_of(ms), xi};
}

TaggedMatrix xi2_ms_matrix(const MomentSet& ms) {
  require_reduced(ms, "xi2_ms_matrix");
  const Vector d = polarizations(ms);
  const Vector spread = generator_spreads(ms);
  SymMatrix xi(ms.modes());
  for (std::size_t k = 0; k < ms.modes(); ++k)
    for (std::size_t l = k; l < ms.modes(); ++l)
      xi.set(k, l, 4.0 * spread[k] * spread[l] * ms.cov_ss(k, l) / (d[k] * d[l]));
  return {MatrixKind::xi2_ms, provenance_of(ms), xi};
}

TaggedMatrix chi_inv2_matrix(const MomentSet& ms, const EstimationConfig& est, bool pure_state) {
  if (!pure_state) throw ImpureStateUnsupported("chi_inv2_matrix: only the pure-state identity F_Q = 4 Gamma is implemented");
  const std::size_t g = ms.cov_rr.dim();
  if (est.shot_noise_diag.size() != g) throw DimensionMismatch("chi_inv2_matrix: N_k size mismatch");
  const Vector& n = est.shot_noise_diag;
  SymMatrix chi(g);
  for (std::size_t k = 0; k < g; ++k)
    for (std::size_t l = k; l < g; ++l) chi.set(k, l, 4.0 * ms.cov_rr(k, l) / std::sqrt(n[k] * n[l]));
  return {MatrixKind::chi_inv2, provenance_of(ms), chi};
}

TaggedMatrix chi_inv2_ms_matrix(const MomentSet& ms, bool pure_state) {
  if (!pure_state) throw ImpureStateUnsupported("chi_inv2_ms_matrix: only pure states are supported");
  const std::size_t g = ms.cov_rr.dim();
  Vector spread(g);
  for (std::size_t k = 0; k < g; ++k) {
    if (!(ms.cov_rr(k, k) >= 1e-16)) throw ZeroGeneratorVariance("chi_inv2_ms_matrix: generator variance vanishes");
    spread[k] = std::sqrt(ms.cov_rr(k, k));
  }
  SymMatrix chi(g);
  for (std::size_t k = 0; k < g; ++k)
    for (std::size_t l = k; l < g; ++l) chi.set(k, l, k == l ? 1.0 : ms.cov_rr(k, l) / (spread[k] * spread[l]));
  return {MatrixKind::chi_inv2_ms, provenance_of(ms), chi};
}

MomentSet apply_pi_flips(const MomentSet& ms, const std::vector<bool>& flips) {
  if (flips.size() != ms.modes()) throw DimensionMismatch("apply_pi_flips: one flag per mode");
  // Sign of each family member under a π rotation about x.
  Vector gen_sign, obs_sign;
  if (ms.reduced()) {
    for (std::size_t k = 0; k < ms.modes(); ++k) {
      gen_sign.push_back(flips[k] ? -1.0 : 1.0);
      obs_sign.push_back(flips[k] ? -1.0 : 1.0);
    }
  } else if (ms.order == MeasurementOrder::nonlinear && ms.cov_rr.dim() == 2 * ms.modes() &&
             ms.cov_ss.dim() == 4 * ms.modes()) {
    for (std::size_t k = 0; k < ms.modes(); ++k) {
      const double f = flips[k] ? -1.0 : 1.0;
      gen_sign.insert(gen_sign.end(), {1.0, f});
      obs_sign.insert(obs_sign.end(), {1.0, f, f, 1.0});
    }
  } else {
    throw DimensionMismatch("apply_pi_flips: unsupported moment family layout");
  }

  MomentSet out = ms;
  for (std::size_t a = 0; a < obs_sign.size(); ++a)
    for (std::size_t b = a; b < obs_sign.size(); ++b) out.cov_ss.set(a, b, obs_sign[a] * obs_sign[b] * ms.cov_ss(a, b));
  for (std::size_t a = 0; a < gen_sign.size(); ++a)
    for (std::size_t b = a; b < gen_sign.size(); ++b) out.cov_rr.set(a, b, gen_sign[a] * gen_sign[b] * ms.cov_rr(a, b));
  for (std::size_t a = 0; a < gen_sign.size(); ++a)
    for (std::size_t b = 0; b < obs_sign.size(); ++b) out.comm(a, b) = gen_sign[a] * obs_sign[b] * ms.comm(a, b);
  return out;
}

std::array<double, 4> dicke_optimal_observable(const DickeParams& dicke, const Direction& r) {
  if (std::abs(r.z()) > 1e-12) throw DomainError("dicke_optimal_observable: r must lie in the xy plane");
  const double m = dicke.m();
  std::array<double, 4> c{-m * r.y(), m * r.x(), r.y(), -r.x()};
  // Largest magnitude wins; ties go to the later (second-order) entries.
  std::size_t pick = 3;
  for (std::size_t i = 4; i-- > 0;)
    if (std::abs(c[i]) > std::abs(c[pick]) * (1 + 1e-15)) pick = i;
  const double scale = c[pick];
  for (double& x : c) x /= scale;
  return c;
}

MomentSet split_dicke_nl_reduced(const SplitConfig& cfg, const DickeParams& dicke, const std::vector<Direction>& r) {
  const int modes = cfg.modes();
  if (static_cast<int>(r.size()) != modes) throw DimensionMismatch("split_dicke_nl_reduced: one direction per mode");
  const MomentSet full = split_dicke_nl_moments(cfg, dicke);
  Matrix gen(modes, 2 * modes), obs(modes, 4 * modes);
  for (int k = 0; k < modes; ++k) {
    gen(k, 2 * k) = r[k].x();
    gen(k, 2 * k + 1) = r[k].y();
    const auto s = dicke_optimal_observable(dicke, r[k]);
    for (int a = 0; a < 4; ++a) obs(k, 4 * k + a) = s[a];
  }
  MomentSet out = project(full, gen, obs);
  for (int k = 0; k < modes; ++k) {
    out.generator_labels[k] = "J_r," + std::to_string(k);
    out.observable_labels[k] = "X_s," + std::to_string(k);
  }
  return out;
}

}  // namespace splitsq
