#pragma once

#include <string>
#include <vector>

#include "splitsq/linalg.hpp"

namespace splitsq {

enum class MomentSource { analytic, oracle };
enum class MeasurementOrder { linear, nonlinear };

// First and second moments needed by the metrology matrices.
//
// The generator family has g members (one direction r_k per mode for the
// reduced form) and the measured family has x members. For the reduced form
// g = x = M; the nonlinear split-Dicke family keeps g = 2M, x = 4M until it is
// projected onto per-mode observables.
struct MomentSet {
  Vector mean_x;  // ⟨J_x,k⟩ per mode
  SymMatrix cov_ss;  // Cov of measured observables (x × x)
  SymMatrix cov_rr;  // Cov of generators (g × g)
  Matrix comm;       // −i⟨[G_a, X_b]⟩ (g × x)
  std::vector<std::string> generator_labels;
  std::vector<std::string> observable_labels;
  MeasurementOrder order = MeasurementOrder::linear;
  MomentSource source = MomentSource::analytic;

  std::size_t modes() const { return mean_x.size(); }
  bool reduced() const { return cov_ss.dim() == modes() && cov_rr.dim() == modes() && comm.rows() == modes(); }
};

// Replace the families by linear combinations: generators R·G, observables S·X.
MomentSet project(const MomentSet& full, const Matrix& generator_weights, const Matrix& observable_weights);

}  // namespace splitsq
