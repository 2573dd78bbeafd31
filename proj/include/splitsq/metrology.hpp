#pragma once

#include <array>
#include <optional>
#include <vector>

#include "splitsq/linalg.hpp"
#include "splitsq/moments.hpp"
#include "splitsq/params.hpp"

namespace splitsq {

enum class MatrixKind { xi2, xi2_ms, chi_inv2, chi_inv2_ms, moment, sigma, gamma, commutator };
enum class Provenance { closed_form, from_moments, from_oracle };

const char* to_string(MatrixKind kind);
const char* to_string(Provenance p);

// A metrology matrix together with what it is and where it came from.
// Every kind except `commutator` is symmetric.
class TaggedMatrix {
 public:
  TaggedMatrix(MatrixKind kind, Provenance provenance, SymMatrix m);
  static TaggedMatrix commutator(Provenance provenance, Matrix m);

  MatrixKind kind() const { return kind_; }
  Provenance provenance() const { return provenance_; }
  std::size_t dim() const { return general_.rows(); }

  const SymMatrix& sym() const;  // throws DomainError for commutator matrices
  const Matrix& general() const { return general_; }

  EigenDecomposition eigen() const { return eig_sym(sym()); }
  double lambda_min() const { return eigen().min(); }
  double lambda_max() const { return eigen().max(); }

 private:
  TaggedMatrix(MatrixKind kind, Provenance provenance, Matrix m) : kind_(kind), provenance_(provenance), general_(std::move(m)) {}

  MatrixKind kind_;
  Provenance provenance_;
  Matrix general_;
  std::optional<SymMatrix> sym_;
};

struct EstimationConfig {
  int repetitions = 1;     // η
  Vector shot_noise_diag;  // N_k

  EstimationConfig(int eta, Vector n_k);
  static EstimationConfig from_split(const SplitConfig& cfg, int eta = 1);
};

struct LinearCombination {
  Vector coefficients;

  static LinearCombination unit(Vector n);  // normalizes, throws on zero
  bool is_normalized() const;
};

// How moment_matrix treats an exactly singular covariance of the measured
// family. `project` inverts Γ on its range, which is exact when the
// commutator rows are orthogonal to the null space (redundant observables);
// otherwise it still throws.
enum class RedundancyPolicy { strict, project };

TaggedMatrix gamma_matrix(const MomentSet& ms);
TaggedMatrix commutator_matrix(const MomentSet& ms);
TaggedMatrix moment_matrix(const MomentSet& ms, RedundancyPolicy policy = RedundancyPolicy::strict);
TaggedMatrix estimator_covariance(const TaggedMatrix& moment, const EstimationConfig& est);
double combo_variance(const TaggedMatrix& sigma, const LinearCombination& n);

TaggedMatrix xi2_matrix(const MomentSet& ms, const EstimationConfig& est);
TaggedMatrix xi2_ms_matrix(const MomentSet& ms);
TaggedMatrix chi_inv2_matrix(const MomentSet& ms, const EstimationConfig& est, bool pure_state);
TaggedMatrix chi_inv2_ms_matrix(const MomentSet& ms, bool pure_state);

// π rotation about x on the flagged modes.
MomentSet apply_pi_flips(const MomentSet& ms, const std::vector<bool>& flips);

// Coefficients over (Jx, Jy, {Jx,Jz}/2, {Jy,Jz}/2) of the optimal observable
// for a rotation about r (in the xy plane): ∝ (-m r_y, m r_x, r_y, -r_x),
// scaled so that the largest-magnitude coefficient is +1.
std::array<double, 4> dicke_optimal_observable(const DickeParams& dicke, const Direction& r);

// Split Dicke nonlinear moments reduced to one generator J_{r_k} and one
// optimal observable per mode.
MomentSet split_dicke_nl_reduced(const SplitConfig& cfg, const DickeParams& dicke, const std::vector<Direction>& r);

}  // namespace splitsq
