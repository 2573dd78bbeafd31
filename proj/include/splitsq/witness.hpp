#pragma once

#include <string>
#include <vector>

#include "splitsq/metrology.hpp"
#include <json.hpp>

namespace splitsq {

struct Threshold {
  int k;
  double bound;  // 1/k
};

// Mode-entanglement depth from one eigenvalue compared against 1/k.
//   largest_violated_k = 0 when nothing is violated;
//   certified_depth = min(largest_violated_k + 1, M), so 1 means "none".
struct DepthFragment {
  double value = 1.0;
  int largest_violated_k = 0;
  int certified_depth = 1;
  std::vector<Threshold> thresholds_crossed;
};

struct WitnessReport {
  double lambda_min_xi2 = 1.0;
  double lambda_min_xi2_ms = 1.0;
  double inv_lambda_max_chi2 = 1.0;
  double inv_lambda_max_chi2_ms = 1.0;
  bool particle_entangled = false;
  int largest_violated_k = 0;
  int certified_depth = 1;
  std::vector<Threshold> thresholds_crossed;
  int qfi_largest_violated_k = 0;
  int qfi_certified_depth = 1;
  bool hierarchy_ok = true;
  bool hierarchy_ms_ok = true;
};

enum class HierarchyKind { standard, mode_sep };

bool shot_noise_witness(const TaggedMatrix& xi2);
DepthFragment k_producibility_witness(const TaggedMatrix& xi2_ms);
DepthFragment qfi_depth_witness(const TaggedMatrix& chi_ms);
bool hierarchy_check(const TaggedMatrix& xi, const TaggedMatrix& chi, HierarchyKind kind);

// Everything at once for a reduced moment set of a pure state.
WitnessReport witness_report(const MomentSet& ms, const EstimationConfig& est);

nlohmann::json to_json(const WitnessReport& r);

}  // namespace splitsq
