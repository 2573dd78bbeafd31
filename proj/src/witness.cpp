#include "splitsq/witness.hpp"

#include "splitsq/errors.hpp"

namespace splitsq {

namespace {

constexpr double kStrict = 1e-12;
constexpr double kHierarchySlack = 1e-9;

DepthFragment depth_from(double value, std::size_t modes) {
  DepthFragment out;
  out.value = value;
  for (int k = 1; k <= static_cast<int>(modes); ++k) {
    const double bound = 1.0 / k;
    if (value < bound - kStrict) {
      out.thresholds_crossed.push_back({k, bound});
      out.largest_violated_k = k;
    }
  }
  out.certified_depth = std::min(out.largest_violated_k + 1, static_cast<int>(modes));
  if (out.certified_depth < 1) out.certified_depth = 1;
  return out;
}

void expect_kind(const TaggedMatrix& m, MatrixKind kind, const char* what) {
  if (m.kind() != kind) throw DomainError(std::string(what) + ": expects a " + to_string(kind) + " matrix");
}

}  // namespace

bool shot_noise_witness(const TaggedMatrix& xi2) {
  expect_kind(xi2, MatrixKind::xi2, "shot_noise_witness");
  return xi2.lambda_min() < 1.0 - 1e-10;
}

DepthFragment k_producibility_witness(const TaggedMatrix& xi2_ms) {
  expect_kind(xi2_ms, MatrixKind::xi2_ms, "k_producibility_witness");
  return depth_from(xi2_ms.lambda_min(), xi2_ms.dim());
}

DepthFragment qfi_depth_witness(const TaggedMatrix& chi_ms) {
  expect_kind(chi_ms, MatrixKind::chi_inv2_ms, "qfi_depth_witness");
  return depth_from(1.0 / chi_ms.lambda_max(), chi_ms.dim());
}

bool hierarchy_check(const TaggedMatrix& xi, const TaggedMatrix& chi, HierarchyKind kind) {
  if (xi.dim() != chi.dim()) throw DimensionMismatch("hierarchy_check: dimension mismatch");
  if (kind == HierarchyKind::standard) {
    expect_kind(xi, MatrixKind::xi2, "hierarchy_check");
    expect_kind(chi, MatrixKind::chi_inv2, "hierarchy_check");
  } else {
    expect_kind(xi, MatrixKind::xi2_ms, "hierarchy_check");
    expect_kind(chi, MatrixKind::chi_inv2_ms, "hierarchy_check");
  }
  return xi.lambda_min() >= 1.0 / chi.lambda_max() - kHierarchySlack;
}

WitnessReport witness_report(const MomentSet& ms, const EstimationConfig& est) {
  const auto xi = xi2_matrix(ms, est);
  const auto xi_ms = xi2_ms_matrix(ms);
  const auto chi = chi_inv2_matrix(ms, est, true);
  const auto chi_ms = chi_inv2_ms_matrix(ms, true);

  WitnessReport r;
  r.lambda_min_xi2 = xi.lambda_min();
  r.lambda_min_xi2_ms = xi_ms.lambda_min();
  r.inv_lambda_max_chi2 = 1.0 / chi.lambda_max();
  r.inv_lambda_max_chi2_ms = 1.0 / chi_ms.lambda_max();
  r.particle_entangled = shot_noise_witness(xi);
  const auto depth = k_producibility_witness(xi_ms);
  r.largest_violated_k = depth.largest_violated_k;
  r.certified_depth = depth.certified_depth;
  r.thresholds_crossed = depth.thresholds_crossed;
  const auto qfi = qfi_depth_witness(chi_ms);
  r.qfi_largest_violated_k = qfi.largest_violated_k;
  r.qfi_certified_depth = qfi.certified_depth;
  r.hierarchy_ok = hierarchy_check(xi, chi, HierarchyKind::standard);
  r.hierarchy_ms_ok = hierarchy_check(xi_ms, chi_ms, HierarchyKind::mode_sep);
  return r;
}

nlohmann::json to_json(const WitnessReport& r) {
  nlohmann::json thresholds = nlohmann::json::array();
  for (const auto& t : r.thresholds_crossed) thresholds.push_back({{"k", t.k}, {"bound", t.bound}});
  return {{"lambda_min_xi2", r.lambda_min_xi2},
          {"lambda_min_xi2_ms", r.lambda_min_xi2_ms},
          {"inv_lambda_max_chi2", r.inv_lambda_max_chi2},
          {"inv_lambda_max_chi2_ms", r.inv_lambda_max_chi2_ms},
          {"particle_entangled", r.particle_entangled},
          {"largest_violated_k", r.largest_violated_k},
          {"certified_depth", r.certified_depth},
          {"thresholds_crossed", thresholds},
          {"qfi_largest_violated_k", r.qfi_largest_violated_k},
          {"qfi_certified_depth", r.qfi_certified_depth},
          {"hierarchy_ok", r.hierarchy_ok},
          {"hierarchy_ms_ok", r.hierarchy_ms_ok}};
}

}  // namespace splitsq
