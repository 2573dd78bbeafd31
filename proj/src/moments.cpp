#include "splitsq/moments.hpp"

#include "splitsq/errors.hpp"

namespace splitsq {

MomentSet project(const MomentSet& full, const Matrix& generator_weights, const Matrix& observable_weights) {
  if (generator_weights.cols() != full.cov_rr.dim() || observable_weights.cols() != full.cov_ss.dim())
    throw DimensionMismatch("project: weight matrices do not match the moment families");
  MomentSet out;
  out.mean_x = full.mean_x;
  out.order = full.order;
  out.source = full.source;
  out.cov_ss = congruence(observable_weights, full.cov_ss);
  out.cov_rr = congruence(generator_weights, full.cov_rr);
  out.comm = generator_weights * full.comm * observable_weights.transpose();
  for (std::size_t i = 0; i < generator_weights.rows(); ++i) out.generator_labels.push_back("G_" + std::to_string(i));
  for (std::size_t i = 0; i < observable_weights.rows(); ++i) out.observable_labels.push_back("X_" + std::to_string(i));
  return out;
}

}  // namespace splitsq
