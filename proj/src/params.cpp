#include "splitsq/params.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "splitsq/errors.hpp"

namespace splitsq {

Direction::Direction(double x, double y, double z) : c_{x, y, z} {
  const double n2 = x * x + y * y + z * z;
  if (!std::isfinite(n2) || std::abs(std::sqrt(n2) - 1.0) > 1e-12)
    throw DomainError("Direction: vector is not unit norm");
}

Direction Direction::normalized(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 0) || !std::isfinite(n)) throw DomainError("Direction: cannot normalize zero vector");
  return {x / n, y / n, z / n};
}

std::array<double, 3> cross(const Direction& a, const Direction& b) {
  return {a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(), a.x() * b.y() - a.y() * b.x()};
}

double dot(const Direction& a, const Direction& b) { return a.x() * b.x() + a.y() * b.y() + a.z() * b.z(); }

SplitConfig SplitConfig::probabilistic(int n_total, std::vector<double> p) {
  if (n_total < 1) throw DomainError("SplitConfig: particle number must be positive");
  if (p.empty()) throw DomainError("SplitConfig: need at least one mode");
  double sum = 0.0;
  for (double x : p) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("SplitConfig: probabilities must be positive");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("SplitConfig: probabilities must sum to 1");
  SplitConfig c;
  c.n_total_ = n_total;
  c.split_ = Probabilities{std::move(p)};
  return c;
}

SplitConfig SplitConfig::deterministic(std::vector<int> counts) {
  if (counts.empty()) throw DomainError("SplitConfig: need at least one mode");
  for (int n : counts)
    if (n < 1) throw DomainError("SplitConfig: every mode needs at least one particle");
  SplitConfig c;
  c.n_total_ = std::accumulate(counts.begin(), counts.end(), 0);
  c.split_ = Deterministic{std::move(counts)};
  return c;
}

SplitConfig SplitConfig::equal(int n_total, int modes, bool partition_noise) {
  if (modes < 1) throw DomainError("SplitConfig: need at least one mode");
  if (partition_noise) return probabilistic(n_total, std::vector<double>(modes, 1.0 / modes));
  if (n_total % modes != 0) throw DomainError("SplitConfig: N is not divisible by M for an equal fixed split");
  return deterministic(std::vector<int>(modes, n_total / modes));
}

int SplitConfig::modes() const {
  if (partition_noise()) return static_cast<int>(std::get<Probabilities>(split_).p.size());
  return static_cast<int>(std::get<Deterministic>(split_).counts.size());
}

const std::vector<double>& SplitConfig::p() const {
  if (!partition_noise()) throw DomainError("SplitConfig: split has fixed counts, not probabilities");
  return std::get<Probabilities>(split_).p;
}

const std::vector<int>& SplitConfig::counts() const {
  if (partition_noise()) throw DomainError("SplitConfig: split is probabilistic, not fixed counts");
  return std::get<Deterministic>(split_).counts;
}

std::vector<double> SplitConfig::mean_counts() const {
  std::vector<double> out;
  if (partition_noise())
    for (double x : p()) out.push_back(x * n_total_);
  else
    for (int n : counts()) out.push_back(n);
  return out;
}

OatParams::OatParams(int n, double mu_) : n_total(n), mu(mu_) {
  if (n < 1) throw DomainError("OatParams: particle number must be positive");
  if (!(mu_ >= 0.0 && mu_ < 2.0 * std::numbers::pi)) throw DomainError("OatParams: mu must lie in [0, 2pi)");
}

DickeParams::DickeParams(int two_j, int two_m) : two_j_(two_j), two_m_(two_m) {
  if (two_j < 1) throw DomainError("DickeParams: j must be positive");
  if (std::abs(two_m) > two_j) throw DomainError("DickeParams: |m| exceeds j");
  if ((two_j - two_m) % 2 != 0) throw DomainError("DickeParams: j and m must have the same integrality");
}

}  // namespace splitsq
