#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

namespace splitsq {

// Unit 3-vector (u_x, u_y, u_z).
class Direction {
 public:
  Direction(double x, double y, double z);  // throws DomainError unless ‖u‖ = 1 to 1e-12
  static Direction normalized(double x, double y, double z);
  static Direction x_axis() { return {1, 0, 0}; }
  static Direction y_axis() { return {0, 1, 0}; }
  static Direction z_axis() { return {0, 0, 1}; }

  double x() const { return c_[0]; }
  double y() const { return c_[1]; }
  double z() const { return c_[2]; }
  const std::array<double, 3>& components() const { return c_; }

 private:
  std::array<double, 3> c_;
};

std::array<double, 3> cross(const Direction& a, const Direction& b);
double dot(const Direction& a, const Direction& b);

struct Probabilities {
  std::vector<double> p;
};
struct Deterministic {
  std::vector<int> counts;
};

// A collective state of n_total particles distributed over modes() modes,
// either by a beam splitter (partition noise) or with fixed counts.
class SplitConfig {
 public:
  static SplitConfig probabilistic(int n_total, std::vector<double> p);
  static SplitConfig deterministic(std::vector<int> counts);
  static SplitConfig equal(int n_total, int modes, bool partition_noise);

  int n_total() const { return n_total_; }
  int modes() const;
  bool partition_noise() const { return std::holds_alternative<Probabilities>(split_); }

  const std::vector<double>& p() const;    // throws unless partition_noise()
  const std::vector<int>& counts() const;  // throws if partition_noise()
  // Average particle number per mode: p_k·N or N_k.
  std::vector<double> mean_counts() const;

 private:
  int n_total_ = 0;
  std::variant<Probabilities, Deterministic> split_;
};

struct OatParams {
  int n_total;
  double mu;
  OatParams(int n, double mu);  // validates 0 ≤ mu < 2π and n ≥ 1
};

// |j, m⟩ with j and m stored doubled so parity checks stay exact.
class DickeParams {
 public:
  DickeParams(int two_j, int two_m);
  static DickeParams from_particles(int n_total, int two_m) { return {n_total, two_m}; }

  int two_j() const { return two_j_; }
  int two_m() const { return two_m_; }
  double j() const { return 0.5 * two_j_; }
  double m() const { return 0.5 * two_m_; }
  int n_total() const { return two_j_; }
  int n_up() const { return (two_j_ + two_m_) / 2; }
  int n_down() const { return (two_j_ - two_m_) / 2; }

 private:
  int two_j_, two_m_;
};

// Anti-squeezed (generator) direction r and measurement direction s.
struct ModeDirections {
  Direction r;
  Direction s;
};

}  // namespace splitsq
