#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "splitsq/moments.hpp"
#include "splitsq/params.hpp"

// Brute-force reference simulation in the occupation basis. Each mode k
// holds two bosonic levels, ↑ (a_k) and ↓ (b_k), with
//   J_x = (a†b + b†a)/2,  J_y = (a†b - b†a)/(2i),  J_z = (a†a - b†b)/2.
namespace splitsq::oracle {

using Complex = std::complex<double>;

// All occupation configurations (n↑1, n↓1, ..., n↑M, n↓M) with total N,
// in lexicographic order.
class FockBasis {
 public:
  static constexpr std::size_t kMaxConfigs = 10'000'000;

  FockBasis(int n_total, int modes);
  static std::size_t count(int n_total, int modes);

  int n_total() const { return n_total_; }
  int modes() const { return modes_; }
  std::size_t size() const { return size_; }
  int occupation(std::size_t index, int slot) const { return occ_[index * 2 * modes_ + slot]; }
  std::vector<int> config(std::size_t index) const;
  std::optional<std::size_t> index_of(const std::vector<int>& config) const;

  // J+_k = a_k† b_k: target index (or -1) and matrix element per config.
  const std::vector<std::int64_t>& raise_target(int mode) const { return raise_target_[mode]; }
  const std::vector<double>& raise_factor(int mode) const { return raise_factor_[mode]; }

 private:
  int n_total_, modes_;
  std::size_t size_ = 0;
  std::vector<std::int16_t> occ_;
  std::vector<std::vector<std::int64_t>> raise_target_;
  std::vector<std::vector<double>> raise_factor_;
};

struct FockState {
  std::shared_ptr<const FockBasis> basis;
  std::vector<Complex> amplitudes;

  int n_total() const { return basis->n_total(); }
  int modes() const { return basis->modes(); }
  double norm() const;
};

// Amplitudes over the Dicke basis of N spins, indexed by n↑ = j + m.
struct DickeVector {
  int n_total;
  std::vector<Complex> amplitudes;
};

// Fixed-count product space: one (N_k + 1)-level Dicke ladder per mode,
// flattened row-major over (n↑_1, ..., n↑_M).
struct ProductDickeState {
  std::vector<int> counts;
  std::vector<Complex> amplitudes;

  double norm() const;
  FockState to_fock() const;
};

// Σ_a u_a J_a on one mode, u complex so that J± can be written directly.
struct LocalOp {
  int mode;
  std::array<Complex, 3> u;
};

struct OpTerm {
  Complex coef;
  std::vector<LocalOp> factors;  // product, leftmost applied last
};

class OpExpr {
 public:
  static constexpr int kMaxDegree = 4;

  static OpExpr identity();
  static OpExpr spin(int mode, const std::array<Complex, 3>& u);
  static OpExpr spin(int mode, const Direction& u);
  static OpExpr jx(int mode) { return spin(mode, Direction::x_axis()); }
  static OpExpr jy(int mode) { return spin(mode, Direction::y_axis()); }
  static OpExpr jz(int mode) { return spin(mode, Direction::z_axis()); }

  const std::vector<OpTerm>& terms() const { return terms_; }
  int degree() const;

  OpExpr& operator+=(const OpExpr& o);
  OpExpr& operator-=(const OpExpr& o);
  friend OpExpr operator+(OpExpr a, const OpExpr& b) { return a += b; }
  friend OpExpr operator-(OpExpr a, const OpExpr& b) { return a -= b; }
  friend OpExpr operator*(const OpExpr& a, const OpExpr& b);
  friend OpExpr operator*(Complex s, OpExpr a);

 private:
  std::vector<OpTerm> terms_;
};

OpExpr commutator(const OpExpr& a, const OpExpr& b);
OpExpr anticommutator_half(const OpExpr& a, const OpExpr& b);  // {A,B}/2

// Throws DegreeExceeded for expressions above degree 4.
Complex expect(const FockState& state, const OpExpr& expr);
Complex expect(const ProductDickeState& state, const OpExpr& expr);

// Independent expressions evaluated in parallel; the serial version is the
// reference used by the tests and the benchmark.
std::vector<Complex> expect_many(const FockState& state, const std::vector<OpExpr>& exprs);
std::vector<Complex> expect_many_serial(const FockState& state, const std::vector<OpExpr>& exprs);

// |Ψ(μ)⟩ = exp(-iμJ_z²/2)|N/2⟩_x; N ≤ 64.
DickeVector oat_state(int n_total, double mu);
DickeVector dicke_vector(const DickeParams& dicke);

// Beam splitter a† → Σ_k √p_k a_k†, identical for both levels.
FockState split_state(const DickeVector& state, const std::vector<double>& p);
FockState split_dicke_state(const DickeParams& dicke, const std::vector<double>& p);
ProductDickeState npn_state(const SplitConfig& cfg, double mu);

struct Block {
  std::vector<int> modes;  // global mode indices covered by this block
  FockState state;         // over modes.size() local modes
};
FockState kproducible_reference(const std::vector<Block>& blocks);

// Oracle moment sets with the same layout as the analytic builders.
MomentSet linear_moments(const FockState& state, const std::vector<ModeDirections>& dirs);
MomentSet nl_moments(const FockState& state);

// ⟨{J_u,k, J_v,l}⟩/2 and ⟨J_u,k⟩ for quick spot checks.
double mean(const FockState& state, int k, const Direction& u);
double sym_second(const FockState& state, int k, const Direction& u, int l, const Direction& v);

// One "(n↑1,n↓1,...)<TAB>re<TAB>im" line per nonzero amplitude.
void write_dump(std::ostream& out, const FockState& state);
FockState read_dump(std::istream& in, int n_total, int modes);

}  // namespace splitsq::oracle
