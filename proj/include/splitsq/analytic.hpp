#pragma once

#include <array>
#include <vector>

#include "splitsq/moments.hpp"
#include "splitsq/params.hpp"

namespace splitsq {

// cos(x)^n with the sign kept; exp-log on |cos| above n = 64 so that large
// powers underflow to a signed zero instead of NaN.
double pow_cos(double x, long n);
// 1 - cos(x)^n, accurate for small x.
double one_minus_pow_cos(double x, long n);

struct FPair {
  double f_minus;
  double f_plus;
};
FPair f_n_pm(int n_total, double mu);

// cos^{2N-2}(μ/2)
double c_n(int n_total, double mu);

// Angle θ_s with s = (0, -sin θ_s, cos θ_s) the squeezed and
// r = (0, cos θ_s, sin θ_s) the anti-squeezed direction of the OAT state.
double squeezing_angle(int n_total, double mu);
ModeDirections optimal_directions(int n_total, double mu);
std::vector<ModeDirections> optimal_directions(int n_total, double mu, int modes);

// μ-dependent factors shared by every split squeezed moment.
struct OatCoefficients {
  int n_total = 0;
  double mean = 0;  // cos^{N-1}(μ/2)
  double c = 0;     // cos^{N-2}(μ)
  double s = 0;     // sin(μ/2)·cos^{N-2}(μ/2)

  static OatCoefficients of(const OatParams& oat);
};

// Split squeezed state with partition noise. `second` is the symmetrized
// ⟨{J_u,k, J_v,l}⟩/2, which for k ≠ l is the plain product moment.
double sss_pn_mean(const SplitConfig& cfg, const OatCoefficients& oc, const Direction& u, int k);
double sss_pn_second(const SplitConfig& cfg, const OatCoefficients& oc, const Direction& u, const Direction& v,
                     int k, int l);

// Fixed counts per mode, squeezed collectively.
double sss_npn_mean(const SplitConfig& cfg, const OatCoefficients& oc, const Direction& u, int k);
double sss_npn_second(const SplitConfig& cfg, const OatCoefficients& oc, const Direction& u,
                      const Direction& v, int k, int l);

MomentSet sss_pn_moments(const SplitConfig& cfg, const OatParams& oat, const std::vector<ModeDirections>& dirs);
MomentSet sss_npn_moments(const SplitConfig& cfg, const OatParams& oat, const std::vector<ModeDirections>& dirs);

// Dicke state |j,m⟩ split by a beam splitter.
struct FockMoments {
  double mean_u_k;     // ⟨J_u,k⟩
  double second_u_k;   // ⟨J_u,k²⟩
  double cross_uv_kl;  // ⟨J_u,k J_v,l⟩, symmetrized when k = l
};
FockMoments split_fock_moments(const SplitConfig& cfg, const DickeParams& dicke, const Direction& u,
                               const Direction& v, int k, int l);
MomentSet split_dicke_linear_moments(const SplitConfig& cfg, const DickeParams& dicke,
                                     const std::vector<ModeDirections>& dirs);

// Single-mode operator basis (Jx, Jy, Jz, {Jx,Jz}/2, {Jx,Jy}/2, {Jy,Jz}/2, Jx², Jy², Jz²).
enum DickeOp { kJx, kJy, kJz, kXZ, kXY, kYZ, kJx2, kJy2, kJz2, kDickeOpCount };

struct DickeTables {
  std::array<std::array<double, kDickeOpCount>, kDickeOpCount> cov{};
  // comm[a][b] = -i⟨[J_a, H_b]⟩ for a ∈ {x, y, z}
  std::array<std::array<double, kDickeOpCount>, 3> comm{};
};
DickeTables dicke_single_mode_tables(const DickeParams& dicke);

// Split Dicke state, per-mode families X_k = (Jx, Jy, {Jx,Jz}/2, {Jy,Jz}/2)
// (observable index 4k + a) and generators (Jx, Jy) (index 2k + b).
MomentSet split_dicke_nl_moments(const SplitConfig& cfg, const DickeParams& dicke);

}  // namespace splitsq
