#pragma once

#include <vector>

#include "splitsq/linalg.hpp"
#include "splitsq/metrology.hpp"
#include "splitsq/params.hpp"

// Direct constructors for the matrices whose structure is rank one plus
// diagonal. Each has a pipeline counterpart (moments -> metrology matrix)
// and the tests hold the two against each other.
namespace splitsq::closed_form {

// Split squeezed state, beam-splitter split with probabilities p.
RankOnePlusDiag xi2_sss_pn(int n_total, const std::vector<double>& p, double mu);
RankOnePlusDiag xi2_ms_sss_pn(int n_total, const std::vector<double>& p, double mu);
RankOnePlusDiag chi_inv2_sss_pn(int n_total, const std::vector<double>& p, double mu);
RankOnePlusDiag chi_inv2_ms_sss_pn(int n_total, const std::vector<double>& p, double mu);

// Split squeezed state with fixed counts N_k.
RankOnePlusDiag xi2_sss_npn(const std::vector<int>& counts, double mu);
RankOnePlusDiag xi2_ms_sss_npn(const std::vector<int>& counts, double mu);
RankOnePlusDiag chi_inv2_sss_npn(const std::vector<int>& counts, double mu);
RankOnePlusDiag chi_inv2_ms_sss_npn(const std::vector<int>& counts, double mu);

// Split Dicke state with linear generators in the xy plane.
RankOnePlusDiag chi_inv2_split_dicke(const DickeParams& dicke, const std::vector<double>& p);
RankOnePlusDiag chi_inv2_ms_split_dicke(const DickeParams& dicke, const std::vector<double>& p);

TaggedMatrix tag(MatrixKind kind, const RankOnePlusDiag& m);

// Eigenvalues with known closed forms.
double lambda_min_xi2(int n_total, double mu);  // PN and no-PN alike
double lambda_max_chi_inv2(int n_total, double mu);
double lambda_min_xi2_ms_pn_equal(int n_total, int modes, double mu);
double lambda_min_xi2_ms_npn_equal(int n_total, int modes, double mu);
double lambda_max_chi_inv2_ms_pn_equal(int n_total, int modes, double mu);
double lambda_max_chi_inv2_ms_npn_equal(int n_total, int modes, double mu);
double lambda_max_chi_inv2_split_dicke(const DickeParams& dicke);
double lambda_max_chi_inv2_ms_split_dicke_uniform(const DickeParams& dicke, int modes);
// Dicke moment-matrix value for the nonlinear family: 2(j(j+1) - m²).
double dicke_nl_moment(const DickeParams& dicke);

// Large-N asymptote (3^{2/3}/2)·N^{-2/3} of the optimal Wineland coefficient.
double optimal_xi2_asymptote(double n_total);

}  // namespace splitsq::closed_form
