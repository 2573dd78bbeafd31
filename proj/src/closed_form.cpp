#include "splitsq/closed_form.hpp"

#include <cmath>
#include <numeric>

#include "splitsq/analytic.hpp"
#include "splitsq/errors.hpp"

namespace splitsq::closed_form {

namespace {

std::vector<double> sqrt_all(const std::vector<double>& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::sqrt(x[i]);
  return out;
}

int total(const std::vector<int>& counts) { return std::accumulate(counts.begin(), counts.end(), 0); }

void check_p(const std::vector<double>& p) { SplitConfig::probabilistic(1, p); }
void check_counts(const std::vector<int>& c) { SplitConfig::deterministic(c); }

}  // namespace

RankOnePlusDiag xi2_sss_pn(int n, const std::vector<double>& p, double mu) {
  check_p(p);
  const auto f = f_n_pm(n, mu);
  const double c = c_n(n, mu);
  return {(n - 1) * f.f_minus / c, sqrt_all(p), std::vector<double>(p.size(), 1.0 / c)};
}

RankOnePlusDiag xi2_ms_sss_pn(int n, const std::vector<double>& p, double mu) {
  check_p(p);
  const auto f = f_n_pm(n, mu);
  const double c = c_n(n, mu);
  double sum_p2 = 0.0;
  for (double x : p) sum_p2 += x * x;
  const double a_n = 1.0 + (n - 1) * f.f_plus * sum_p2;
  RankOnePlusDiag out{a_n * (n - 1) * f.f_minus / c, {}, {}};
  for (double pk : p) {
    const double ak = 1.0 + pk * (n - 1) * f.f_plus;
    out.vector.push_back(std::sqrt(pk * ak / a_n));
    out.diagonal.push_back(ak / c);
  }
  return out;
}

RankOnePlusDiag chi_inv2_sss_pn(int n, const std::vector<double>& p, double mu) {
  check_p(p);
  const auto f = f_n_pm(n, mu);
  return {(n - 1) * f.f_plus, sqrt_all(p), std::vector<double>(p.size(), 1.0)};
}

RankOnePlusDiag chi_inv2_ms_sss_pn(int n, const std::vector<double>& p, double mu) {
  check_p(p);
  const auto f = f_n_pm(n, mu);
  RankOnePlusDiag out{(n - 1) * f.f_plus, {}, {}};
  for (double pk : p) {
    const double ak = 1.0 + pk * (n - 1) * f.f_plus;
    out.vector.push_back(std::sqrt(pk / ak));
    out.diagonal.push_back(1.0 / ak);
  }
  return out;
}

RankOnePlusDiag xi2_sss_npn(const std::vector<int>& counts, double mu) {
  check_counts(counts);
  const int n = total(counts);
  const auto f = f_n_pm(n, mu);
  const double c = c_n(n, mu);
  RankOnePlusDiag out{n * f.f_minus / c, {}, std::vector<double>(counts.size(), (1.0 - f.f_minus) / c)};
  for (int nk : counts) out.vector.push_back(std::sqrt(static_cast<double>(nk) / n));
  return out;
}

RankOnePlusDiag xi2_ms_sss_npn(const std::vector<int>& counts, double mu) {
  check_counts(counts);
  const int n = total(counts);
  const auto f = f_n_pm(n, mu);
  const double c = c_n(n, mu);
  double a = n;
  for (int nk : counts) a += f.f_plus * nk * (nk - 1.0);
  RankOnePlusDiag out{a * f.f_minus / c, {}, {}};
  for (int nk : counts) {
    const double bk = 1.0 + (nk - 1.0) * f.f_plus;
    out.vector.push_back(std::sqrt(nk * bk / a));
    out.diagonal.push_back((1.0 - f.f_minus) * bk / c);
  }
  return out;
}

RankOnePlusDiag chi_inv2_sss_npn(const std::vector<int>& counts, double mu) {
  check_counts(counts);
  const int n = total(counts);
  const auto f = f_n_pm(n, mu);
  RankOnePlusDiag out{n * f.f_plus, {}, std::vector<double>(counts.size(), 1.0 - f.f_plus)};
  for (int nk : counts) out.vector.push_back(std::sqrt(static_cast<double>(nk) / n));
  return out;
}

RankOnePlusDiag chi_inv2_ms_sss_npn(const std::vector<int>& counts, double mu) {
  check_counts(counts);
  const int n = total(counts);
  const auto f = f_n_pm(n, mu);
  RankOnePlusDiag out{f.f_plus, {}, {}};
  for (int nk : counts) {
    const double bk = 1.0 + (nk - 1.0) * f.f_plus;
    out.vector.push_back(std::sqrt(nk / bk));
    out.diagonal.push_back((1.0 - f.f_plus) / bk);
  }
  return out;
}

RankOnePlusDiag chi_inv2_split_dicke(const DickeParams& d, const std::vector<double>& p) {
  check_p(p);
  const double j = d.j(), m = d.m();
  return {(j * j - m * m) / j, sqrt_all(p), std::vector<double>(p.size(), 1.0)};
}

RankOnePlusDiag chi_inv2_ms_split_dicke(const DickeParams& d, const std::vector<double>& p) {
  check_p(p);
  const double j = d.j(), m = d.m(), g = j * j - m * m;
  RankOnePlusDiag out{g, {}, {}};
  for (double pk : p) {
    const double den = g * pk + j;
    out.vector.push_back(std::sqrt(pk / den));
    out.diagonal.push_back(j / den);
  }
  return out;
}

TaggedMatrix tag(MatrixKind kind, const RankOnePlusDiag& m) {
  return {kind, Provenance::closed_form, m.reconstruct()};
}

double lambda_min_xi2(int n, double mu) {
  const auto f = f_n_pm(n, mu);
  return ((n - 1) * f.f_minus + 1.0) / c_n(n, mu);
}

double lambda_max_chi_inv2(int n, double mu) { return (n - 1) * f_n_pm(n, mu).f_plus + 1.0; }

double lambda_min_xi2_ms_pn_equal(int n, int modes, double mu) {
  return lambda_min_xi2(n, mu) * (1.0 + (n - 1) * f_n_pm(n, mu).f_plus / modes);
}

double lambda_min_xi2_ms_npn_equal(int n, int modes, double mu) {
  return lambda_min_xi2(n, mu) * (1.0 + static_cast<double>(n - modes) * f_n_pm(n, mu).f_plus / modes);
}

double lambda_max_chi_inv2_ms_pn_equal(int n, int modes, double mu) {
  const double g = (n - 1) * f_n_pm(n, mu).f_plus;
  return modes * (g + 1.0) / (g + modes);
}

double lambda_max_chi_inv2_ms_npn_equal(int n, int modes, double mu) {
  const double fp = f_n_pm(n, mu).f_plus;
  return modes * (fp * (n - 1) + 1.0) / (static_cast<double>(n - modes) * fp + modes);
}

double lambda_max_chi_inv2_split_dicke(const DickeParams& d) {
  const double j = d.j(), m = d.m();
  return (j * (j + 1) - m * m) / j;
}

double lambda_max_chi_inv2_ms_split_dicke_uniform(const DickeParams& d, int modes) {
  const double j = d.j(), m = d.m();
  return (j * (j + 1) - m * m) / ((j * j - m * m) / modes + j);
}

double dicke_nl_moment(const DickeParams& d) {
  const double j = d.j(), m = d.m();
  return 2.0 * (j * (j + 1) - m * m);
}

double optimal_xi2_asymptote(double n) { return std::pow(3.0, 2.0 / 3.0) / 2.0 * std::pow(n, -2.0 / 3.0); }

}  // namespace splitsq::closed_form
