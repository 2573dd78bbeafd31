#include "splitsq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "splitsq/errors.hpp"

namespace splitsq::oracle {

namespace {

constexpr Complex kI{0.0, 1.0};

std::uint64_t exact_factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

// n! / Π k_i!, exact below 20 and via lgamma above.
double multinomial(int n, const std::vector<int>& parts) {
  if (n < 20) {
    std::uint64_t out = exact_factorial(n);
    for (int k : parts) out /= exact_factorial(k);
    return static_cast<double>(out);
  }
  double log = std::lgamma(n + 1.0);
  for (int k : parts) log -= std::lgamma(k + 1.0);
  return std::exp(log);
}

double binomial(int n, int k) { return multinomial(n, {k, n - k}); }

std::vector<Complex> apply(const FockBasis& basis, const LocalOp& op, const std::vector<Complex>& in) {
  const Complex alpha = 0.5 * (op.u[0] - kI * op.u[1]);
  const Complex beta = 0.5 * (op.u[0] + kI * op.u[1]);
  const Complex gamma = op.u[2];
  const auto& target = basis.raise_target(op.mode);
  const auto& factor = basis.raise_factor(op.mode);
  std::vector<Complex> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (gamma != 0.0) {
      const double jz = 0.5 * (basis.occupation(i, 2 * op.mode) - basis.occupation(i, 2 * op.mode + 1));
      out[i] += gamma * jz * in[i];
    }
    const std::int64_t t = target[i];
    if (t < 0) continue;
    out[t] += alpha * factor[i] * in[i];
    out[i] += beta * factor[i] * in[t];
  }
  return out;
}

Complex inner(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm_of(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

std::array<Complex, 3> as_complex(const Direction& u) { return {u.x(), u.y(), u.z()}; }

void check_probabilities(const std::vector<double>& p) { SplitConfig::probabilistic(1, p); }

}  // namespace

std::size_t FockBasis::count(int n_total, int modes) {
  // C(N + 2M - 1, 2M - 1), saturating.
  const int slots = 2 * modes;
  long double c = 1.0L;
  for (int i = 1; i < slots; ++i) {
    c = c * (n_total + i) / i;
    if (c > 1e18L) return static_cast<std::size_t>(-1);
  }
  return static_cast<std::size_t>(std::llround(c));
}

FockBasis::FockBasis(int n_total, int modes) : n_total_(n_total), modes_(modes) {
  if (n_total < 0 || modes < 1) throw DomainError("FockBasis: need N >= 0 and at least one mode");
  const std::size_t n = count(n_total, modes);
  if (n > kMaxConfigs) throw ScaleExceeded("FockBasis: configuration count exceeds the oracle cap");
  const int slots = 2 * modes;
  occ_.reserve(n * slots);

  std::vector<int> cur(slots, 0);
  auto rec = [&](auto&& self, int slot, int left) -> void {
    if (slot == slots - 1) {
      cur[slot] = left;
      for (int v : cur) occ_.push_back(static_cast<std::int16_t>(v));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[slot] = v;
      self(self, slot + 1, left - v);
    }
  };
  rec(rec, 0, n_total);
  size_ = occ_.size() / slots;

  raise_target_.assign(modes, std::vector<std::int64_t>(size_, -1));
  raise_factor_.assign(modes, std::vector<double>(size_, 0.0));
  std::vector<int> cfg(slots);
  for (std::size_t i = 0; i < size_; ++i) {
    for (int s = 0; s < slots; ++s) cfg[s] = occupation(i, s);
    for (int k = 0; k < modes; ++k) {
      const int up = cfg[2 * k], down = cfg[2 * k + 1];
      if (down == 0) continue;
      cfg[2 * k] = up + 1;
      cfg[2 * k + 1] = down - 1;
      const auto t = index_of(cfg);
      cfg[2 * k] = up;
      cfg[2 * k + 1] = down;
      raise_target_[k][i] = static_cast<std::int64_t>(*t);
      raise_factor_[k][i] = std::sqrt(static_cast<double>(up + 1) * down);
    }
  }
}

std::vector<int> FockBasis::config(std::size_t index) const {
  std::vector<int> c(2 * modes_);
  for (int s = 0; s < 2 * modes_; ++s) c[s] = occupation(index, s);
  return c;
}

std::optional<std::size_t> FockBasis::index_of(const std::vector<int>& cfg) const {
  const int slots = 2 * modes_;
  if (static_cast<int>(cfg.size()) != slots) return std::nullopt;
  auto less = [&](std::size_t i, const std::vector<int>& c) {
    for (int s = 0; s < slots; ++s) {
      const int a = occupation(i, s);
      if (a != c[s]) return a < c[s];
    }
    return false;
  };
  std::size_t lo = 0, hi = size_;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (less(mid, cfg)) lo = mid + 1; else hi = mid;
  }
  if (lo < size_ && !less(lo, cfg)) {
    for (int s = 0; s < slots; ++s)
      if (occupation(lo, s) != cfg[s]) return std::nullopt;
    return lo;
  }
  return std::nullopt;
}

double FockState::norm() const { return norm_of(amplitudes); }

double ProductDickeState::norm() const { return norm_of(amplitudes); }

FockState ProductDickeState::to_fock() const {
  const int modes = static_cast<int>(counts.size());
  const int n = std::accumulate(counts.begin(), counts.end(), 0);
  auto basis = std::make_shared<const FockBasis>(n, modes);
  FockState out{basis, std::vector<Complex>(basis->size())};
  std::vector<int> idx(modes, 0), cfg(2 * modes);
  for (std::size_t flat = 0; flat < amplitudes.size(); ++flat) {
    std::size_t rest = flat;
    for (int k = modes - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(rest % (counts[k] + 1));
      rest /= counts[k] + 1;
    }
    for (int k = 0; k < modes; ++k) {
      cfg[2 * k] = idx[k];
      cfg[2 * k + 1] = counts[k] - idx[k];
    }
    out.amplitudes[*basis->index_of(cfg)] = amplitudes[flat];
  }
  return out;
}

OpExpr OpExpr::identity() {
  OpExpr e;
  e.terms_.push_back({1.0, {}});
  return e;
}

OpExpr OpExpr::spin(int mode, const std::array<Complex, 3>& u) {
  if (mode < 0) throw DomainError("OpExpr: negative mode index");
  OpExpr e;
  e.terms_.push_back({1.0, {LocalOp{mode, u}}});
  return e;
}

OpExpr OpExpr::spin(int mode, const Direction& u) { return spin(mode, as_complex(u)); }

int OpExpr::degree() const {
  std::size_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.factors.size());
  return static_cast<int>(d);
}

OpExpr& OpExpr::operator+=(const OpExpr& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

OpExpr& OpExpr::operator-=(const OpExpr& o) { return *this += Complex(-1.0) * o; }

OpExpr operator*(const OpExpr& a, const OpExpr& b) {
  OpExpr out;
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) {
      OpTerm t{ta.coef * tb.coef, ta.factors};
      t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
      out.terms_.push_back(std::move(t));
    }
  return out;
}

OpExpr operator*(Complex s, OpExpr a) {
  for (auto& t : a.terms_) t.coef *= s;
  return a;
}

OpExpr commutator(const OpExpr& a, const OpExpr& b) { return a * b - b * a; }

OpExpr anticommutator_half(const OpExpr& a, const OpExpr& b) { return Complex(0.5) * (a * b + b * a); }

Complex expect(const FockState& state, const OpExpr& expr) {
  if (expr.degree() > OpExpr::kMaxDegree) throw DegreeExceeded("expect: operator degree above 4");
  const auto& psi = state.amplitudes;
  Complex total = 0.0;
  for (const auto& term : expr.terms()) {
    std::vector<Complex> phi = psi;
    for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
      if (it->mode >= state.modes()) throw DomainError("expect: operator acts on a missing mode");
      phi = apply(*state.basis, *it, phi);
    }
    total += term.coef * inner(psi, phi);
  }
  return total;
}

Complex expect(const ProductDickeState& state, const OpExpr& expr) { return expect(state.to_fock(), expr); }

std::vector<Complex> expect_many_serial(const FockState& state, const std::vector<OpExpr>& exprs) {
  std::vector<Complex> out(exprs.size());
  for (std::size_t i = 0; i < exprs.size(); ++i) out[i] = expect(state, exprs[i]);
  return out;
}

std::vector<Complex> expect_many(const FockState& state, const std::vector<OpExpr>& exprs) {
  for (const auto& e : exprs)
    if (e.degree() > OpExpr::kMaxDegree) throw DegreeExceeded("expect: operator degree above 4");
  std::vector<Complex> out(exprs.size());
  const long n = static_cast<long>(exprs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) out[i] = expect(state, exprs[i]);
  return out;
}

DickeVector oat_state(int n_total, double mu) {
  if (n_total < 1) throw DomainError("oat_state: N must be positive");
  if (n_total > 64) throw ScaleExceeded("oat_state: N above the oracle cap of 64");
  DickeVector out{n_total, std::vector<Complex>(n_total + 1)};
  const double norm = std::pow(2.0, -0.5 * n_total);
  for (int up = 0; up <= n_total; ++up) {
    const double m = up - 0.5 * n_total;
    out.amplitudes[up] = std::sqrt(binomial(n_total, up)) * norm * std::exp(-kI * (0.5 * mu * m * m));
  }
  return out;
}

DickeVector dicke_vector(const DickeParams& dicke) {
  DickeVector out{dicke.n_total(), std::vector<Complex>(dicke.n_total() + 1)};
  out.amplitudes[dicke.n_up()] = 1.0;
  return out;
}

FockState split_state(const DickeVector& state, const std::vector<double>& p) {
  check_probabilities(p);
  const int modes = static_cast<int>(p.size());
  const int n = state.n_total;
  if (static_cast<int>(state.amplitudes.size()) != n + 1) throw DimensionMismatch("split_state: bad Dicke vector");
  auto basis = std::make_shared<const FockBasis>(n, modes);
  FockState out{basis, std::vector<Complex>(basis->size())};
  std::vector<int> ups(modes), downs(modes);
  for (std::size_t i = 0; i < basis->size(); ++i) {
    int na = 0, nb = 0;
    double weight = 1.0;
    for (int k = 0; k < modes; ++k) {
      ups[k] = basis->occupation(i, 2 * k);
      downs[k] = basis->occupation(i, 2 * k + 1);
      na += ups[k];
      nb += downs[k];
      weight *= std::pow(p[k], 0.5 * (ups[k] + downs[k]));
    }
    const Complex a = state.amplitudes[na];
    if (a == 0.0) continue;
    out.amplitudes[i] = a * std::sqrt(multinomial(na, ups) * multinomial(nb, downs)) * weight;
  }
  return out;
}

FockState split_dicke_state(const DickeParams& dicke, const std::vector<double>& p) {
  return split_state(dicke_vector(dicke), p);
}

ProductDickeState npn_state(const SplitConfig& cfg, double mu) {
  const auto& counts = cfg.counts();
  std::size_t dim = 1;
  for (int nk : counts) {
    dim *= static_cast<std::size_t>(nk + 1);
    if (dim > FockBasis::kMaxConfigs) throw ScaleExceeded("npn_state: product space exceeds the oracle cap");
  }
  const int modes = static_cast<int>(counts.size());
  ProductDickeState out{counts, std::vector<Complex>(dim)};
  std::vector<int> idx(modes);
  for (std::size_t flat = 0; flat < dim; ++flat) {
    std::size_t rest = flat;
    for (int k = modes - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(rest % (counts[k] + 1));
      rest /= counts[k] + 1;
    }
    double amp = 1.0, m_total = 0.0;
    for (int k = 0; k < modes; ++k) {
      amp *= std::sqrt(binomial(counts[k], idx[k])) * std::pow(2.0, -0.5 * counts[k]);
      m_total += idx[k] - 0.5 * counts[k];
    }
    out.amplitudes[flat] = amp * std::exp(-kI * (0.5 * mu * m_total * m_total));
  }
  return out;
}

FockState kproducible_reference(const std::vector<Block>& blocks) {
  int modes = 0, n = 0;
  for (const auto& b : blocks) {
    if (static_cast<int>(b.modes.size()) != b.state.modes())
      throw DimensionMismatch("kproducible_reference: block mode list does not match its state");
    modes += b.state.modes();
    n += b.state.n_total();
  }
  std::vector<int> seen(modes, 0);
  for (const auto& b : blocks)
    for (int k : b.modes) {
      if (k < 0 || k >= modes || seen[k]++) throw DomainError("kproducible_reference: blocks must partition the modes");
    }

  auto basis = std::make_shared<const FockBasis>(n, modes);
  struct Partial {
    std::vector<int> cfg;
    Complex amp;
  };
  std::vector<Partial> partial{{std::vector<int>(2 * modes, 0), 1.0}};
  for (const auto& b : blocks) {
    std::vector<Partial> next;
    for (const auto& pt : partial)
      for (std::size_t i = 0; i < b.state.basis->size(); ++i) {
        const Complex a = b.state.amplitudes[i];
        if (a == 0.0) continue;
        Partial q = pt;
        for (std::size_t local = 0; local < b.modes.size(); ++local) {
          q.cfg[2 * b.modes[local]] = b.state.basis->occupation(i, 2 * local);
          q.cfg[2 * b.modes[local] + 1] = b.state.basis->occupation(i, 2 * local + 1);
        }
        q.amp *= a;
        next.push_back(std::move(q));
      }
    partial = std::move(next);
  }
  FockState out{basis, std::vector<Complex>(basis->size())};
  for (const auto& pt : partial) out.amplitudes[*basis->index_of(pt.cfg)] += pt.amp;
  return out;
}

double mean(const FockState& state, int k, const Direction& u) {
  return expect(state, OpExpr::spin(k, u)).real();
}

double sym_second(const FockState& state, int k, const Direction& u, int l, const Direction& v) {
  return expect(state, anticommutator_half(OpExpr::spin(k, u), OpExpr::spin(l, v))).real();
}

namespace {

// Fills covariance, generator covariance and commutator tables from
// operator lists, evaluating all expectations in one parallel batch.
MomentSet moments_from_families(const FockState& state, const std::vector<OpExpr>& gens,
                                const std::vector<OpExpr>& obs) {
  const std::size_t g = gens.size(), x = obs.size();
  std::vector<OpExpr> batch;
  for (const auto& o : obs) batch.push_back(o);
  for (const auto& r : gens) batch.push_back(r);
  for (std::size_t a = 0; a < x; ++a)
    for (std::size_t b = a; b < x; ++b) batch.push_back(anticommutator_half(obs[a], obs[b]));
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = a; b < g; ++b) batch.push_back(anticommutator_half(gens[a], gens[b]));
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < x; ++b) batch.push_back(commutator(gens[a], obs[b]));
  for (int k = 0; k < state.modes(); ++k) batch.push_back(OpExpr::jx(k));

  const auto values = expect_many(state, batch);
  std::size_t at = 0;
  std::vector<double> mo(x), mg(g);
  for (auto& v : mo) v = values[at++].real();
  for (auto& v : mg) v = values[at++].real();

  MomentSet ms;
  ms.source = MomentSource::oracle;
  ms.cov_ss = SymMatrix(x);
  ms.cov_rr = SymMatrix(g);
  ms.comm = Matrix(g, x);
  for (std::size_t a = 0; a < x; ++a)
    for (std::size_t b = a; b < x; ++b) ms.cov_ss.set(a, b, values[at++].real() - mo[a] * mo[b]);
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = a; b < g; ++b) ms.cov_rr.set(a, b, values[at++].real() - mg[a] * mg[b]);
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < x; ++b) ms.comm(a, b) = (-kI * values[at++]).real();
  for (int k = 0; k < state.modes(); ++k) ms.mean_x.push_back(values[at++].real());
  return ms;
}

}  // namespace

MomentSet linear_moments(const FockState& state, const std::vector<ModeDirections>& dirs) {
  if (static_cast<int>(dirs.size()) != state.modes()) throw DimensionMismatch("linear_moments: one pair per mode");
  std::vector<OpExpr> gens, obs;
  for (int k = 0; k < state.modes(); ++k) {
    gens.push_back(OpExpr::spin(k, dirs[k].r));
    obs.push_back(OpExpr::spin(k, dirs[k].s));
  }
  auto ms = moments_from_families(state, gens, obs);
  for (int k = 0; k < state.modes(); ++k) {
    ms.generator_labels.push_back("J_r," + std::to_string(k));
    ms.observable_labels.push_back("J_s," + std::to_string(k));
  }
  return ms;
}

MomentSet nl_moments(const FockState& state) {
  std::vector<OpExpr> gens, obs;
  for (int k = 0; k < state.modes(); ++k) {
    gens.push_back(OpExpr::jx(k));
    gens.push_back(OpExpr::jy(k));
    obs.push_back(OpExpr::jx(k));
    obs.push_back(OpExpr::jy(k));
    obs.push_back(anticommutator_half(OpExpr::jx(k), OpExpr::jz(k)));
    obs.push_back(anticommutator_half(OpExpr::jy(k), OpExpr::jz(k)));
  }
  auto ms = moments_from_families(state, gens, obs);
  ms.order = MeasurementOrder::nonlinear;
  for (int k = 0; k < state.modes(); ++k) {
    const std::string tag = std::to_string(k);
    for (const char* g : {"J_x,", "J_y,"}) ms.generator_labels.push_back(g + tag);
    for (const char* o : {"J_x,", "J_y,", "{J_x,J_z}/2,", "{J_y,J_z}/2,"}) ms.observable_labels.push_back(o + tag);
  }
  return ms;
}

void write_dump(std::ostream& out, const FockState& state) {
  char buf[64];
  for (std::size_t i = 0; i < state.basis->size(); ++i) {
    const Complex a = state.amplitudes[i];
    if (a == 0.0) continue;
    out << '(';
    for (int s = 0; s < 2 * state.modes(); ++s) out << (s ? "," : "") << state.basis->occupation(i, s);
    out << ')';
    std::snprintf(buf, sizeof buf, "\t%.17g", a.real());
    out << buf;
    std::snprintf(buf, sizeof buf, "\t%.17g", a.imag());
    out << buf << '\n';
  }
}

FockState read_dump(std::istream& in, int n_total, int modes) {
  auto basis = std::make_shared<const FockBasis>(n_total, modes);
  FockState out{basis, std::vector<Complex>(basis->size())};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto close = line.find(')');
    if (line.front() != '(' || close == std::string::npos) throw DomainError("read_dump: malformed line: " + line);
    std::vector<int> cfg;
    std::stringstream tuple(line.substr(1, close - 1));
    std::string cell;
    while (std::getline(tuple, cell, ',')) cfg.push_back(std::stoi(cell));
    std::stringstream rest(line.substr(close + 1));
    double re = 0, im = 0;
    if (!(rest >> re >> im)) throw DomainError("read_dump: missing amplitude: " + line);
    const auto idx = basis->index_of(cfg);
    if (!idx) throw DomainError("read_dump: configuration not in basis: " + line);
    out.amplitudes[*idx] = {re, im};
  }
  return out;
}

}  // namespace splitsq::oracle
