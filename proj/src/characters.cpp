#include "deltacrys/characters.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "deltacrys/error.hpp"

namespace deltacrys {

std::string to_string(KernelOrigin o) {
  switch (o) {
    case KernelOrigin::IotaStar: return "iota*";
    case KernelOrigin::PhiStar: return "iota*phi*";
    case KernelOrigin::Fundamental: return "Psi1";
    case KernelOrigin::LateralImage: return "f*";
  }
  return "?";
}

namespace {

std::vector<std::string> xvars(int first, int last) {
  std::vector<std::string> v;
  for (int i = first; i <= last; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

PadicRational unit_one(std::uint64_t p, int prec) { return PadicRational::from_int(p, prec, 1); }

// x0 = 0, remaining variables renamed x1..xn.
TruncatedSeries iota(const TruncatedSeries& s) {
  const std::size_t n = s.nvars() - 1;
  std::vector<std::size_t> placement(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) placement[i] = i - 1;
  return s.substitute_zero(0).embed(xvars(1, static_cast<int>(n)), placement);
}

// A series in x_a..x_b viewed in x_a..x_c with c >= b.
TruncatedSeries widen(const TruncatedSeries& s, int first, int last) {
  if (static_cast<int>(s.nvars()) == last - first + 1) return s;
  std::vector<std::size_t> placement(s.nvars());
  for (std::size_t i = 0; i < s.nvars(); ++i) placement[i] = i;
  return s.embed(xvars(first, last), placement);
}

// Witt coordinates as series in x_first..x_last.
std::vector<TruncatedSeries> coordinate_series(const FormalGroupLaw& F, int first, int last, int M) {
  const auto vars = xvars(first, last);
  std::vector<TruncatedSeries> v;
  for (std::size_t i = 0; i < vars.size(); ++i)
    v.push_back(TruncatedSeries::variable(F.ctx.p, vars, M, F.working_precision, i));
  return v;
}

// Precompose a kernel series in x1..xk with the lateral Frobenius N^{k+1} -> N^k.
TruncatedSeries f_star(const TruncatedSeries& s, const FormalGroupLaw& F, int M) {
  const int k = static_cast<int>(s.nvars());
  const auto u = witt_frobenius_series(coordinate_series(F, 1, k + 1, M));
  return s.truncated(M).compose(u);
}

// Precompose a series in x0..xk with phi: J^{k+1} -> J^k, then set x0 = 0.
TruncatedSeries iota_phi_star(const TruncatedSeries& s, const FormalGroupLaw& F, int M) {
  const int k = static_cast<int>(s.nvars()) - 1;
  auto a = coordinate_series(F, 1, k + 1, M);
  a.insert(a.begin(), TruncatedSeries::zero_like(a[0]));
  return s.truncated(M).compose(witt_frobenius_series(a));
}

// Precompose a series in x0..xk with phi, staying on J^{k+1}.
TruncatedSeries phi_star(const TruncatedSeries& s, const FormalGroupLaw& F, int M) {
  const int k = static_cast<int>(s.nvars()) - 1;
  return s.truncated(M).compose(witt_frobenius_series(coordinate_series(F, 0, k + 1, M)));
}

// iota* L_m in x1..x_level.
TruncatedSeries iota_L(const FormalGroupLaw& F, int m, int level, int M) {
  const auto w = ghost_series(F.ctx.p, xvars(0, level), M, F.working_precision, 0, m);
  return iota(F.log.truncated(M).compose({w}));
}

// sum_i c_i iota* L_{i+shift} in x1..x_level.
TruncatedSeries kernel_of(const FormalGroupLaw& F, const CVector& c, int shift, int level, int M) {
  TruncatedSeries acc(F.ctx.p, xvars(1, level), M, F.working_precision);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) acc += iota_L(F, static_cast<int>(i) + shift, level, M).scaled(c[i]);
  return acc;
}

CVector shifted_cvector(const CVector& c) {
  CVector s;
  s.push_back(PadicRational::exact_zero(c.empty() ? 3 : c[0].p()));
  s.insert(s.end(), c.begin(), c.end());
  return s;
}

CVector padded(CVector c, std::size_t len) {
  const std::uint64_t p = c.at(0).p();
  while (c.size() < len) c.push_back(PadicRational::exact_zero(p));
  return c;
}

// Coefficient vectors of series sharing variables, over the union of monomials.
std::vector<CVector> tabulate(const std::vector<TruncatedSeries>& series) {
  std::map<std::uint64_t, std::size_t> index;
  for (const auto& s : series)
    for (const auto& t : s.terms()) index.emplace(t.key, 0);
  std::size_t k = 0;
  for (auto& [key, i] : index) i = k++;
  std::vector<CVector> out;
  for (const auto& s : series) {
    const std::uint64_t p = s.p();
    CVector v(index.size(), PadicRational::exact_zero(p));
    for (const auto& t : s.terms()) v[index[t.key]] = t.c;
    out.push_back(std::move(v));
  }
  return out;
}

struct SmithResult {
  std::vector<int> d;  // divisor valuation per transformed column
  PMatrix V;           // column transform: original c = V c'
  int floor = PadicRational::kExact;  // least absolute precision of an undecided entry
};

// Full-pivot elimination on valuations with column operations tracked in V,
// so that the row module becomes the direct sum of p^{d_j} Z_p e_j.
SmithResult smith_columns(std::vector<CVector> rows, std::size_t ncol, std::uint64_t p, int prec) {
  SmithResult res;
  res.d.assign(ncol, PadicRational::kExact);
  res.V.assign(ncol, CVector(ncol, PadicRational::exact_zero(p)));
  for (std::size_t i = 0; i < ncol; ++i) res.V[i][i] = unit_one(p, prec);
  for (std::size_t s = 0; s < ncol; ++s) {
    int best = PadicRational::kExact;
    std::size_t bi = 0, bj = 0;
    bool found = false;
    int undecided = PadicRational::kExact;
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = s; j < ncol; ++j) {
        const auto& x = rows[i][j];
        if (x.is_zero()) {
          if (!x.is_exact_zero()) undecided = std::min(undecided, x.absolute_precision());
          continue;
        }
        if (!found || x.valuation() < best) {
          best = x.valuation();
          bi = i;
          bj = j;
          found = true;
        }
      }
    if (!found) {
      for (std::size_t j = s; j < ncol; ++j) res.d[j] = undecided;
      break;
    }
    if (undecided < best) res.floor = std::min(res.floor, undecided);
    for (auto& r : rows) std::swap(r[s], r[bj]);
    for (auto& r : res.V) std::swap(r[s], r[bj]);
    CVector P = rows[bi];
    rows[bi] = std::move(rows.back());
    rows.pop_back();
    const PadicRational inv = P[s].inverse();
    for (std::size_t k = s + 1; k < ncol; ++k) {
      if (P[k].is_zero()) continue;
      const PadicRational f = P[k] * inv;
      for (auto& r : rows)
        if (!r[s].is_zero()) r[k] -= f * r[s];
      for (auto& r : res.V)
        if (!r[s].is_zero()) r[k] -= f * r[s];
    }
    for (auto& r : rows) r[s] = PadicRational::exact_zero(p);
    res.d[s] = best;
  }
  return res;
}

// Row-echelon basis over Z_p with leading entries p^v.
std::vector<CVector> hermite(std::vector<CVector> vs) {
  std::vector<CVector> out;
  if (vs.empty()) return out;
  const std::size_t n = vs[0].size();
  for (std::size_t col = 0; col < n && !vs.empty(); ++col) {
    std::size_t bi = vs.size();
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (!vs[i][col].is_zero() && (bi == vs.size() || vs[i][col].valuation() < vs[bi][col].valuation())) bi = i;
    if (bi == vs.size()) continue;
    CVector piv = vs[bi];
    vs.erase(vs.begin() + static_cast<std::ptrdiff_t>(bi));
    // Scale by the inverse unit so the leading entry is exactly p^v.
    const PadicRational lead = piv[col];
    const PadicRational scale = PadicRational::from_scalar(lead.unit()).inverse();
    for (auto& x : piv) x *= scale;
    for (auto& v : vs) {
      if (v[col].is_zero()) continue;
      const PadicRational f = v[col] / piv[col];
      for (std::size_t k = 0; k < n; ++k) v[k] -= f * piv[k];
      v[col] = PadicRational::exact_zero(lead.p());
    }
    out.push_back(std::move(piv));
  }
  return out;
}

int characters_precision(const TruncatedSeries& s, int N) {
  int prec = N;
  for (const auto& t : s.terms()) prec = std::min(prec, t.c.absolute_precision());
  return prec;
}

DeltaCharacter character_from(const FormalGroupLaw& F, const std::vector<TruncatedSeries>& Ls, const CVector& c) {
  DeltaCharacter th;
  th.c = c;
  th.order = static_cast<int>(c.size()) - 1;
  th.series = TruncatedSeries::zero_like(Ls.at(0));
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) th.series += Ls[i].scaled(c[i]);
  const int v = th.series.min_valuation();
  if (v < 0)
    throw Error(ErrorKind::IntegralityViolation,
                "character series has a coefficient of valuation " + std::to_string(v));
  th.precision = characters_precision(th.series, F.ctx.N);
  return th;
}

// The formal group used for the high-degree univariate constraints: the
// completed-square model when the curve has a1 or a3 nonzero.
FormalGroupLaw extension_group(const FormalGroupLaw& F) {
  if (F.kind != GroupKind::Elliptic || F.curve->is_y2_eq_cubic()) return F;
  auto model = F.curve->completed_square_model();
  model.ctx.M = 4;
  return formal_group_from_curve(model);
}

// log_coefficients is quadratic in the degree; stability re-solves reuse it.
std::vector<PadicRational> cached_log_coefficients(const FormalGroupLaw& F, int D, int prec) {
  using Key = std::tuple<std::uint64_t, int, std::array<std::int64_t, 5>, int, int>;
  static std::mutex mu;
  static std::map<Key, std::vector<PadicRational>> cache;
  std::array<std::int64_t, 5> a{0, 0, 0, 0, 0};
  if (F.curve) a = {F.curve->a1, F.curve->a2, F.curve->a3, F.curve->a4, F.curve->a6};
  const Key key{F.ctx.p, static_cast<int>(F.kind), a, D, prec};
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto l = log_coefficients(extension_group(F), D, prec);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(l)).first->second;
}

struct Constraints {
  std::vector<CVector> rows;
  std::size_t ncol = 0;
  int prec = 0;
};

Constraints build_constraints(const FormalGroupLaw& F, const std::vector<TruncatedSeries>& Ls, int M, int drop, int D) {
  const std::uint64_t p = F.ctx.p;
  Constraints C;
  C.ncol = Ls.size();
  auto reduce = [&](PadicRational x) {
    if (drop == 0 || x.is_exact_zero()) return x;
    return x.with_absolute_precision(x.absolute_precision() - drop);
  };
  std::map<std::uint64_t, CVector> byKey;
  for (std::size_t i = 0; i < Ls.size(); ++i)
    for (const auto& t : Ls[i].terms()) {
      if (t.deg > M) continue;
      auto [it, fresh] = byKey.try_emplace(t.key, CVector(C.ncol, PadicRational::exact_zero(p)));
      it->second[i] = reduce(t.c);
    }
  for (auto& [k, row] : byKey) C.rows.push_back(std::move(row));
  if (D > M) {
    const int prec = working_precision_for(F.ctx, D);
    const auto l = cached_log_coefficients(F, D, prec);
    for (int k = M + 1; k <= D; ++k) {
      CVector row(C.ncol, PadicRational::exact_zero(p));
      bool any = false;
      int kk = k;
      for (std::size_t i = 0; i < C.ncol; ++i) {
        if (i > 0) {
          if (kk % static_cast<int>(p) != 0) break;
          kk /= static_cast<int>(p);
        }
        const auto& c = l[static_cast<std::size_t>(kk)];
        if (c.is_zero()) continue;
        row[i] = reduce(c);
        any = true;
      }
      if (any) C.rows.push_back(std::move(row));
    }
  }
  C.prec = working_precision_for(F.ctx, std::max(M, D));
  return C;
}

struct CoreSolve {
  std::vector<CVector> generators;
  std::vector<int> divisors;
};

CoreSolve solve_core(const FormalGroupLaw& F, const std::vector<TruncatedSeries>& Ls, int M, int drop, int D) {
  const auto C = build_constraints(F, Ls, M, drop, D);
  auto sm = smith_columns(C.rows, C.ncol, F.ctx.p, C.prec);
  CoreSolve out;
  out.divisors = sm.d;
  std::vector<CVector> gens;
  for (std::size_t j = 0; j < C.ncol; ++j) {
    if (sm.d[j] < 0) continue;
    if (sm.floor < 0)
      throw Error(ErrorKind::PrecisionExhausted,
                  "integrality constraints are only known to p^" + std::to_string(sm.floor));
    if (sm.d[j] >= PadicRational::kExact / 2)
      throw Error(ErrorKind::PrecisionExhausted, "a character direction is unconstrained");
    CVector g(C.ncol, PadicRational::exact_zero(F.ctx.p));
    for (std::size_t i = 0; i < C.ncol; ++i)
      if (!sm.V[i][j].is_zero()) g[i] = sm.V[i][j].shifted(-sm.d[j]);
    gens.push_back(std::move(g));
  }
  out.generators = hermite(std::move(gens));
  return out;
}

int default_extension_degree(std::uint64_t p) {
  const std::uint64_t d = ipow(p, 6);
  return d > 20000 ? 20000 : static_cast<int>(d);
}

bool hard_zero_at_order0(GroupKind k) { return k != GroupKind::Additive; }

}  // namespace

std::vector<TruncatedSeries> log_projections(const FormalGroupLaw& F, int n) {
  const auto& ctx = F.ctx;
  if (n < 0 || n > 2) throw Error(ErrorKind::InvalidArgument, "log projections are available for n <= 2");
  if (static_cast<std::uint64_t>(ctx.M) < ipow(ctx.p, n) + ctx.p)
    throw Error(ErrorKind::InvalidArgument,
                "degree budget M = " + std::to_string(ctx.M) + " is below p^n + p for n = " + std::to_string(n));
  const auto vars = xvars(0, n);
  std::vector<TruncatedSeries> L;
  for (int i = 0; i <= n; ++i) {
    const auto w = ghost_series(ctx.p, vars, ctx.M, F.working_precision, 0, i);
    L.push_back(F.log.compose({w}));
  }
  return L;
}

KernelCharacter fundamental_character(const FormalGroupLaw& F) {
  const auto& ctx = F.ctx;
  const auto x1 = TruncatedSeries::variable(ctx.p, {"x1"}, ctx.M, F.working_precision, 0);
  KernelCharacter k;
  k.series = F.log.compose({x1.scaled(static_cast<std::int64_t>(ctx.p))}).shifted(-1);
  k.origin = KernelOrigin::Fundamental;
  const int v = k.series.min_valuation();
  if (v < 0) throw Error(ErrorKind::IntegralityViolation, "Psi_1 has a coefficient of valuation " + std::to_string(v));
  return k;
}

DeltaCharacter make_character(const FormalGroupLaw& F, const CVector& c) {
  if (c.empty()) throw Error(ErrorKind::InvalidArgument, "empty c-vector");
  return character_from(F, log_projections(F, static_cast<int>(c.size()) - 1), c);
}

CharacterLattice solve_character_lattice(const FormalGroupLaw& F, int n, const SolverOptions& opt) {
  const auto& ctx = F.ctx;
  const auto Ls = log_projections(F, n);
  const int D = opt.extension_degree > 0 ? opt.extension_degree : default_extension_degree(ctx.p);
  CharacterLattice lat;
  lat.order = n;
  if (n == 0 && hard_zero_at_order0(F.kind)) {
    lat.divisors = {-PadicRational::kExact};
    return lat;
  }
  const auto core = solve_core(F, Ls, ctx.M, 0, D);
  lat.divisors = core.divisors;
  lat.rank = static_cast<int>(core.generators.size());
  if (opt.check_stability) {
    const int a = static_cast<int>(solve_core(F, Ls, ctx.M, 1, D).generators.size());
    const int b = static_cast<int>(solve_core(F, Ls, ctx.M - 2, 0, D).generators.size());
    if (a != lat.rank || b != lat.rank)
      throw Error(ErrorKind::AmbiguousRank, "rank " + std::to_string(lat.rank) + " at order " + std::to_string(n) +
                                                " changes to " + std::to_string(a) + " at N-1 and " +
                                                std::to_string(b) + " at M-2; raise N or M");
  }
  for (const auto& g : core.generators) lat.basis.push_back(character_from(F, Ls, g));
  if (n > 0) {
    SolverOptions lower = opt;
    lower.check_stability = false;
    const auto prev = solve_character_lattice(F, n - 1, lower);
    for (const auto& th : prev.basis) lat.shift_relations.push_back(shifted_cvector(th.c));
  }
  return lat;
}

int padic_rank(const std::vector<CVector>& vectors, int zero_threshold) {
  std::vector<CVector> rows;
  for (const auto& v : vectors) {
    int m = PadicRational::kExact;
    for (const auto& x : v)
      if (!x.is_zero()) m = std::min(m, x.valuation());
    if (m >= PadicRational::kExact) continue;
    CVector r;
    for (const auto& x : v) r.push_back(x.shifted(-m));
    rows.push_back(std::move(r));
  }
  int rank = 0;
  while (!rows.empty()) {
    int best = PadicRational::kExact;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[i].size(); ++j)
        if (!rows[i][j].is_zero() && rows[i][j].valuation() < best) {
          best = rows[i][j].valuation();
          bi = i;
          bj = j;
        }
    if (best >= zero_threshold) break;
    ++rank;
    CVector P = rows[bi];
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(bi));
    for (auto& r : rows) {
      if (r[bj].is_zero()) continue;
      const PadicRational f = r[bj] / P[bj];
      for (std::size_t k = 0; k < r.size(); ++k) r[k] -= f * P[k];
      r[bj] = PadicRational::exact_zero(P[bj].p());
    }
  }
  return rank;
}

std::pair<CVector, int> padic_solve(const std::vector<TruncatedSeries>& cols, const TruncatedSeries& target) {
  std::vector<TruncatedSeries> all = cols;
  all.push_back(target);
  const auto tab = tabulate(all);
  const std::size_t u = cols.size();
  const std::size_t m = tab.empty() ? 0 : tab[0].size();
  const std::uint64_t p = target.p();
  // Row i: coefficients of monomial i in each column, then the target.
  std::vector<CVector> rows(m, CVector(u + 1, PadicRational::exact_zero(p)));
  for (std::size_t j = 0; j <= u; ++j)
    for (std::size_t i = 0; i < m; ++i) rows[i][j] = tab[j][i];
  std::vector<std::pair<std::size_t, CVector>> pivots;  // (column, pivot row)
  std::vector<bool> used(u, false);
  for (std::size_t step = 0; step < u; ++step) {
    int best = PadicRational::kExact;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < u; ++j)
        if (!used[j] && !rows[i][j].is_zero() && rows[i][j].valuation() < best) {
          best = rows[i][j].valuation();
          bi = i;
          bj = j;
        }
    if (best >= PadicRational::kExact) break;
    used[bj] = true;
    CVector P = rows[bi];
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(bi));
    for (auto& r : rows) {
      if (r[bj].is_zero()) continue;
      const PadicRational f = r[bj] / P[bj];
      for (std::size_t k = 0; k <= u; ++k) r[k] -= f * P[k];
      r[bj] = PadicRational::exact_zero(p);
    }
    pivots.emplace_back(bj, std::move(P));
  }
  CVector x(u, PadicRational::exact_zero(p));
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    const auto& [j, P] = *it;
    PadicRational acc = P[u];
    for (std::size_t k = 0; k < u; ++k)
      if (k != j && !x[k].is_zero() && !P[k].is_zero()) acc -= P[k] * x[k];
    x[j] = acc / P[j];
  }
  TruncatedSeries approx = TruncatedSeries::zero_like(target);
  for (std::size_t j = 0; j < u; ++j)
    if (!x[j].is_zero()) approx += cols[j].scaled(x[j]);
  return {x, residual_valuation(approx, target)};
}

CharacterLattice primitive_quotient(const std::vector<CharacterLattice>& lattices, GroupKind kind) {
  if (lattices.empty()) throw Error(ErrorKind::InvalidArgument, "no lattices given");
  const int thr = 4;
  std::optional<CharacterLattice> first;
  int top_rank = 0;
  for (std::size_t k = 0; k < lattices.size(); ++k) {
    const auto& lat = lattices[k];
    const std::size_t len = k + 1;
    std::vector<CVector> shifts;
    if (k > 0)
      for (const auto& th : lattices[k - 1].basis) shifts.push_back(padded(shifted_cvector(th.c), len));
    const int base = padic_rank(shifts, thr);
    std::vector<CVector> acc = shifts;
    CharacterLattice q;
    q.order = static_cast<int>(k);
    q.shift_relations = shifts;
    for (const auto& th : lat.basis) {
      acc.push_back(th.c);
      if (padic_rank(acc, thr) > base + q.rank) {
        q.basis.push_back(th);
        ++q.rank;
      } else {
        acc.pop_back();
      }
    }
    q.divisors = lat.divisors;
    top_rank = q.rank;
    if (!first && q.rank > 0) first = q;
  }
  if (kind != GroupKind::Additive && top_rank != 1)
    throw Error(ErrorKind::RankMismatch, "primitive rank " + std::to_string(top_rank) + " at order " +
                                             std::to_string(lattices.size() - 1) + " (expected 1)");
  if (!first) throw Error(ErrorKind::RankMismatch, "no primitive characters up to order " + std::to_string(lattices.size() - 1));
  return *first;
}

Differential differential_gamma(const FormalGroupLaw& F, const DeltaCharacter& theta) {
  Differential d;
  for (int i = 0; i <= theta.order; ++i) d.A.push_back(theta.series.linear_coeff(static_cast<std::size_t>(i)));
  d.gamma = -(d.A.at(0) * PadicRational::from_int(F.ctx.p, F.working_precision, static_cast<std::int64_t>(F.ctx.p)));
  return d;
}

PadicRational upsilon(const FormalGroupLaw& F, const DeltaCharacter& theta) {
  return differential_gamma(F, theta).gamma.shifted(-1);
}

std::vector<TruncatedSeries> lateral_frobenius_series(const FormalGroupLaw& F, int n, int max_degree) {
  return witt_frobenius_series(coordinate_series(F, 1, n + 1, max_degree));
}

KernelCharacter restrict_lateral(const FormalGroupLaw& F, const DeltaCharacter& theta, LateralAction action) {
  KernelCharacter k;
  switch (action) {
    case LateralAction::IotaStar:
      k.series = iota(theta.series);
      k.origin = KernelOrigin::IotaStar;
      return k;
    case LateralAction::PhiStar:
      k.series = iota_phi_star(theta.series, F, F.ctx.M);
      k.origin = KernelOrigin::PhiStar;
      return k;
    case LateralAction::FStar:
      return restrict_lateral(F, restrict_lateral(F, theta, LateralAction::IotaStar), LateralAction::FStar);
  }
  return k;
}

KernelCharacter restrict_lateral(const FormalGroupLaw& F, const KernelCharacter& psi, LateralAction action) {
  if (action != LateralAction::FStar)
    throw Error(ErrorKind::InvalidArgument, "kernel characters only pull back along the lateral Frobenius");
  KernelCharacter k;
  k.series = f_star(psi.series, F, psi.series.max_degree());
  k.origin = KernelOrigin::LateralImage;
  return k;
}

DiffRelationReport verify_diff_relation(const FormalGroupLaw& F, const DeltaCharacter& theta) {
  const auto& ctx = F.ctx;
  const int n = theta.order;
  if (n < 0 || n > 2) throw Error(ErrorKind::InvalidArgument, "diff relation is checked for order <= 2");
  DiffRelationReport rep;
  const int M = ctx.M;
  const auto g = differential_gamma(F, theta).gamma;
  const auto lhs = widen(f_star(iota(theta.series), F, M), 1, n + 1);
  const auto psi = widen(fundamental_character(F).series.truncated(M), 1, n + 1);
  const auto rhs = widen(iota_phi_star(theta.series, F, M), 1, n + 1) + psi.scaled(g);
  rep.first = make_check("f*(i*Theta) = i*phi*Theta + gamma Psi1", lhs, rhs, ctx.N - 3);

  // Second identity on N^{2n}: only n = 2 has content; degree is reduced there.
  const std::string name2 = "(f^(n-1))* i*phi*Theta = i*(phi^n)*Theta";
  if (n <= 1) {
    const auto s = iota_phi_star(theta.series, F, M);
    rep.second = make_check(name2, s, s, ctx.N - 2);
    rep.second_degree = M;
    return rep;
  }
  const int M2 = std::min(M, 12);
  const auto one_step = iota_phi_star(theta.series, F, M2);     // N^3
  const auto left = f_star(one_step, F, M2);                    // N^4
  const auto right = iota_phi_star(phi_star(theta.series, F, M2), F, M2);  // N^4
  rep.second = make_check(name2, left, right, ctx.N - 2);
  rep.second_degree = M2;
  return rep;
}

CharacterSuite character_suite(const FormalGroupLaw& F, const SolverOptions& opt) {
  const auto& ctx = F.ctx;
  if (static_cast<std::uint64_t>(ctx.M) < ctx.p * ctx.p + ctx.p)
    throw Error(ErrorKind::InvalidArgument, "order-2 analysis needs M >= p^2 + p (M = " + std::to_string(ctx.M) + ")");
  CharacterSuite S{F, {}, {}};
  for (int n = 0; n <= 2; ++n) S.lattices.push_back(solve_character_lattice(F, n, opt));
  S.primitive = primitive_quotient(S.lattices, F.kind);
  return S;
}

namespace {

struct Ranks {
  int m_u = 0;
  int r = 0;
  std::array<int, 2> X{0, 0};
  std::vector<int> I;
};

Ranks ranks_of(const CharacterSuite& S) {
  Ranks R;
  const int g = 1;
  const int x0 = S.lattices.at(0).rank;
  R.X = {S.lattices.at(1).rank, S.lattices.at(2).rank};
  R.I = {0, g * 1 - (R.X[0] - x0), g * 2 - (R.X[1] - x0)};
  const std::array<int, 3> h{0, R.I[1] - R.I[0], R.I[2] - R.I[1]};
  R.m_u = 3;
  for (int m = 2; m >= 1; --m) {
    bool vanish = true;
    for (int k = m; k <= 2; ++k) vanish = vanish && h[static_cast<std::size_t>(k)] == 0;
    if (vanish) R.m_u = m;
  }
  const int im = R.m_u - 1 <= 2 ? R.I[static_cast<std::size_t>(R.m_u - 1)] : R.I[2];
  R.r = S.primitive.rank + im;
  return R;
}

// c-vectors spanning X_{m,K}; past the solved orders X_{m+1} = X_m + phi*X_m.
std::vector<CVector> character_span(const CharacterSuite& S, int m) {
  std::vector<CVector> out;
  if (m < static_cast<int>(S.lattices.size())) {
    for (const auto& th : S.lattices[static_cast<std::size_t>(m)].basis) out.push_back(th.c);
    return out;
  }
  const auto prev = character_span(S, m - 1);
  for (const auto& c : prev) out.push_back(padded(c, static_cast<std::size_t>(m + 1)));
  for (const auto& c : prev) out.push_back(shifted_cvector(c));
  return out;
}

// iota*phi*X_{level-1} in x1..x_level.
std::vector<TruncatedSeries> relations_at(const CharacterSuite& S, int level, int M) {
  std::vector<TruncatedSeries> out;
  if (level < 1) return out;
  for (const auto& c : character_span(S, level - 1)) out.push_back(kernel_of(S.F, c, 1, level, M));
  return out;
}

std::vector<CVector> vectors_of(const std::vector<TruncatedSeries>& s) { return tabulate(s); }

int quotient_rank(const std::vector<TruncatedSeries>& vs, const std::vector<TruncatedSeries>& rel, int thr) {
  std::vector<TruncatedSeries> all = rel;
  all.insert(all.end(), vs.begin(), vs.end());
  const auto tab = vectors_of(all);
  const std::vector<CVector> relv(tab.begin(), tab.begin() + static_cast<std::ptrdiff_t>(rel.size()));
  return padic_rank(tab, thr) - padic_rank(relv, thr);
}

// iota*Theta, f* iota*Theta, ..., up to `count` terms, each in x1..x_level.
std::vector<TruncatedSeries> lateral_orbit(const CharacterSuite& S, int count, int level, int M) {
  std::vector<TruncatedSeries> out;
  TruncatedSeries cur = iota(S.primitive.basis.at(0).series.truncated(M));
  for (int i = 0; i < count; ++i) {
    if (i > 0) cur = f_star(cur, S.F, M);
    out.push_back(widen(cur, 1, level));
  }
  return out;
}

}  // namespace

bool classify_CL(const CharacterSuite& S) { return S.lattices.at(1).rank == 1; }

IsocrystalData isocrystal_data(const CharacterSuite& S) {
  const auto& F = S.F;
  const auto& ctx = F.ctx;
  if (F.kind == GroupKind::Additive) throw Error(ErrorKind::InvalidArgument, "isocrystal data needs G_m or an elliptic curve");
  const int M = ctx.M;
  const int thr = ctx.N - 3;
  const auto R = ranks_of(S);
  IsocrystalData D;
  D.ranks_Xn = R.X;
  D.m_u = R.m_u;
  D.hdelta_rank = R.r;
  D.is_CL = classify_CL(S);
  D.hodge_rank = S.primitive.rank;
  for (const auto& th : S.primitive.basis) D.gamma_values.push_back(differential_gamma(F, th).gamma);
  const int k = S.primitive.order;
  const int r = R.r;
  if (r < 1 || r > 2) throw Error(ErrorKind::RankMismatch, "delta rank " + std::to_string(r) + " outside [1, 2]");

  // Filtration F_0 = X_prim, F_{i+1} = X_prim + f* F_i, at level k + m_u.
  const int lf = k + std::min(R.m_u, 2);
  const auto relf = relations_at(S, lf, M);
  const auto orbitf = lateral_orbit(S, std::min(R.m_u, 2) + 1, lf, M);
  for (std::size_t i = 0; i < orbitf.size(); ++i) {
    std::vector<TruncatedSeries> span(orbitf.begin(), orbitf.begin() + static_cast<std::ptrdiff_t>(i + 1));
    D.filtration_dims.push_back(quotient_rank(span, relf, thr));
  }

  // Matrix of f* in the basis iota*Theta, f* iota*Theta, ... modulo relations.
  const int lm = k + r;
  const auto relm = relations_at(S, lm, M);
  const auto orbit = lateral_orbit(S, r + 1, lm, M);
  std::vector<TruncatedSeries> cols(orbit.begin(), orbit.begin() + r);
  cols.insert(cols.end(), relm.begin(), relm.end());
  const auto [x, resid] = padic_solve(cols, orbit.back());
  const std::uint64_t p = ctx.p;
  D.frobenius_matrix.assign(static_cast<std::size_t>(r), CVector(static_cast<std::size_t>(r), PadicRational::exact_zero(p)));
  for (int i = 0; i + 1 < r; ++i)
    D.frobenius_matrix[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(i)] = unit_one(p, F.working_precision);
  int minx = 0;
  for (int i = 0; i < r; ++i) {
    D.frobenius_matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(r - 1)] = x[static_cast<std::size_t>(i)];
    if (!x[static_cast<std::size_t>(i)].is_zero()) minx = std::min(minx, x[static_cast<std::size_t>(i)].valuation());
  }
  D.precision = std::min(ctx.N, resid + minx);
  for (int i = 0; i < r; ++i) {
    KernelCharacter kc;
    kc.series = orbit[static_cast<std::size_t>(i)];
    kc.origin = i == 0 ? KernelOrigin::IotaStar : KernelOrigin::LateralImage;
    D.basis.push_back(std::move(kc));
  }
  return D;
}

SplittingData splitting_numbers_and_rank(const CharacterSuite& S) {
  const auto R = ranks_of(S);
  const auto D = isocrystal_data(S);
  SplittingData out;
  out.m_u = R.m_u;
  out.delta_rank = R.r;
  out.ranks_Xn = R.X;
  out.rk_I = R.I;
  out.filtration_dims = D.filtration_dims;
  return out;
}

namespace {
CharacterSuite suite_for(const WeierstrassCurve& E) { return character_suite(formal_group_from_curve(E)); }
}  // namespace

SplittingData splitting_numbers_and_rank(const WeierstrassCurve& E) { return splitting_numbers_and_rank(suite_for(E)); }
bool classify_CL(const WeierstrassCurve& E) { return classify_CL(suite_for(E)); }
IsocrystalData isocrystal_data(const WeierstrassCurve& E) { return isocrystal_data(suite_for(E)); }

OrderOneSpan order_one_span_identity(const CharacterSuite& S) {
  const auto& F = S.F;
  const int M = F.ctx.M;
  const int thr = F.ctx.N - 3;
  OrderOneSpan out;
  // X_1 / iota*phi*X_0 inside H_1.
  std::vector<TruncatedSeries> x1;
  for (const auto& th : S.lattices.at(1).basis) x1.push_back(iota(th.series.truncated(M)));
  const auto rel1 = relations_at(S, 1, M);
  out.lhs_dim = x1.empty() ? 0 : quotient_rank(x1, rel1, thr);
  // iota*X_prim meet f* iota*X_prim inside H_{k+1}.
  const int k = S.primitive.order;
  if (k < 1) return out;
  const int level = k + 1;
  const auto rel = relations_at(S, level, M);
  const auto orbit = lateral_orbit(S, 2, level, M);
  const int a = quotient_rank({orbit[0]}, rel, thr);
  const int b = quotient_rank({orbit[1]}, rel, thr);
  const int ab = quotient_rank(orbit, rel, thr);
  out.rhs_dim = a + b - ab;
  return out;
}

}  // namespace deltacrys
