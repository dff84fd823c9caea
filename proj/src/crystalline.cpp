#include "deltacrys/crystalline.hpp"

#include <algorithm>
#include <map>

#include "deltacrys/error.hpp"

namespace deltacrys {

namespace {

using Poly = std::vector<PadicRational>;  // index = degree

int floor_log_p(std::uint64_t p, std::uint64_t m) {
  int k = 0;
  for (std::uint64_t x = m; x >= p; x /= p) ++k;
  return k;
}

void trim(Poly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

Poly add(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), PadicRational::exact_zero(b[0].p()));
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!b[i].is_exact_zero()) a[i] += b[i];
  return a;
}

Poly scale(Poly a, const PadicRational& c) {
  for (auto& x : a) x *= c;
  return a;
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, PadicRational::exact_zero(a[0].p()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_exact_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_exact_zero()) r[i + j] += a[i] * b[j];
  }
  return r;
}

Poly derivative(const Poly& a) {
  Poly r;
  for (std::size_t i = 1; i < a.size(); ++i)
    r.push_back(a[i] * PadicRational::from_int(a[i].p(), max_precision(a[i].p()), static_cast<std::int64_t>(i)));
  return r;
}

// Quotient and remainder by b, whose leading coefficient must be a unit.
std::pair<Poly, Poly> divmod(Poly a, Poly b) {
  trim(a);
  trim(b);
  if (b.empty()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
  const std::uint64_t p = b[0].p();
  if (a.size() < b.size()) return {{}, a};
  Poly q(a.size() - b.size() + 1, PadicRational::exact_zero(p));
  const PadicRational inv = b.back().inverse();
  for (std::size_t i = a.size(); i-- >= b.size();) {
    const PadicRational c = a[i] * inv;
    q[i - (b.size() - 1)] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[i - (b.size() - 1) + j] -= c * b[j];
    a[i] = PadicRational::exact_zero(p);
    if (i == 0) break;
  }
  trim(a);
  return {q, a};
}

// R Q + S Q' = 1 by the extended Euclidean algorithm.
std::pair<Poly, Poly> bezout(const Poly& Q, const Poly& dQ) {
  const std::uint64_t p = Q[0].p();
  const PadicRational one = PadicRational::from_int(p, max_precision(p), 1);
  Poly r0 = Q, r1 = dQ, s0 = {one}, s1 = {}, t0 = {}, t1 = {one};
  trim(r1);
  while (r1.size() > 1) {
    auto [q, r] = divmod(r0, r1);
    Poly s2 = add(s0, scale(mul(q, s1), -one));
    Poly t2 = add(t0, scale(mul(q, t1), -one));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r1.empty() || r1[0].valuation() != 0)
    throw Error(ErrorKind::BadReduction, "Q and Q' are not coprime modulo p");
  const PadicRational inv = r1[0].inverse();
  return {scale(s1, inv), scale(t1, inv)};
}

PadicRational binom_minus_half(std::uint64_t p, int prec, int k) {
  // (-1)^k C(2k, k) / 4^k
  BigInt num = 1, den = 1;
  for (int i = 1; i <= k; ++i) {
    num *= (2 * k - i + 1);
    den *= i;
  }
  num /= den;
  BigInt four = 1;
  for (int i = 0; i < k; ++i) four *= 4;
  if (k % 2) num = -num;
  return PadicRational::from_fraction(p, prec, num, four);
}

}  // namespace

FrobeniusMatrix kedlaya_frobenius(const WeierstrassCurve& E) {
  const auto& ctx = E.ctx;
  const std::uint64_t p = ctx.p;
  if (p < 5) throw Error(ErrorKind::InvalidArgument, "the reduction is implemented for p >= 5");
  if (ctx.N < 4) throw Error(ErrorKind::InvalidArgument, "Kedlaya's method needs N >= 4");
  const WeierstrassCurve model = E.is_y2_eq_cubic() ? E : E.completed_square_model();
  if (valuation_of(model.discriminant(), p) > 0) throw Error(ErrorKind::BadReduction, "bad reduction at p");

  // Series terms 0..K suffice once p^{K+2} survives the reduction losses with room for N.
  int K = 0;
  while ((K + 2) - (floor_log_p(p, p * static_cast<std::uint64_t>(2 * K + 3)) + 1) < ctx.N + 2) ++K;
  const int logs = floor_log_p(p, p * static_cast<std::uint64_t>(2 * K + 1));
  const int W = std::min(max_precision(p), ctx.N + 2 * logs + 4);
  auto num = [&](std::int64_t v) { return PadicRational::from_int(p, W, v); };

  const Poly Q = {num(model.a6), num(model.a4), num(model.a2), num(1)};
  const Poly dQ = derivative(Q);
  const auto [R, S] = bezout(Q, dQ);
  (void)R;

  // E(x) = Q(x^p) - Q(x)^p, divisible by p.
  Poly Qp(3 * p + 1, PadicRational::exact_zero(p));
  for (std::size_t i = 0; i < Q.size(); ++i) Qp[i * p] = Q[i];
  Poly Qpow = {num(1)};
  for (std::uint64_t i = 0; i < p; ++i) Qpow = mul(Qpow, Q);
  Poly Ex = add(Qp, scale(Qpow, num(-1)));
  trim(Ex);

  FrobeniusMatrix out;
  out.curve = model;
  out.entries.assign(2, CVector(2, PadicRational::exact_zero(p)));
  for (int i = 0; i < 2; ++i) {
    // F(x^i dx/y) = p x^{p(i+1)-1} sum_k binom(-1/2, k) E^k dx / y^{p(2k+1)}.
    std::map<int, Poly> byPole;
    Poly Ek = {num(1)};
    Poly xpow(static_cast<std::size_t>(p * (i + 1)), PadicRational::exact_zero(p));
    xpow.back() = num(static_cast<std::int64_t>(p));
    for (int k = 0; k <= K; ++k) {
      if (k > 0) Ek = mul(Ek, Ex);
      byPole[static_cast<int>(p) * (2 * k + 1)] = scale(mul(xpow, Ek), binom_minus_half(p, W, k));
    }
    // A dx/y^s = U dx/y^{s-2} + V Q' dx/y^s and V Q' dx/y^s == 2V'/(s-2) dx/y^{s-2}.
    for (int s = byPole.rbegin()->first; s > 1; s -= 2) {
      auto found = byPole.find(s);
      if (found == byPole.end()) continue;
      Poly A = found->second;
      trim(A);
      auto [qq, V] = divmod(mul(A, S), Q);
      (void)qq;
      auto [U, zero] = divmod(add(A, scale(mul(V, dQ), num(-1))), Q);
      (void)zero;
      const Poly down = add(U, scale(derivative(V), num(2) / num(s - 2)));
      auto& target = byPole[s - 2];
      target = target.empty() ? down : add(target, down);
    }
    // Degree reduction on dx/y: (j + 3/2) x^{j+2} + (j+1) q2 x^{j+1} + (j+1/2) q1 x^j + j q0 x^{j-1} == 0.
    Poly A = byPole[1];
    trim(A);
    const PadicRational half = num(1) / num(2);
    for (std::size_t d = A.size(); d-- > 2;) {
      const PadicRational c = A[d];
      if (c.is_zero()) continue;
      const std::int64_t j = static_cast<std::int64_t>(d) - 2;
      const PadicRational lead = num(j) + num(3) * half;
      const PadicRational f = c / lead;
      A[d - 1] -= f * num(j + 1) * Q[2];
      A[d - 2] -= f * (num(j) + half) * Q[1];
      if (j > 0) A[d - 3] -= f * num(j) * Q[0];
      A[d] = PadicRational::exact_zero(p);
    }
    for (std::size_t r = 0; r < 2; ++r)
      out.entries[r][static_cast<std::size_t>(i)] = r < A.size() ? A[r] : PadicRational::exact_zero(p);
  }
  int prec = ctx.N;
  for (const auto& row : out.entries)
    for (const auto& x : row) prec = std::min(prec, x.absolute_precision());
  out.precision = prec;
  out.loss = std::max(0, ctx.N - prec);
  return out;
}

HodgeIntersection hodge_frobenius_intersection(const FrobeniusMatrix& Fm) {
  HodgeIntersection h;
  h.witness = Fm.entries.at(1).at(0);
  h.off_valuation = h.witness.valuation();
  h.dim = (h.witness.is_zero() || h.off_valuation >= Fm.precision) ? 1 : 0;
  return h;
}

std::vector<PadicRational> char_poly(const PMatrix& m) {
  if (m.size() == 1) return {-m[0][0]};
  if (m.size() == 2) {
    const auto det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return {det, -(m[0][0] + m[1][1])};
  }
  throw Error(ErrorKind::InvalidArgument, "characteristic polynomials are formed for 1x1 and 2x2 matrices");
}

std::vector<Slope> newton_slopes(const std::vector<PadicRational>& c) {
  const int n = static_cast<int>(c.size());
  std::vector<std::pair<int, int>> pts;  // (index, valuation) with finite valuation
  for (int i = 0; i < n; ++i)
    if (!c[static_cast<std::size_t>(i)].is_zero()) pts.emplace_back(i, c[static_cast<std::size_t>(i)].valuation());
  pts.emplace_back(n, 0);
  std::vector<Slope> out;
  if (pts.front().first != 0) {
    // Roots at zero to the known precision.
    for (int i = 0; i < pts.front().first; ++i) out.emplace_back(PadicRational::kExact);
  }
  // Lower convex hull.
  std::vector<std::pair<int, int>> hull;
  for (const auto& q : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // Drop b if it lies on or above segment a-q.
      const long lhs = static_cast<long>(b.second - a.second) * (q.first - a.first);
      const long rhs = static_cast<long>(q.second - a.second) * (b.first - a.first);
      if (lhs >= rhs) hull.pop_back();
      else break;
    }
    hull.push_back(q);
  }
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const int dx = hull[i + 1].first - hull[i].first;
    const Slope s(hull[i].second - hull[i + 1].second, dx);
    for (int k = 0; k < dx; ++k) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(const Slope& s) {
  if (s.denominator() == 1) return std::to_string(s.numerator());
  return std::to_string(s.numerator()) + "/" + std::to_string(s.denominator());
}

bool ComparisonReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ComparisonCheck& c) { return c.pass; });
}

namespace {

std::string slopes_text(const std::vector<Slope>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + "}";
}

}  // namespace

ComparisonReport compare_isocrystals(const IsocrystalData& D, const FrobeniusMatrix& Fm, const CurveInvariants& inv) {
  ComparisonReport rep;
  const std::uint64_t p = Fm.curve.ctx.p;
  const int N = Fm.curve.ctx.N;
  const int W = max_precision(p);
  const auto ap = PadicRational::from_int(p, W, inv.a_p);
  const auto pp = PadicRational::from_int(p, W, static_cast<std::int64_t>(p));

  // (a) characteristic polynomial against x^2 - a_p x + p.
  ComparisonCheck cp;
  cp.name = "charpoly";
  cp.precision = N - 3;
  auto residual_for = [&](const PadicRational& a) {
    const auto cpoly = char_poly(D.frobenius_matrix);
    if (cpoly.size() == 2) return std::min((cpoly[1] + a).valuation(), (cpoly[0] - pp).valuation());
    const auto lam = -cpoly[0];
    return (lam * lam - a * lam + pp).valuation();
  };
  cp.residual_valuation = residual_for(ap);
  cp.pass = cp.residual_valuation >= cp.precision;
  cp.detail = "residual with a_p replaced by -a_p: " + std::to_string(residual_for(-ap));
  rep.checks.push_back(cp);

  // (b) rk X_1 against dim(H^0 meet F_c H^0).
  const auto h = hodge_frobenius_intersection(Fm);
  rep.hodge_dim = h.dim;
  ComparisonCheck ci;
  ci.name = "cor-int";
  ci.residual_valuation = h.off_valuation;
  ci.precision = Fm.precision;
  ci.pass = D.ranks_Xn[0] == h.dim;
  ci.detail = "rk X_1 = " + std::to_string(D.ranks_Xn[0]) + ", dim = " + std::to_string(h.dim);
  rep.checks.push_back(ci);

  // (c) Newton slopes; in the CL case the 1x1 block carries the slope-1 root.
  rep.delta_slopes = newton_slopes(char_poly(D.frobenius_matrix));
  rep.expected_slopes = newton_slopes({pp, -ap});
  if (D.is_CL) {
    std::vector<Slope> keep;
    for (const auto& s : rep.expected_slopes)
      if (s == Slope(1)) keep.push_back(s);
    rep.expected_slopes = keep;
  }
  ComparisonCheck sl;
  sl.name = "slopes";
  sl.pass = rep.delta_slopes == rep.expected_slopes;
  sl.residual_valuation = sl.pass ? PadicRational::kExact : 0;
  sl.precision = N - 3;
  sl.detail = "delta " + slopes_text(rep.delta_slopes) + " vs " + slopes_text(rep.expected_slopes);
  rep.checks.push_back(sl);

  // (d) CL from characters against stability of the Hodge line.
  ComparisonCheck cl;
  cl.name = "cl-agreement";
  cl.pass = D.is_CL == (h.dim == 1);
  cl.residual_valuation = h.off_valuation;
  cl.precision = Fm.precision;
  cl.detail = std::string("characters: ") + (D.is_CL ? "CL" : "non-CL") + ", Hodge line " +
              (h.dim == 1 ? "stable" : "moved");
  rep.checks.push_back(cl);
  return rep;
}

ComparisonReport compare_isocrystals(const WeierstrassCurve& E) {
  const auto D = isocrystal_data(E);
  return compare_isocrystals(D, kedlaya_frobenius(E), count_points_ap(E));
}

}  // namespace deltacrys
