#include "deltacrys/witt.hpp"

#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "deltacrys/error.hpp"

namespace deltacrys {

namespace {

BigInt bpow(const BigInt& b, std::uint64_t e) {
  BigInt r = 1, x = b;
  while (e) {
    if (e & 1) r *= x;
    e >>= 1;
    if (e) x *= x;
  }
  return r;
}

BigInt big_ipow(std::uint64_t p, int k) { return bpow(BigInt(p), static_cast<std::uint64_t>(k)); }

// Solves sum_j p^j c_j^{p^{i-j}} = g_i for exact integer c.
std::vector<BigInt> ghost_inverse(const std::vector<BigInt>& g, std::uint64_t p) {
  std::vector<BigInt> c;
  for (std::size_t i = 0; i < g.size(); ++i) {
    BigInt acc = g[i];
    for (std::size_t j = 0; j < i; ++j)
      acc -= big_ipow(p, static_cast<int>(j)) * bpow(c[j], static_cast<std::uint64_t>(ipow(p, static_cast<int>(i - j))));
    const BigInt d = big_ipow(p, static_cast<int>(i));
    if (acc % d != 0) throw Error(ErrorKind::InexactDivision, "ghost components are not congruent");
    c.push_back(acc / d);
  }
  return c;
}

std::vector<ExactPoly> solve_ghost(const std::vector<ExactPoly>& g, std::uint64_t p) {
  std::vector<ExactPoly> c;
  for (std::size_t i = 0; i < g.size(); ++i) {
    ExactPoly acc = g[i];
    for (std::size_t j = 0; j < i; ++j)
      acc -= c[j].pow(ipow(p, static_cast<int>(i - j))).scaled(big_ipow(p, static_cast<int>(j)));
    c.push_back(acc.divided_exact(big_ipow(p, static_cast<int>(i))));
  }
  return c;
}

void verify_ghost(const std::vector<ExactPoly>& c, const std::vector<ExactPoly>& g, std::uint64_t p,
                  const char* what) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    ExactPoly acc(g[i].nvars());
    for (std::size_t j = 0; j <= i; ++j)
      acc += c[j].pow(ipow(p, static_cast<int>(i - j))).scaled(big_ipow(p, static_cast<int>(j)));
    if (!(acc == g[i]))
      throw Error(ErrorKind::IdentityViolation, std::string("ghost identity fails for ") + what);
  }
}

int min_precision(const WittVector& a) {
  int prec = a.a.at(0).precision();
  for (const auto& x : a.a) prec = std::min(prec, x.precision());
  return prec;
}

BigInt lift(const PadicScalar& x) { return BigInt(x.residue()); }

WittVector from_bigs(const std::vector<BigInt>& c, std::uint64_t p, int prec) {
  WittVector w;
  for (const auto& x : c) w.a.push_back(PadicScalar::from_big(p, prec, x));
  return w;
}

WittVector evaluate_polys(const std::vector<ExactPoly>& polys, const std::vector<PadicScalar>& x, std::uint64_t p,
                          int prec) {
  const auto zero = PadicScalar::from_int(p, prec, 0);
  const auto one = PadicScalar::from_int(p, prec, 1);
  WittVector w;
  for (const auto& poly : polys)
    w.a.push_back(poly.evaluate_in<PadicScalar>(x, zero, one,
                                                [&](const BigInt& c) { return PadicScalar::from_big(p, prec, c); }));
  return w;
}

}  // namespace

std::string WittVector::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? ", " : "") << a[i].signed_residue();
  os << "]";
  return os.str();
}

WittVector witt_from_ints(const Context& ctx, const std::vector<std::int64_t>& comps) {
  if (comps.empty()) throw Error(ErrorKind::LengthTooShort, "Witt vectors have length >= 1");
  WittVector w;
  for (auto c : comps) w.a.push_back(PadicScalar::from_int(ctx.p, ctx.N, c));
  return w;
}

std::vector<std::string> StructurePolySet::names() const {
  std::vector<std::string> v;
  for (int i = 0; i <= n; ++i) v.push_back("X" + std::to_string(i));
  for (int i = 0; i <= n; ++i) v.push_back("Y" + std::to_string(i));
  return v;
}

ExactPoly ghost_polynomial(std::uint64_t p, int i, std::size_t nvars, std::size_t offset) {
  ExactPoly w(nvars);
  for (int j = 0; j <= i; ++j) {
    ExactPoly::Exps e(nvars, 0);
    e.at(offset + static_cast<std::size_t>(j)) = static_cast<int>(ipow(p, i - j));
    w.add_term(e, big_ipow(p, j));
  }
  return w;
}

std::shared_ptr<const StructurePolySet> structure_polynomials(const Context& ctx, int n) {
  if (n < 0 || n > 2) throw Error(ErrorKind::InvalidArgument, "structure polynomials are available for n <= 2");
  if (n >= 1 && ipow(ctx.p, n) > 255)
    throw Error(ErrorKind::InvalidArgument, "p^n exceeds the exact-polynomial exponent range");

  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, int>, std::shared_ptr<const StructurePolySet>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({ctx.p, n});
    if (it != cache.end()) return it->second;
  }

  const std::uint64_t p = ctx.p;
  const std::size_t nv = 2 * static_cast<std::size_t>(n + 1);
  const std::size_t yoff = static_cast<std::size_t>(n + 1);
  std::vector<ExactPoly> wx, wy;
  for (int i = 0; i <= n; ++i) {
    wx.push_back(ghost_polynomial(p, i, nv, 0));
    wy.push_back(ghost_polynomial(p, i, nv, yoff));
  }

  auto set = std::make_shared<StructurePolySet>();
  set->p = p;
  set->n = n;
  std::vector<ExactPoly> gs, gp, gn;
  for (int i = 0; i <= n; ++i) {
    gs.push_back(wx[i] + wy[i]);
    gp.push_back(wx[i] * wy[i]);
    gn.push_back(-wx[i]);
  }
  set->S = solve_ghost(gs, p);
  set->P = solve_ghost(gp, p);
  set->Neg = solve_ghost(gn, p);
  verify_ghost(set->S, gs, p, "addition");
  verify_ghost(set->P, gp, p, "multiplication");
  verify_ghost(set->Neg, gn, p, "negation");
  if (n >= 1) {
    // Frobenius of level n needs w_{n+1}; derive with one extra ghost level
    // over the X variables only.
    std::vector<ExactPoly> gf;
    for (int i = 0; i < n; ++i) gf.push_back(wx[static_cast<std::size_t>(i + 1)]);
    set->Frob = solve_ghost(gf, p);
    verify_ghost(set->Frob, gf, p, "Frobenius");
  }

  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(std::make_pair(p, n), set);
  return it->second;
}

std::vector<BigInt> ghost(const WittVector& w, std::uint64_t p) {
  std::vector<BigInt> g;
  for (std::size_t i = 0; i < w.a.size(); ++i) {
    BigInt acc = 0;
    for (std::size_t j = 0; j <= i; ++j)
      acc += big_ipow(p, static_cast<int>(j)) *
             bpow(lift(w.a[j]), static_cast<std::uint64_t>(ipow(p, static_cast<int>(i - j))));
    g.push_back(acc);
  }
  return g;
}

WittVector witt_arith(const Context& ctx, const WittVector& a, const WittVector& b, WittOp op, WittBackend backend) {
  if (a.length() == 0) throw Error(ErrorKind::LengthTooShort, "empty Witt vector");
  if (op != WittOp::Neg && a.length() != b.length())
    throw Error(ErrorKind::LengthMismatch, "Witt vectors of lengths " + std::to_string(a.length()) + " and " +
                                               std::to_string(b.length()));
  const std::uint64_t p = ctx.p;
  const int prec = op == WittOp::Neg ? min_precision(a) : std::min(min_precision(a), min_precision(b));

  if (backend == WittBackend::GhostLift) {
    const auto ga = ghost(a, p);
    std::vector<BigInt> g(ga.size());
    if (op == WittOp::Neg) {
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = -ga[i];
    } else {
      const auto gb = ghost(b, p);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = op == WittOp::Add ? BigInt(ga[i] + gb[i]) : BigInt(ga[i] * gb[i]);
    }
    return from_bigs(ghost_inverse(g, p), p, prec);
  }

  const int n = a.level();
  auto set = structure_polynomials(ctx, n);
  std::vector<PadicScalar> x = a.a;
  if (op == WittOp::Neg) {
    for (std::size_t i = 0; i < a.length(); ++i) x.push_back(PadicScalar::from_int(p, prec, 0));
  } else {
    x.insert(x.end(), b.a.begin(), b.a.end());
  }
  const auto& polys = op == WittOp::Add ? set->S : op == WittOp::Mul ? set->P : set->Neg;
  return evaluate_polys(polys, x, p, prec);
}

WittVector witt_add(const Context& ctx, const WittVector& a, const WittVector& b) {
  return witt_arith(ctx, a, b, WittOp::Add);
}
WittVector witt_mul(const Context& ctx, const WittVector& a, const WittVector& b) {
  return witt_arith(ctx, a, b, WittOp::Mul);
}
WittVector witt_neg(const Context& ctx, const WittVector& a) { return witt_arith(ctx, a, a, WittOp::Neg); }

WittVector witt_frobenius(const Context& ctx, const WittVector& a) {
  if (a.length() < 2) throw Error(ErrorKind::LengthTooShort, "Frobenius needs length >= 2");
  const int prec = min_precision(a);
  if (a.level() > 2) {
    // Beyond the cached polynomial levels: ghost-lift route.
    auto g = ghost(a, ctx.p);
    g.erase(g.begin());
    return from_bigs(ghost_inverse(g, ctx.p), ctx.p, prec);
  }
  auto set = structure_polynomials(ctx, a.level());
  std::vector<PadicScalar> x = a.a;
  for (std::size_t i = 0; i < a.length(); ++i) x.push_back(PadicScalar::from_int(ctx.p, prec, 0));
  return evaluate_polys(set->Frob, x, ctx.p, prec);
}

WittVector witt_truncate(const WittVector& a) {
  if (a.length() < 2) throw Error(ErrorKind::LengthTooShort, "truncation needs length >= 2");
  WittVector r = a;
  r.a.pop_back();
  return r;
}

WittVector witt_verschiebung(const WittVector& a) {
  if (a.length() == 0) throw Error(ErrorKind::LengthTooShort, "empty Witt vector");
  WittVector r;
  r.a.push_back(PadicScalar::from_int(a.a[0].p(), min_precision(a), 0));
  r.a.insert(r.a.end(), a.a.begin(), a.a.end());
  return r;
}

WittVector teichmuller(const PadicScalar& c, std::size_t length) {
  if (length == 0) throw Error(ErrorKind::LengthTooShort, "empty Witt vector");
  WittVector r;
  r.a.push_back(c);
  for (std::size_t i = 1; i < length; ++i) r.a.push_back(PadicScalar::from_int(c.p(), c.precision(), 0));
  return r;
}

PadicScalar delta_map(const PadicScalar& x) {
  const std::uint64_t p = x.p();
  const BigInt r = lift(x);
  return PadicScalar::from_big(p, x.precision() - 1, (r - bpow(r, p)) / p);
}

PadicScalar carry_polynomial(const PadicScalar& x, const PadicScalar& y) {
  const std::uint64_t p = x.p();
  const int prec = std::min(x.precision(), y.precision());
  const BigInt r = lift(x), s = lift(y);
  return PadicScalar::from_big(p, prec - 1, (bpow(r, p) + bpow(s, p) - bpow(r + s, p)) / p);
}

DeltaAxiomReport check_delta_axioms(const Context& ctx, int samples, std::uint64_t seed) {
  DeltaAxiomReport rep;
  const std::uint64_t p = ctx.p;
  const int N = ctx.N;
  const auto zero = PadicScalar::from_int(p, N, 0);
  const auto one = PadicScalar::from_int(p, N, 1);
  if (!delta_map(zero).is_zero()) rep.failures.push_back({"delta(0)=0", 0, 0});
  if (!delta_map(one).is_zero()) rep.failures.push_back({"delta(1)=0", 1, 0});

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> dist(0, ipow(p, N) - 1);
  for (int s = 0; s < samples; ++s) {
    const auto x = PadicScalar::from_big(p, N, BigInt(dist(rng)));
    const auto y = PadicScalar::from_big(p, N, BigInt(dist(rng)));
    const auto dx = delta_map(x), dy = delta_map(y);
    const auto pp = PadicScalar::from_int(p, N, static_cast<std::int64_t>(p));
    if (!(delta_map(x + y) == dx + dy + carry_polynomial(x, y)))
      rep.failures.push_back({"sum", x.signed_residue(), y.signed_residue()});
    if (!(delta_map(x * y) == pow(x, p) * dy + pow(y, p) * dx + pp * dx * dy))
      rep.failures.push_back({"product", x.signed_residue(), y.signed_residue()});
    ++rep.samples;
  }
  return rep;
}

}  // namespace deltacrys
