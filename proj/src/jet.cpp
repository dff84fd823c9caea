#include "deltacrys/jet.hpp"

#include <algorithm>

#include "deltacrys/error.hpp"
#include "deltacrys/witt.hpp"

namespace deltacrys {

std::vector<std::string> jet_variables(int n, int first) {
  std::vector<std::string> v;
  for (int i = first; i <= n + first; ++i) v.push_back("x" + std::to_string(i));
  for (int i = first; i <= n + first; ++i) v.push_back("y" + std::to_string(i));
  return v;
}

TruncatedSeries ghost_series(std::uint64_t p, const std::vector<std::string>& vars, int max_degree, int wp,
                             std::size_t off, int i) {
  TruncatedSeries g(p, vars, max_degree, wp);
  for (int j = 0; j <= i; ++j) {
    Exponents e(vars.size(), 0);
    const std::uint64_t ex = ipow(p, i - j);
    if (ex > static_cast<std::uint64_t>(max_degree)) continue;
    e[off + static_cast<std::size_t>(j)] = static_cast<int>(ex);
    g.add_term(e, PadicRational::from_int(p, wp, 1).shifted(j));
  }
  return g;
}

namespace {

int min_degree(const TruncatedSeries& s) {
  int d = s.max_degree() + 1;
  for (const auto& t : s.terms())
    if (!t.c.is_zero()) d = std::min(d, t.deg);
  return d;
}

// Evaluates polynomials in the Witt variables at series arguments.
std::vector<TruncatedSeries> evaluate_at_series(const std::vector<ExactPoly>& polys,
                                                const std::vector<TruncatedSeries>& args) {
  const auto zero = TruncatedSeries::zero_like(args.at(0));
  const std::uint64_t p = zero.p();
  const int wp = zero.working_precision();
  const auto one = TruncatedSeries::constant_like(zero, PadicRational::from_int(p, wp, 1));
  std::vector<TruncatedSeries> out;
  for (const auto& poly : polys)
    out.push_back(poly.evaluate_in<TruncatedSeries>(args, zero, one, [&](const BigInt& c) {
      return c == 0 ? zero : TruncatedSeries::constant_like(zero, PadicRational::from_big(p, wp, c));
    }));
  return out;
}

std::vector<std::string> x_variables(int n) {
  std::vector<std::string> v;
  for (int i = 0; i <= n; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

}  // namespace

std::vector<TruncatedSeries> witt_frobenius_series(const std::vector<TruncatedSeries>& a) {
  if (a.size() < 2) throw Error(ErrorKind::LengthTooShort, "Frobenius needs length >= 2");
  const std::uint64_t p = a[0].p();
  const int M = a[0].max_degree();
  // Powers a_j^{p^e} vanish once p^e times the order of a_j exceeds M.
  auto ppow = [&](const TruncatedSeries& s, int e) {
    const std::uint64_t ex = ipow(p, e);
    if (static_cast<std::uint64_t>(min_degree(s)) * ex > static_cast<std::uint64_t>(M)) return TruncatedSeries::zero_like(s);
    return s.pow(static_cast<unsigned>(ex));
  };
  std::vector<TruncatedSeries> u;
  for (std::size_t k = 0; k + 1 < a.size(); ++k) {
    TruncatedSeries acc = TruncatedSeries::zero_like(a[0]);
    for (std::size_t j = 0; j <= k + 1; ++j) acc += ppow(a[j], static_cast<int>(k + 1 - j)).shifted(static_cast<int>(j));
    for (std::size_t j = 0; j < k; ++j) acc -= ppow(u[j], static_cast<int>(k - j)).shifted(static_cast<int>(j));
    u.push_back(acc.shifted(-static_cast<int>(k)));
  }
  return u;
}

std::vector<TruncatedSeries> jet_law_from_series(const TruncatedSeries& law2, int n,
                                                 const std::vector<std::string>& vars, int max_degree) {
  if (law2.nvars() != 2) throw Error(ErrorKind::VariableMismatch, "a group law has two variables");
  if (vars.size() != 2 * static_cast<std::size_t>(n + 1))
    throw Error(ErrorKind::VariableMismatch, "jet law needs 2(n+1) variables");
  const std::uint64_t p = law2.p();
  const int wp = law2.working_precision();
  const std::size_t yoff = static_cast<std::size_t>(n + 1);
  std::vector<TruncatedSeries> z;
  for (int i = 0; i <= n; ++i) {
    const auto wx = ghost_series(p, vars, max_degree, wp, 0, i);
    const auto wy = ghost_series(p, vars, max_degree, wp, yoff, i);
    TruncatedSeries acc = law2.compose({wx, wy});
    for (int j = 0; j < i; ++j) {
      const std::uint64_t e = ipow(p, i - j);
      if (static_cast<std::uint64_t>(min_degree(z[static_cast<std::size_t>(j)])) * e >
          static_cast<std::uint64_t>(max_degree))
        continue;
      acc -= z[static_cast<std::size_t>(j)].pow(static_cast<unsigned>(e)).shifted(j);
    }
    z.push_back(acc.shifted(-i));
  }
  return z;
}

JetGroupLaw jet_group_law(const FormalGroupLaw& F, int n) {
  if (n < 0 || n > 2) throw Error(ErrorKind::InvalidArgument, "jet laws are available for n <= 2");
  JetGroupLaw J;
  J.n = n;
  J.base = F;
  J.law = jet_law_from_series(F.law, n, jet_variables(n), F.ctx.M);
  for (const auto& c : J.law)
    if (c.min_valuation() < 0)
      throw Error(ErrorKind::PrecisionExhausted, "jet law lost integrality; raise the working precision");
  return J;
}

std::vector<TruncatedSeries> jet_frobenius(const JetGroupLaw& J, int i) {
  if (i < 1 || i > J.n) throw Error(ErrorKind::InvalidArgument, "Frobenius power must be in 1..n");
  const auto& ctx = J.base.ctx;
  const auto vars = x_variables(J.n);
  std::vector<TruncatedSeries> cur;
  for (int k = 0; k <= J.n; ++k)
    cur.push_back(TruncatedSeries::variable(ctx.p, vars, ctx.M, J.base.working_precision, static_cast<std::size_t>(k)));
  for (int step = 0; step < i; ++step) {
    const int level = static_cast<int>(cur.size()) - 1;
    auto set = structure_polynomials(ctx, level);
    std::vector<TruncatedSeries> args = cur;
    for (int k = 0; k <= level; ++k) args.push_back(TruncatedSeries::zero_like(cur[0]));
    cur = evaluate_at_series(set->Frob, args);
  }
  return cur;
}

KernelLaw kernel_law(const JetGroupLaw& J) {
  KernelLaw K;
  K.n = J.n;
  const auto kvars = jet_variables(J.n - 1, 1);
  const std::size_t n1 = static_cast<std::size_t>(J.n + 1);
  std::vector<std::size_t> placement(2 * n1, 0);
  for (std::size_t j = 1; j < n1; ++j) {
    placement[j] = j - 1;
    placement[n1 + j] = (n1 - 1) + (j - 1);
  }
  for (std::size_t c = 1; c < J.law.size(); ++c)
    K.law.push_back(J.law[c].substitute_zero(0).substitute_zero(n1).embed(kvars, placement));
  return K;
}

TruncatedSeries kernel_base_law(const FormalGroupLaw& F) {
  const auto& ctx = F.ctx;
  const int wp = F.working_precision;
  const auto t1 = TruncatedSeries::variable(ctx.p, {"t1", "t2"}, ctx.M, wp, 0);
  const auto t2 = TruncatedSeries::variable(ctx.p, {"t1", "t2"}, ctx.M, wp, 1);
  const int pp = static_cast<int>(ctx.p);
  return F.law.compose({t1.scaled(pp), t2.scaled(pp)}).shifted(-1);
}

namespace {

// phi o phi o iota and phi o iota o f as series in (x1, x2).
std::pair<TruncatedSeries, TruncatedSeries> phi_fra_sides(const JetGroupLaw& J, const TruncatedSeries& f) {
  const auto& ctx = J.base.ctx;
  const int wp = J.base.working_precision;
  const std::vector<std::string> kv{"x1", "x2"};
  const auto lhs = jet_frobenius(J, 2)[0].substitute_zero(0).embed(kv, {0, 0, 1});
  // phi on J^1 has base coordinate w_1(x0, x1); iota o f = (0, f).
  const auto w1 = ghost_series(ctx.p, {"x0", "x1"}, ctx.M, wp, 0, 1);
  const auto rhs = w1.compose({TruncatedSeries::zero_like(f), f});
  return {lhs, rhs};
}

}  // namespace

TruncatedSeries lateral_frobenius(const JetGroupLaw& J) {
  if (J.n != 2) throw Error(ErrorKind::InvalidArgument, "the lateral Frobenius is computed on N^2");
  const auto& ctx = J.base.ctx;
  const int wp = J.base.working_precision;
  const std::vector<std::string> kv{"x1", "x2"};
  // Witt Frobenius of J^1(N^1) in the coordinates (x1, x2).
  auto set = structure_polynomials(ctx, 1);
  const auto u0 = TruncatedSeries::variable(ctx.p, kv, ctx.M, wp, 0);
  const auto u1 = TruncatedSeries::variable(ctx.p, kv, ctx.M, wp, 1);
  const auto zero = TruncatedSeries::zero_like(u0);
  const auto f = evaluate_at_series(set->Frob, {u0, u1, zero, zero})[0];
  const auto [lhs, rhs] = phi_fra_sides(J, f);
  const int r = residual_valuation(lhs, rhs);
  if (r < ctx.N - 2)
    throw Error(ErrorKind::IdentityViolation,
                "lateral Frobenius fails phi o phi o iota = phi o iota o f (residual valuation " + std::to_string(r) + ")");
  return f;
}

bool IdentityReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass; });
}

IdentityCheck make_check(std::string name, const TruncatedSeries& a, const TruncatedSeries& b, int threshold) {
  IdentityCheck c;
  c.name = std::move(name);
  c.residual_valuation = residual_valuation(a, b);
  c.threshold = threshold;
  c.pass = c.residual_valuation >= threshold;
  return c;
}

IdentityReport verify_jet_identities(const FormalGroupLaw& F) {
  const auto& ctx = F.ctx;
  const int wp = F.working_precision;
  const int thr = ctx.N - 2;
  IdentityReport rep;

  const auto J2 = jet_group_law(F, 2);
  const auto f = lateral_frobenius(J2);
  const auto [lhs, rhs] = phi_fra_sides(J2, f);
  rep.checks.push_back(make_check("phi-fra", lhs, rhs, thr));

  // N^2 with the restricted law against the jet law of N^1.
  const auto K = kernel_law(J2);
  const auto NJ = jet_law_from_series(kernel_base_law(F), 1, jet_variables(1, 1), ctx.M);
  IdentityCheck ident = make_check("kernel-identification", K.law[0], NJ[0], thr);
  const IdentityCheck second = make_check("kernel-identification", K.law[1], NJ[1], thr);
  ident.residual_valuation = std::min(ident.residual_valuation, second.residual_valuation);
  ident.pass = ident.pass && second.pass;
  rep.checks.push_back(ident);

  // phi o iota on N^1 is x1 -> p x1, and it carries the kernel law to F.
  const auto J1 = jet_group_law(F, 1);
  const auto phi = jet_frobenius(J1, 1)[0].substitute_zero(0).embed({"x1"}, {0, 0});
  const auto x1 = TruncatedSeries::variable(ctx.p, {"x1"}, ctx.M, wp, 0);
  IdentityCheck mulp = make_check("phi-iota-is-p", phi, x1.scaled(static_cast<std::int64_t>(ctx.p)), thr);
  const auto K1 = kernel_law(J1).law[0];
  const auto a = TruncatedSeries::variable(ctx.p, {"x1", "y1"}, ctx.M, wp, 0);
  const auto b = TruncatedSeries::variable(ctx.p, {"x1", "y1"}, ctx.M, wp, 1);
  const int pp = static_cast<int>(ctx.p);
  const IdentityCheck hom = make_check("phi-iota-is-p", K1.scaled(pp), F.law.compose({a.scaled(pp), b.scaled(pp)}), thr);
  mulp.residual_valuation = std::min(mulp.residual_valuation, hom.residual_valuation);
  mulp.pass = mulp.pass && hom.pass;
  rep.checks.push_back(mulp);
  return rep;
}

}  // namespace deltacrys
