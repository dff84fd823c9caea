#include "deltacrys/formalgroup.hpp"

#include <cmath>
#include <sstream>

#include "deltacrys/error.hpp"

namespace deltacrys {

namespace {

int floor_log(std::uint64_t p, int m) {
  int k = 0;
  std::uint64_t v = p;
  while (v <= static_cast<std::uint64_t>(m)) {
    v *= p;
    ++k;
  }
  return k;
}

std::int64_t mod_int(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
  std::int64_t r = 1;
  b = mod_int(b, m);
  while (e) {
    if (e & 1) r = static_cast<std::int64_t>(static_cast<__int128>(r) * b % m);
    b = static_cast<std::int64_t>(static_cast<__int128>(b) * b % m);
    e >>= 1;
  }
  return r;
}

}  // namespace

// ------------------------------------------------------------------ curves

WeierstrassCurve WeierstrassCurve::make(const Context& ctx, std::int64_t a1, std::int64_t a2, std::int64_t a3,
                                        std::int64_t a4, std::int64_t a6) {
  WeierstrassCurve E;
  E.a1 = a1;
  E.a2 = a2;
  E.a3 = a3;
  E.a4 = a4;
  E.a6 = a6;
  E.ctx = ctx;
  const BigInt d = E.discriminant();
  if (d % ctx.p == 0)
    throw Error(ErrorKind::BadReduction, "p=" + std::to_string(ctx.p) + " divides the discriminant of " + E.to_string());
  return E;
}

WeierstrassCurve WeierstrassCurve::short_form(const Context& ctx, std::int64_t a4, std::int64_t a6) {
  return make(ctx, 0, 0, 0, a4, a6);
}

WeierstrassCurve WeierstrassCurve::parse(const Context& ctx, const std::string& text) {
  std::vector<std::int64_t> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    try {
      v.push_back(std::stoll(item, &pos));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad curve coefficient '" + item + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size()) throw Error(ErrorKind::ParseError, "bad curve coefficient '" + item + "'");
  }
  if (v.size() == 2) return short_form(ctx, v[0], v[1]);
  if (v.size() == 5) return make(ctx, v[0], v[1], v[2], v[3], v[4]);
  throw Error(ErrorKind::ParseError, "curve needs 2 or 5 comma-separated integers, got '" + text + "'");
}

BigInt WeierstrassCurve::discriminant() const {
  const BigInt A1 = a1, A2 = a2, A3 = a3, A4 = a4, A6 = a6;
  const BigInt b2 = A1 * A1 + 4 * A2;
  const BigInt b4 = 2 * A4 + A1 * A3;
  const BigInt b6 = A3 * A3 + 4 * A6;
  const BigInt b8 = A1 * A1 * A6 + 4 * A2 * A6 - A1 * A3 * A4 + A2 * A3 * A3 - A4 * A4;
  return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

WeierstrassCurve WeierstrassCurve::completed_square_model() const {
  const std::int64_t b2 = a1 * a1 + 4 * a2;
  const std::int64_t b4 = 2 * a4 + a1 * a3;
  const std::int64_t b6 = a3 * a3 + 4 * a6;
  return make(ctx, 0, b2, 0, 8 * b4, 16 * b6);
}

std::string WeierstrassCurve::to_string() const {
  std::ostringstream os;
  os << a1 << "," << a2 << "," << a3 << "," << a4 << "," << a6;
  return os.str();
}

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::Additive: return "additive";
    case GroupKind::Multiplicative: return "multiplicative";
    case GroupKind::Elliptic: return "elliptic";
  }
  return "unknown";
}

// ------------------------------------------------------------------ laws

int working_precision_for(const Context& ctx) { return working_precision_for(ctx, ctx.M); }

int working_precision_for(const Context& ctx, int degree) {
  return std::min(max_precision(ctx.p), ctx.N + floor_log(ctx.p, degree) + 2);
}

TruncatedSeries FormalGroupLaw::t_variable() const {
  return TruncatedSeries::variable(ctx.p, {"t"}, ctx.M, working_precision, 0);
}

namespace {

TruncatedSeries two_var(const Context& ctx, int wp, std::size_t i) {
  return TruncatedSeries::variable(ctx.p, {"t1", "t2"}, ctx.M, wp, i);
}

PadicRational num(const Context& ctx, int wp, std::int64_t v) {
  return v == 0 ? PadicRational::exact_zero(ctx.p) : PadicRational::from_int(ctx.p, wp, v);
}

}  // namespace

FormalGroupLaw additive_group(const Context& ctx) {
  FormalGroupLaw F;
  F.kind = GroupKind::Additive;
  F.ctx = ctx;
  F.working_precision = working_precision_for(ctx);
  F.law = two_var(ctx, F.working_precision, 0) + two_var(ctx, F.working_precision, 1);
  F.log = F.t_variable();
  F.exp = F.t_variable();
  return F;
}

FormalGroupLaw multiplicative_group(const Context& ctx) {
  FormalGroupLaw F;
  F.kind = GroupKind::Multiplicative;
  F.ctx = ctx;
  F.working_precision = working_precision_for(ctx);
  const int wp = F.working_precision;
  auto t1 = two_var(ctx, wp, 0), t2 = two_var(ctx, wp, 1);
  F.law = t1 + t2 + t1 * t2;
  TruncatedSeries lg(ctx.p, {"t"}, ctx.M, wp);
  for (int k = 1; k <= ctx.M; ++k)
    lg.add_term({k}, PadicRational::from_fraction(ctx.p, wp, (k % 2) ? 1 : -1, k));
  F.log = lg;
  F.exp = lg.reversion();
  return F;
}

FormalGroupLaw formal_group_from_curve(const WeierstrassCurve& E) {
  const Context& ctx = E.ctx;
  if (ctx.M < 4) throw Error(ErrorKind::InvalidArgument, "formal group of a curve needs M >= 4");
  FormalGroupLaw F;
  F.kind = GroupKind::Elliptic;
  F.ctx = ctx;
  F.curve = E;
  F.working_precision = working_precision_for(ctx);
  const int wp = F.working_precision;
  const int M = ctx.M;
  const int Mi = M + 3;
  const std::uint64_t p = ctx.p;

  // w = t^3 + a1 t w + a2 t^2 w + a3 w^2 + a4 t w^2 + a6 w^3, by fixed point.
  const auto t = TruncatedSeries::variable(p, {"t"}, Mi, wp, 0);
  const auto t3 = t.pow(3);
  TruncatedSeries w = t3;
  for (int iter = 0; iter < Mi; ++iter) {
    const auto w2 = w * w;
    TruncatedSeries next = t3 + (t * w).scaled(E.a1) + (t * t * w).scaled(E.a2) + w2.scaled(E.a3) +
                           (t * w2).scaled(E.a4) + (w2 * w).scaled(E.a6);
    if ((next - w).is_zero()) {
      w = next;
      break;
    }
    w = next;
  }

  // u = w / t^3 and omega/dt = (2 + t u'/u) / (2 - a1 t - a3 w).
  TruncatedSeries u(p, {"t"}, M, wp);
  for (const auto& term : w.terms()) {
    const int k = w.exponents(term.key)[0];
    if (k >= 3) u.add_term({k - 3}, term.c);
  }
  const auto tm = TruncatedSeries::variable(p, {"t"}, M, wp, 0);
  const auto wm = w.truncated(M);
  const auto two = TruncatedSeries::constant_like(tm, num(ctx, wp, 2));
  const auto numer = two + tm * u.derivative(0) * u.inverse();
  const auto denom = two - tm.scaled(E.a1) - wm.scaled(E.a3);
  const auto omega = numer * denom.inverse();
  F.log = omega.integral(0);
  F.exp = F.log.reversion();
  F.w = wm;

  // Group law through the chord: lambda = (w(t2) - w(t1))/(t2 - t1), nu = w(t1) - lambda t1.
  auto t1 = two_var(ctx, wp, 0), t2 = two_var(ctx, wp, 1);
  TruncatedSeries lambda = TruncatedSeries::zero_like(t1);
  for (const auto& term : w.terms()) {
    const int n = w.exponents(term.key)[0];
    if (n - 1 > M) continue;
    for (int j = 0; j <= n - 1; ++j) lambda.add_term({j, n - 1 - j}, term.c);
  }
  const auto w1 = wm.embed({"t1", "t2"}, {0});
  const auto nu = w1 - lambda * t1;
  const auto l2 = lambda * lambda;
  const auto ln = lambda * nu;
  // Third root of the cubic cut out by w = lambda t + nu.
  const auto top = lambda.scaled(E.a1) + nu.scaled(E.a2) + l2.scaled(E.a3) + ln.scaled(2 * E.a4) +
                   (l2 * nu).scaled(3 * E.a6);
  const auto bottom = TruncatedSeries::constant_like(t1, num(ctx, wp, 1)) + lambda.scaled(E.a2) +
                      l2.scaled(E.a4) + (l2 * lambda).scaled(E.a6);
  const auto sum3 = -t1 - t2 - top * bottom.inverse();
  // Inversion i(t) = -t / (1 - a1 t - a3 w(t)).
  const auto one = TruncatedSeries::constant_like(tm, num(ctx, wp, 1));
  const auto inv = -(tm * (one - tm.scaled(E.a1) - wm.scaled(E.a3)).inverse());
  F.law = inv.compose({sum3});
  return F;
}

std::pair<TruncatedSeries, TruncatedSeries> formal_log_exp(const FormalGroupLaw& F) {
  const auto fx = F.law.derivative(0).substitute_zero(0).embed({"t"}, {0, 0});
  const auto lg = fx.inverse().integral(0);
  return {lg, lg.reversion()};
}

std::vector<PadicRational> log_coefficients(const FormalGroupLaw& F, int degree, int precision) {
  const std::uint64_t p = F.ctx.p;
  std::vector<PadicRational> c(static_cast<std::size_t>(degree) + 1, PadicRational::exact_zero(p));
  if (degree < 1) return c;
  switch (F.kind) {
    case GroupKind::Additive:
      c[1] = PadicRational::from_int(p, precision, 1);
      return c;
    case GroupKind::Multiplicative:
      for (int k = 1; k <= degree; ++k) c[static_cast<std::size_t>(k)] = PadicRational::from_fraction(p, precision, (k % 2) ? 1 : -1, k);
      return c;
    case GroupKind::Elliptic:
      break;
  }
  if (!F.curve || !F.curve->is_y2_eq_cubic()) {
    if (degree > F.log.max_degree())
      throw Error(ErrorKind::InvalidArgument, "closed-form log coefficients need a model with a1 = a3 = 0");
    for (int k = 1; k <= degree; ++k) c[static_cast<std::size_t>(k)] = F.log.coeff({k});
    return c;
  }
  // For y^2 = f(x): the t^{2m+1} coefficient is [x^{2m}] f^m / (2m+1).
  const int K = std::min(max_precision(p), precision + floor_log(p, degree));
  const std::uint64_t mod = ipow(p, K);
  auto red = [&](std::int64_t v) { return static_cast<std::uint64_t>(mod_int(v, static_cast<std::int64_t>(mod))); };
  const std::vector<std::uint64_t> f = {red(F.curve->a6), red(F.curve->a4), red(F.curve->a2), 1};
  std::vector<std::uint64_t> pw = {1};
  for (int m = 0; 2 * m + 1 <= degree; ++m) {
    if (m > 0) {
      std::vector<std::uint64_t> next(pw.size() + 3, 0);
      for (std::size_t i = 0; i < pw.size(); ++i) {
        if (pw[i] == 0) continue;
        for (std::size_t j = 0; j < 4; ++j)
          next[i + j] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(pw[i]) * f[j] + next[i + j]) % mod);
      }
      pw = std::move(next);
    }
    const auto numer = PadicScalar::from_big(p, K, BigInt(pw[static_cast<std::size_t>(2 * m)]));
    c[static_cast<std::size_t>(2 * m + 1)] =
        PadicRational::from_scalar(numer) / PadicRational::from_int(p, precision + 2, 2 * m + 1);
  }
  return c;
}

TruncatedSeries multiplication_by(const FormalGroupLaw& F, int m) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "multiplication-by-m needs m >= 1");
  const auto t = F.t_variable();
  TruncatedSeries acc = t;
  for (int k = 1; k < m; ++k) acc = F.law.compose({acc, t});
  return acc;
}

CurveInvariants count_points_ap(const WeierstrassCurve& E) {
  const std::int64_t p = static_cast<std::int64_t>(E.ctx.p);
  if (p > 100000) throw Error(ErrorKind::InvalidArgument, "brute-force point count limited to p <= 10^5");
  if (E.discriminant() % p == 0) throw Error(ErrorKind::BadReduction, "bad reduction");
  std::int64_t count = 1;  // point at infinity
  for (std::int64_t x = 0; x < p; ++x) {
    const std::int64_t b = mod_int(E.a1 * x + E.a3, p);
    const std::int64_t rhs = mod_int(mod_int(mod_int(x * x, p) * x, p) + mod_int(E.a2 * mod_int(x * x, p), p) +
                                         mod_int(E.a4 * x, p) + mod_int(E.a6, p),
                                     p);
    const std::int64_t disc = mod_int(b * b + 4 * rhs, p);
    if (disc == 0)
      count += 1;
    else
      count += powmod(disc, (p - 1) / 2, p) == 1 ? 2 : 0;
  }
  CurveInvariants inv;
  inv.point_count = count;
  inv.a_p = p + 1 - count;
  inv.ordinary = mod_int(inv.a_p, p) != 0;
  if (static_cast<double>(inv.a_p * inv.a_p) > 4.0 * static_cast<double>(p))
    throw Error(ErrorKind::IdentityViolation, "Hasse bound violated");
  return inv;
}

}  // namespace deltacrys
