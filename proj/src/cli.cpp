#include "deltacrys/cli.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "deltacrys/error.hpp"
#include "json.hpp"

namespace deltacrys::cli {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PValue, unit, valuation, precision)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CheckRow, name, status, residual_valuation, precision)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Ranks, X1, X2, X_prim)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(KedlayaSummary, matrix, trace, det)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AnalysisReport, schema, p, curve, a_p, ordinary, ranks, m_u, delta_rank, is_CL,
                                   filtration_dims, frobenius_matrix, kedlaya, checks)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(VerifyReport, schema, p, group, checks)

namespace {

constexpr int kExact = PadicRational::kExact;

CheckRow row(const std::string& name, bool pass, int residual, int precision) {
  return {name, pass ? "pass" : "fail", residual, precision};
}

CheckRow row(const IdentityCheck& c) { return row(c.name, c.pass, c.residual_valuation, c.threshold); }

std::string residual_text(int r) { return r >= kExact ? "exact" : std::to_string(r); }

std::vector<std::vector<PValue>> matrix_values(const PMatrix& m, int cap) {
  std::vector<std::vector<PValue>> out;
  for (const auto& r : m) {
    out.emplace_back();
    for (const auto& x : r) out.back().push_back(to_pvalue(x, cap));
  }
  return out;
}

FormalGroupLaw make_group(const Config& cfg, const Context& ctx) {
  if (cfg.group == "ga") return additive_group(ctx);
  if (cfg.group == "gm") return multiplicative_group(ctx);
  if (cfg.group == "curve") return formal_group_from_curve(WeierstrassCurve::parse(ctx, cfg.curve));
  throw Error(ErrorKind::InvalidArgument, "unknown group '" + cfg.group + "' (expected ga, gm or curve)");
}

// Psi_1 integrality and additivity under the kernel law F(pa, pb)/p.
void fundamental_checks(const FormalGroupLaw& F, std::vector<CheckRow>& out) {
  const int N = F.ctx.N;
  try {
    auto psi = fundamental_character(F);
    out.push_back(row("psi1-integrality", true, psi.series.min_valuation(), 0));
    auto FN = kernel_base_law(F);
    const auto& v = FN.variables();
    const int r = residual_valuation(psi.series.compose({FN}), psi.series.embed(v, {0}) + psi.series.embed(v, {1}));
    out.push_back(row("psi1-additivity", r >= N - 2, r, N - 2));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::IntegralityViolation) throw;
    out.push_back(row("psi1-integrality", false, -1, 0));
  }
}

void diff_checks(const FormalGroupLaw& F, const DeltaCharacter& th, const std::string& suffix,
                 std::vector<CheckRow>& out) {
  const auto rep = verify_diff_relation(F, th);
  auto a = row(rep.first);
  a.name = "diff-1" + suffix;
  auto b = row(rep.second);
  b.name = "diff-2" + suffix;
  out.push_back(a);
  out.push_back(b);
}

PadicRational det_of(const PMatrix& m) {
  if (m.size() == 1) return m[0][0];
  return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

}  // namespace

PValue to_pvalue(const PadicRational& x, int cap) {
  if (x.is_zero() || x.valuation() >= cap) {
    const int w = std::min(cap, x.valuation());
    return {0, w, w};
  }
  const auto y = x.with_absolute_precision(cap);
  return {y.signed_unit(), y.valuation(), y.absolute_precision()};
}

std::string to_string(const PValue& v, std::uint64_t p) {
  const std::string ps = std::to_string(p);
  if (v.unit == 0) return "O(" + ps + "^" + std::to_string(v.precision) + ")";
  std::string s = std::to_string(v.unit);
  if (v.valuation != 0) s += "*" + ps + "^" + std::to_string(v.valuation);
  return s + " + O(" + ps + "^" + std::to_string(v.precision) + ")";
}

bool AnalysisReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.status == "pass"; });
}

bool VerifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.status == "pass"; });
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::PrecisionExhausted:
    case ErrorKind::AmbiguousRank:
      return kPrecisionExhausted;
    case ErrorKind::IdentityViolation:
    case ErrorKind::IntegralityViolation:
    case ErrorKind::RankMismatch:
      return kCheckFailure;
    default:
      return kBadInput;
  }
}

Context context_for(const Config& cfg, int default_degree) {
  return Context::make(cfg.p, cfg.prec, cfg.deg > 0 ? cfg.deg : default_degree);
}

AnalysisReport cmd_analyze(const Config& cfg) {
  const Context ctx = context_for(cfg, 35);
  const auto E = WeierstrassCurve::parse(ctx, cfg.curve);
  const int N = ctx.N;
  AnalysisReport rep;
  rep.p = ctx.p;
  rep.curve = E.to_string();
  const auto inv = count_points_ap(E);
  rep.a_p = inv.a_p;
  rep.ordinary = inv.ordinary;

  // Jet identities are decided at degree 12; the characters need the full M.
  const auto small = formal_group_from_curve(WeierstrassCurve::parse(Context::make(ctx.p, N, std::min(ctx.M, 12)), cfg.curve));
  for (const auto& c : verify_jet_identities(small).checks) rep.checks.push_back(row(c));
  fundamental_checks(small, rep.checks);

  const auto F = formal_group_from_curve(E);
  const auto S = character_suite(F);
  rep.checks.push_back(row("rank-stability", true, kExact, N - 1));
  const auto sp = splitting_numbers_and_rank(S);
  const auto D = isocrystal_data(S);
  rep.ranks = {sp.ranks_Xn[0], sp.ranks_Xn[1], S.primitive.rank};
  rep.m_u = D.m_u;
  rep.delta_rank = D.hdelta_rank;
  rep.is_CL = D.is_CL;
  rep.filtration_dims = D.filtration_dims;
  rep.frobenius_matrix = matrix_values(D.frobenius_matrix, D.precision);

  for (std::size_t i = 0; i < S.primitive.basis.size(); ++i)
    diff_checks(F, S.primitive.basis[i], S.primitive.basis.size() > 1 ? "[" + std::to_string(i) + "]" : "", rep.checks);

  const auto& fd = D.filtration_dims;
  const bool stable = D.m_u >= 1 && static_cast<int>(fd.size()) > D.m_u &&
                      fd[static_cast<std::size_t>(D.m_u - 1)] == fd[static_cast<std::size_t>(D.m_u)];
  rep.checks.push_back(row("filtration-stable", stable, kExact, 0));
  rep.checks.push_back(row("delta-rank-bounds", D.hdelta_rank >= 1 && D.hdelta_rank <= 2, kExact, 0));
  const auto det = det_of(D.frobenius_matrix);
  rep.checks.push_back(row("f-star-invertible", !det.is_zero() && det.valuation() < D.precision, det.valuation(), D.precision));
  const auto span = order_one_span_identity(S);
  rep.checks.push_back(row("order-one-span", span.pass(), kExact, 0));

  const auto Fm = kedlaya_frobenius(E);
  const auto cp = char_poly(Fm.entries);
  const int W = max_precision(ctx.p);
  const auto trace = -cp[1];
  const int rt = (trace - PadicRational::from_int(ctx.p, W, inv.a_p)).valuation();
  const int rd = (cp[0] - PadicRational::from_int(ctx.p, W, static_cast<std::int64_t>(ctx.p))).valuation();
  rep.checks.push_back(row("kedlaya-trace", rt >= N - 2, rt, N - 2));
  rep.checks.push_back(row("kedlaya-det", rd >= N - 2, rd, N - 2));
  rep.kedlaya = {matrix_values(Fm.entries, Fm.precision), to_pvalue(trace, Fm.precision), to_pvalue(cp[0], Fm.precision)};

  for (const auto& c : compare_isocrystals(D, Fm, inv).checks)
    rep.checks.push_back(row(c.name, c.pass, c.residual_valuation, c.precision));
  return rep;
}

VerifyReport cmd_verify(const Config& cfg) {
  const Context ctx = context_for(cfg, 12);
  VerifyReport rep;
  rep.p = ctx.p;
  rep.group = cfg.group;
  const auto F = make_group(cfg, ctx);
  for (const auto& c : verify_jet_identities(F).checks) rep.checks.push_back(row(c));
  fundamental_checks(F, rep.checks);
  const auto axioms = check_delta_axioms(ctx, 500, cfg.seed);
  rep.checks.push_back(row("delta-axioms", axioms.ok(), axioms.ok() ? kExact : 0, ctx.N - 1));
  const auto L = solve_character_lattice(F, 1);
  for (std::size_t i = 0; i < L.basis.size(); ++i)
    diff_checks(F, L.basis[i], L.basis.size() > 1 ? "[" + std::to_string(i) + "]" : "", rep.checks);
  return rep;
}

// ---- Witt calculator ----

namespace {

class WittParser {
 public:
  WittParser(const Context& ctx, const std::string& s) : ctx_(ctx), s_(s) {}

  WittVector parse() {
    auto v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError, what + " at offset " + std::to_string(i_));
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  static void same_length(const WittVector& a, const WittVector& b) {
    if (a.length() != b.length())
      throw Error(ErrorKind::LengthMismatch, "operands have lengths " + std::to_string(a.length()) + " and " +
                                                 std::to_string(b.length()));
  }

  WittVector expr() {
    auto v = term();
    while (eat('+')) {
      auto w = term();
      same_length(v, w);
      v = witt_add(ctx_, v, w);
    }
    return v;
  }
  WittVector term() {
    auto v = unary();
    while (eat('*')) {
      auto w = unary();
      same_length(v, w);
      v = witt_mul(ctx_, v, w);
    }
    return v;
  }
  WittVector unary() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[i_];
    if (c == 'F' || c == 'T' || c == 'V') {
      ++i_;
      expect('(');
      auto v = expr();
      expect(')');
      if (c == 'V') return witt_verschiebung(v);
      if (v.length() < 2) throw Error(ErrorKind::LengthTooShort, std::string(1, c) + " needs length >= 2");
      return c == 'F' ? witt_frobenius(ctx_, v) : witt_truncate(v);
    }
    if (eat('(')) {
      auto v = expr();
      expect(')');
      return v;
    }
    if (eat('[')) {
      std::vector<std::int64_t> comps;
      do {
        skip();
        const std::size_t start = i_;
        if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) ++i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (i_ == start || !std::isdigit(static_cast<unsigned char>(s_[i_ - 1]))) fail("expected an integer");
        try {
          comps.push_back(std::stoll(s_.substr(start, i_ - start)));
        } catch (const std::out_of_range&) {
          fail("integer out of range");
        }
      } while (eat(','));
      expect(']');
      return witt_from_ints(ctx_, comps);
    }
    fail("expected a literal, F, T, V or '('");
  }

  const Context& ctx_;
  const std::string& s_;
  std::size_t i_ = 0;
};

}  // namespace

std::string WittResult::text() const {
  std::string g = "(";
  for (std::size_t i = 0; i < ghost.size(); ++i) g += (i ? ", " : "") + ghost[i].str();
  return value.to_string() + "\nghost " + g + ")";
}

WittResult cmd_witt(const Config& cfg, const std::string& expr) {
  const Context ctx = context_for(cfg, 12);
  WittResult r;
  r.value = WittParser(ctx, expr).parse();
  BigInt mod = 1;
  for (int i = 0; i < ctx.N; ++i) mod *= ctx.p;
  for (const auto& g : ghost(r.value, ctx.p)) {
    BigInt x = g % mod;
    if (x < 0) x += mod;
    if (2 * x > mod) x -= mod;
    r.ghost.push_back(x);
  }
  return r;
}

std::string cmd_characters(const Config& cfg) {
  const Context ctx = context_for(cfg, cfg.order >= 2 ? 35 : 12);
  const auto F = make_group(cfg, ctx);
  const auto L = solve_character_lattice(F, cfg.order);
  nlohmann::json j;
  j["schema"] = 1;
  j["p"] = ctx.p;
  j["group"] = cfg.group;
  j["order"] = L.order;
  j["rank"] = L.rank;
  j["divisors"] = L.divisors;
  std::ostringstream os;
  os << to_string(F.kind) << " order " << L.order << ": rank " << L.rank << "\n";
  for (const auto& th : L.basis) {
    nlohmann::json g;
    std::vector<PValue> c;
    os << "  c = (";
    for (std::size_t i = 0; i < th.c.size(); ++i) {
      c.push_back(to_pvalue(th.c[i], th.precision));
      os << (i ? ", " : "") << to_string(c.back(), ctx.p);
    }
    const auto gamma = differential_gamma(F, th).gamma;
    os << ")  gamma = " << to_string(to_pvalue(gamma, th.precision), ctx.p) << "\n";
    g["c"] = c;
    g["gamma"] = to_pvalue(gamma, th.precision);
    j["generators"].push_back(g);
  }
  return cfg.json ? j.dump(2) : os.str();
}

std::string cmd_kedlaya(const Config& cfg) {
  const Context ctx = context_for(cfg, 12);
  const auto E = WeierstrassCurve::parse(ctx, cfg.curve);
  const auto Fm = kedlaya_frobenius(E);
  const auto cp = char_poly(Fm.entries);
  const auto m = matrix_values(Fm.entries, Fm.precision);
  if (cfg.json) {
    nlohmann::json j;
    j["schema"] = 1;
    j["p"] = ctx.p;
    j["model"] = Fm.curve.to_string();
    j["matrix"] = m;
    j["trace"] = to_pvalue(-cp[1], Fm.precision);
    j["det"] = to_pvalue(cp[0], Fm.precision);
    j["loss"] = Fm.loss;
    return j.dump(2);
  }
  std::ostringstream os;
  os << "model " << Fm.curve.to_string() << "\n";
  for (const auto& r : m) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "  " : "") << to_string(r[i], ctx.p);
    os << "\n";
  }
  os << "trace " << to_string(to_pvalue(-cp[1], Fm.precision), ctx.p) << "\n";
  os << "det   " << to_string(to_pvalue(cp[0], Fm.precision), ctx.p) << "\n";
  return os.str();
}

std::string to_text(const AnalysisReport& r) {
  std::ostringstream os;
  os << "curve " << r.curve << " at p=" << r.p << ": a_p=" << r.a_p << (r.ordinary ? " (ordinary)" : " (supersingular)")
     << "\n";
  os << "ranks X1=" << r.ranks.X1 << " X2=" << r.ranks.X2 << " X_prim=" << r.ranks.X_prim << "  m_u=" << r.m_u
     << " delta_rank=" << r.delta_rank << " CL=" << (r.is_CL ? "yes" : "no") << "\n";
  os << "filtration";
  for (int d : r.filtration_dims) os << " " << d;
  os << "\nf* matrix\n";
  for (const auto& row : r.frobenius_matrix) {
    os << " ";
    for (const auto& x : row) os << " " << to_string(x, r.p);
    os << "\n";
  }
  os << "crystalline Frobenius\n";
  for (const auto& row : r.kedlaya.matrix) {
    os << " ";
    for (const auto& x : row) os << " " << to_string(x, r.p);
    os << "\n";
  }
  os << "trace " << to_string(r.kedlaya.trace, r.p) << "  det " << to_string(r.kedlaya.det, r.p) << "\n";
  for (const auto& c : r.checks)
    os << (c.status == "pass" ? "PASS " : "FAIL ") << c.name << "  residual " << residual_text(c.residual_valuation)
       << " / " << c.precision << "\n";
  return os.str();
}

std::string to_text(const VerifyReport& r) {
  std::ostringstream os;
  os << "group " << r.group << " at p=" << r.p << "\n";
  for (const auto& c : r.checks)
    os << (c.status == "pass" ? "PASS " : "FAIL ") << c.name << "  residual " << residual_text(c.residual_valuation)
       << " / " << c.precision << "\n";
  return os.str();
}

std::string to_json(const AnalysisReport& r) { return nlohmann::json(r).dump(2); }
std::string to_json(const VerifyReport& r) { return nlohmann::json(r).dump(2); }

AnalysisReport analysis_from_json(const std::string& s) {
  try {
    return nlohmann::json::parse(s).get<AnalysisReport>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

VerifyReport verify_from_json(const std::string& s) {
  try {
    return nlohmann::json::parse(s).get<VerifyReport>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

}  // namespace deltacrys::cli
