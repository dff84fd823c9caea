#pragma once

// Exact-rational brute force for additive series on the first jet space.
// Independent of the library: the group law comes from exp(log x + log y)
// over Q, the jet law from the ghost map, and the solver treats every
// monomial coefficient of Theta(x0, x1) as an unknown.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

using Mono = std::array<int, 4>;  // exponents of x0, x1, y0, y1
using RSeries = std::map<Mono, mpq_class>;
using Uni = std::vector<mpq_class>;  // index = degree

inline int degree(const Mono& m) { return m[0] + m[1] + m[2] + m[3]; }

inline RSeries mul(const RSeries& a, const RSeries& b, int M) {
  RSeries r;
  for (const auto& [ma, ca] : a) {
    const int da = degree(ma);
    for (const auto& [mb, cb] : b) {
      if (da + degree(mb) > M) continue;
      Mono m{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]};
      r[m] += ca * cb;
    }
  }
  for (auto it = r.begin(); it != r.end();) it = (it->second == 0) ? r.erase(it) : std::next(it);
  return r;
}

inline RSeries add(RSeries a, const RSeries& b, const mpq_class& s = 1) {
  for (const auto& [m, c] : b) {
    a[m] += s * c;
    if (a[m] == 0) a.erase(m);
  }
  return a;
}

inline RSeries monomial(Mono m, const mpq_class& c = 1) { return RSeries{{m, c}}; }

// Powers 0..M of s, truncated at total degree M.
inline std::vector<RSeries> powers(const RSeries& s, int M) {
  std::vector<RSeries> out{monomial({0, 0, 0, 0})};
  for (int k = 1; k <= M; ++k) out.push_back(mul(out.back(), s, M));
  return out;
}

// sum_k f[k] s^k for univariate f without constant term.
inline RSeries compose(const Uni& f, const RSeries& s, int M) {
  RSeries r;
  const auto pw = powers(s, M);
  for (int k = 1; k < static_cast<int>(f.size()) && k <= M; ++k)
    if (f[static_cast<std::size_t>(k)] != 0) r = add(r, pw[static_cast<std::size_t>(k)], f[static_cast<std::size_t>(k)]);
  return r;
}

inline Uni uni_mul(const Uni& a, const Uni& b, int D) {
  Uni r(static_cast<std::size_t>(D + 1), 0);
  for (int i = 0; i <= D && i < static_cast<int>(a.size()); ++i)
    for (int j = 0; i + j <= D && j < static_cast<int>(b.size()); ++j)
      r[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
  return r;
}

inline Uni uni_inverse(const Uni& a, int D) {
  Uni r(static_cast<std::size_t>(D + 1), 0);
  r[0] = 1 / a[0];
  for (int n = 1; n <= D; ++n) {
    mpq_class s = 0;
    for (int k = 1; k <= n && k < static_cast<int>(a.size()); ++k)
      s += a[static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(n - k)];
    r[static_cast<std::size_t>(n)] = -s / a[0];
  }
  return r;
}

// Compositional inverse of f = t + O(t^2).
inline Uni reversion(const Uni& f, int D) {
  Uni g(static_cast<std::size_t>(D + 1), 0);
  g[1] = 1;
  for (int n = 2; n <= D; ++n) {
    // f(g) = t + c t^n + ...; subtract c.
    Uni pw = g, acc(static_cast<std::size_t>(D + 1), 0);
    for (int k = 1; k <= n; ++k) {
      if (k > 1) pw = uni_mul(pw, g, D);
      if (k < static_cast<int>(f.size()))
        for (int i = 0; i <= n; ++i) acc[static_cast<std::size_t>(i)] += f[static_cast<std::size_t>(k)] * pw[static_cast<std::size_t>(i)];
    }
    g[static_cast<std::size_t>(n)] -= acc[static_cast<std::size_t>(n)];
  }
  return g;
}

// Logarithm of the formal group of y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
// in t = -x/y, from w = t^3 + a1 t w + a2 t^2 w + a3 w^2 + a4 t w^2 + a6 w^3.
inline Uni curve_log(const std::array<std::int64_t, 5>& a, int D) {
  const int W = D + 4;
  Uni w(static_cast<std::size_t>(W + 1), 0);
  w[3] = 1;
  for (int it = 0; it < W; ++it) {
    Uni w2 = uni_mul(w, w, W), w3 = uni_mul(w2, w, W), nw(static_cast<std::size_t>(W + 1), 0);
    nw[3] = 1;
    for (int i = 0; i + 1 <= W; ++i) nw[static_cast<std::size_t>(i + 1)] += a[0] * w[static_cast<std::size_t>(i)];
    for (int i = 0; i + 2 <= W; ++i) nw[static_cast<std::size_t>(i + 2)] += a[1] * w[static_cast<std::size_t>(i)];
    for (int i = 0; i <= W; ++i) nw[static_cast<std::size_t>(i)] += a[2] * w2[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 <= W; ++i) nw[static_cast<std::size_t>(i + 1)] += a[3] * w2[static_cast<std::size_t>(i)];
    for (int i = 0; i <= W; ++i) nw[static_cast<std::size_t>(i)] += a[4] * w3[static_cast<std::size_t>(i)];
    if (nw == w) break;
    w = nw;
  }
  // w = t^3 u; omega = (2u + t u') / (u (2 - a1 t - a3 t^3 u)) dt.
  Uni u(static_cast<std::size_t>(D + 1), 0), du(static_cast<std::size_t>(D + 1), 0);
  for (int i = 0; i <= D; ++i) u[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i + 3)];
  for (int i = 1; i <= D; ++i) du[static_cast<std::size_t>(i)] = i * u[static_cast<std::size_t>(i)];
  Uni num(static_cast<std::size_t>(D + 1), 0), den(static_cast<std::size_t>(D + 1), 0);
  for (int i = 0; i <= D; ++i) num[static_cast<std::size_t>(i)] = 2 * u[static_cast<std::size_t>(i)] + du[static_cast<std::size_t>(i)];
  den[0] = 2;
  if (D >= 1) den[1] = -a[0];
  for (int i = 0; i + 3 <= D; ++i) den[static_cast<std::size_t>(i + 3)] -= a[2] * u[static_cast<std::size_t>(i)];
  const Uni omega = uni_mul(num, uni_inverse(uni_mul(u, den, D), D), D);
  Uni log(static_cast<std::size_t>(D + 1), 0);
  for (int i = 0; i < D; ++i) log[static_cast<std::size_t>(i + 1)] = omega[static_cast<std::size_t>(i)] / (i + 1);
  return log;
}

inline Uni multiplicative_log(int D) {
  Uni log(static_cast<std::size_t>(D + 1), 0);
  for (int i = 1; i <= D; ++i) log[static_cast<std::size_t>(i)] = mpq_class((i % 2) ? 1 : -1, i);
  return log;
}

struct JetLaw {
  std::uint64_t p = 5;
  int M = 12;
  Uni log;
  RSeries J0, J1;  // in x0, x1, y0, y1
};

// F(x, y) = exp(log x + log y) evaluated at series a, b in the four variables.
inline RSeries group_law_at(const Uni& log, const RSeries& a, const RSeries& b, int M) {
  const Uni exp = reversion(log, M);
  return compose(exp, add(compose(log, a, M), compose(log, b, M)), M);
}

// J0 = F(x0, y0), J1 = (F(x0^p + p x1, y0^p + p y1) - J0^p) / p.
inline JetLaw jet_law(std::uint64_t p, int M, const Uni& log) {
  JetLaw J{p, M, log, {}, {}};
  const auto P = static_cast<int>(p);
  const RSeries x0 = monomial({1, 0, 0, 0}), y0 = monomial({0, 0, 1, 0});
  const RSeries gx = add(monomial({P, 0, 0, 0}), monomial({0, 1, 0, 0}, P));
  const RSeries gy = add(monomial({0, 0, P, 0}), monomial({0, 0, 0, 1}, P));
  J.J0 = group_law_at(log, x0, y0, M);
  RSeries top = group_law_at(log, gx, gy, M);
  RSeries pw = monomial({0, 0, 0, 0});
  for (int k = 0; k < P; ++k) pw = mul(pw, J.J0, M);
  J.J1 = add(top, pw, -1);
  for (auto& [m, c] : J.J1) c /= P;
  return J;
}

struct AnsatzResult {
  int unknowns = 0;
  int rank = 0;
  int nullity = 0;
  bool span_inside = false;   // L0 and L1 solve the system
  bool integral_law = false;  // J1 has integer coefficients
  int outside_dim = 0;        // nullity minus dim span{L0, L1}
};

// Unknown coefficients of x0^i x1^j, 1 <= i + j <= M, constrained by
// Theta(J(x, y)) = Theta(x) + Theta(y) up to total degree M.
inline AnsatzResult solve_ansatz(const JetLaw& J) {
  const int M = J.M;
  const auto P = static_cast<int>(J.p);
  std::vector<std::pair<int, int>> unknowns;
  for (int d = 1; d <= M; ++d)
    for (int j = 0; j <= d; ++j) unknowns.emplace_back(d - j, j);
  const int n = static_cast<int>(unknowns.size());

  const auto p0 = powers(J.J0, M), p1 = powers(J.J1, M);
  std::vector<RSeries> cols;
  for (const auto& [i, j] : unknowns) {
    RSeries c = mul(p0[static_cast<std::size_t>(i)], p1[static_cast<std::size_t>(j)], M);
    c = add(c, monomial({i, j, 0, 0}), -1);
    c = add(c, monomial({0, 0, i, j}), -1);
    cols.push_back(std::move(c));
  }
  std::map<Mono, std::vector<mpq_class>> rows;
  for (int k = 0; k < n; ++k)
    for (const auto& [m, c] : cols[static_cast<std::size_t>(k)]) {
      auto& r = rows[m];
      if (r.empty()) r.assign(static_cast<std::size_t>(n), 0);
      r[static_cast<std::size_t>(k)] = c;
    }

  // Coefficient vectors of L0 = log(x0) and L1 = log(x0^p + p x1).
  auto vec_of = [&](const RSeries& s) {
    std::vector<mpq_class> v(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n; ++k) {
      auto it = s.find({unknowns[static_cast<std::size_t>(k)].first, unknowns[static_cast<std::size_t>(k)].second, 0, 0});
      if (it != s.end()) v[static_cast<std::size_t>(k)] = it->second;
    }
    return v;
  };
  const auto L0 = vec_of(compose(J.log, monomial({1, 0, 0, 0}), M));
  const auto L1 = vec_of(compose(J.log, add(monomial({P, 0, 0, 0}), monomial({0, 1, 0, 0}, P)), M));

  AnsatzResult res;
  res.unknowns = n;
  res.span_inside = true;
  for (const auto& [m, r] : rows) {
    mpq_class s0 = 0, s1 = 0;
    for (int k = 0; k < n; ++k) {
      s0 += r[static_cast<std::size_t>(k)] * L0[static_cast<std::size_t>(k)];
      s1 += r[static_cast<std::size_t>(k)] * L1[static_cast<std::size_t>(k)];
    }
    if (s0 != 0 || s1 != 0) res.span_inside = false;
  }
  res.integral_law = true;
  for (const auto& [m, c] : J.J1)
    if (c.get_den() != 1) res.integral_law = false;

  // Row echelon form; stop once the rank leaves room for nothing beyond L0, L1.
  std::vector<std::vector<mpq_class>> basis;
  std::vector<int> pivots;
  for (auto& [m, r0] : rows) {
    auto r = r0;
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const auto& f = r[static_cast<std::size_t>(pivots[b])];
      if (f == 0) continue;
      const mpq_class c = f;
      for (int k = 0; k < n; ++k) r[static_cast<std::size_t>(k)] -= c * basis[b][static_cast<std::size_t>(k)];
    }
    int piv = -1;
    for (int k = 0; k < n && piv < 0; ++k)
      if (r[static_cast<std::size_t>(k)] != 0) piv = k;
    if (piv < 0) continue;
    const mpq_class inv = 1 / r[static_cast<std::size_t>(piv)];
    for (auto& x : r) x *= inv;
    basis.push_back(std::move(r));
    pivots.push_back(piv);
    if (static_cast<int>(basis.size()) == n - 2 && res.span_inside) break;
  }
  res.rank = static_cast<int>(basis.size());
  res.nullity = n - res.rank;
  // L0 and L1 are independent (their linear parts are x0 and p x1).
  res.outside_dim = res.span_inside ? res.nullity - 2 : res.nullity;
  return res;
}

}  // namespace oracle
