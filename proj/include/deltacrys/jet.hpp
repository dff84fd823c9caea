#pragma once

#include <string>
#include <vector>

#include "deltacrys/formalgroup.hpp"
#include "deltacrys/series.hpp"

namespace deltacrys {

/// Variable names x0..xn, y0..yn (or starting at `first`).
std::vector<std::string> jet_variables(int n, int first = 0);

/// w_i = sum_j p^j v_{offset+j}^{p^{i-j}} as a series in `vars`.
TruncatedSeries ghost_series(std::uint64_t p, const std::vector<std::string>& vars, int max_degree,
                             int working_precision, std::size_t offset, int i);

/// Witt Frobenius of the vector (a_0..a_n) of series with zero constant
/// term: n series u with w_k(u) = w_{k+1}(a), solved level by level.
std::vector<TruncatedSeries> witt_frobenius_series(const std::vector<TruncatedSeries>& a);

/// Law of J^n G in Witt coordinates: component i is a series in
/// (x_0..x_n, y_0..y_n).
struct JetGroupLaw {
  int n = 0;
  FormalGroupLaw base;
  std::vector<TruncatedSeries> law;
};

/// Law of N^n G in coordinates (x_1..x_n, y_1..y_n).
struct KernelLaw {
  int n = 0;
  std::vector<TruncatedSeries> law;
};

/// Witt coordinates z of F(x, y) in W_n: z is determined by
/// w_i(z) = F(w_i(x), w_i(y)), solved level by level. `law2` is any
/// two-variable law with Z_p coefficients; `vars` lists x_0..x_n then y_0..y_n.
std::vector<TruncatedSeries> jet_law_from_series(const TruncatedSeries& law2, int n,
                                                 const std::vector<std::string>& vars, int max_degree);

/// Requires n <= 2.
JetGroupLaw jet_group_law(const FormalGroupLaw& F, int n);

/// Coordinates of phi^i: J^n -> J^{n-i} as series in x_0..x_n (y's absent).
/// The base coordinate is the ghost polynomial w_i.
std::vector<TruncatedSeries> jet_frobenius(const JetGroupLaw& J, int i);

/// Substitutes x_0 = y_0 = 0 and drops those variables.
KernelLaw kernel_law(const JetGroupLaw& J);

/// Law of N^1 G in its coordinate: F(p a, p b)/p, variables (t1, t2).
TruncatedSeries kernel_base_law(const FormalGroupLaw& F);

/// Lateral Frobenius N^2 -> N^1 transported from the Witt Frobenius of
/// J^1(N^1); validated against phi o phi o iota = phi o iota o f and throws
/// IdentityViolation if that fails. Series in (x1, x2).
TruncatedSeries lateral_frobenius(const JetGroupLaw& J);

struct IdentityCheck {
  std::string name;
  int residual_valuation = 0;  // PadicRational::kExact when the difference vanishes exactly
  int threshold = 0;
  bool pass = false;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool ok() const;
};

/// phi-fra, the identification N^2 = J^1(N^1), and phi o iota = p on N^1,
/// each required to hold with residual valuation >= N - 2.
IdentityReport verify_jet_identities(const FormalGroupLaw& F);

IdentityCheck make_check(std::string name, const TruncatedSeries& a, const TruncatedSeries& b, int threshold);

}  // namespace deltacrys
