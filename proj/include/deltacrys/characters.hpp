#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "deltacrys/formalgroup.hpp"
#include "deltacrys/jet.hpp"
#include "deltacrys/series.hpp"

namespace deltacrys {

using CVector = std::vector<PadicRational>;
using PMatrix = std::vector<std::vector<PadicRational>>;

/// Theta = sum_i c_i L_i with L_i = log(w_i(x_0..x_i)).
/// Invariant: every coefficient of `series` is p-integral.
struct DeltaCharacter {
  CVector c;
  int order = 0;
  TruncatedSeries series;  // variables x0..x_order
  int precision = 0;
};

struct CharacterLattice {
  int order = 0;
  int rank = 0;
  std::vector<DeltaCharacter> basis;
  /// c-vectors (0, c_0..c_{n-1}) of the phi*-pullbacks of order n-1 characters.
  std::vector<CVector> shift_relations;
  /// Elementary divisor valuations of the integrality constraints, one per
  /// column; a direction is a character iff its divisor is >= 0.
  std::vector<int> divisors;
};

enum class KernelOrigin { IotaStar, PhiStar, Fundamental, LateralImage };

std::string to_string(KernelOrigin o);

/// A homomorphism N^n G -> G_a as a series in x1..xn.
struct KernelCharacter {
  TruncatedSeries series;
  KernelOrigin origin = KernelOrigin::IotaStar;
};

struct IsocrystalData {
  int hdelta_rank = 0;
  std::vector<KernelCharacter> basis;
  PMatrix frobenius_matrix;
  int hodge_rank = 1;
  std::vector<int> filtration_dims;
  int m_u = 0;
  std::array<int, 2> ranks_Xn{0, 0};
  bool is_CL = false;
  std::vector<PadicRational> gamma_values;
  /// Digits to which the matrix entries are certified.
  int precision = 0;
};

/// [L_0..L_n] in variables x0..xn. Requires n <= 2 and M >= p^n + p.
std::vector<TruncatedSeries> log_projections(const FormalGroupLaw& F, int n);

/// Psi_1(x1) = log(p x1)/p; throws IntegralityViolation if a coefficient is
/// not integral.
KernelCharacter fundamental_character(const FormalGroupLaw& F);

struct SolverOptions {
  /// Largest degree of the univariate x0^k constraint rows; 0 picks p^6, capped at 20000.
  int extension_degree = 0;
  /// Re-solve at N-1 and M-2 and demand the same rank.
  bool check_stability = true;
};

/// The Z_p-lattice of c with sum c_i L_i integral. Requires n <= 2.
CharacterLattice solve_character_lattice(const FormalGroupLaw& F, int n, const SolverOptions& opt = {});

/// Builds the character with the given c-vector; throws IntegralityViolation
/// if its series is not integral.
DeltaCharacter make_character(const FormalGroupLaw& F, const CVector& c);

/// Generators of X_n modulo phi*(X_{n-1}); `lattices[k]` has order k.
/// The result has the order of the lowest nonzero quotient. Throws
/// RankMismatch when an elliptic input does not give rank 1 at the top order.
CharacterLattice primitive_quotient(const std::vector<CharacterLattice>& lattices, GroupKind kind);

struct Differential {
  CVector A;            // linear coefficients of x_0..x_n
  PadicRational gamma;  // fixed by f*(i*Theta) = i*phi*Theta + gamma Psi_1
};

/// gamma = -p A_0: the sign is the one the identity above forces.
Differential differential_gamma(const FormalGroupLaw& F, const DeltaCharacter& theta);

/// Coordinate of Upsilon(Theta) against dx_0, i.e. gamma/p.
PadicRational upsilon(const FormalGroupLaw& F, const DeltaCharacter& theta);

enum class LateralAction { IotaStar, PhiStar, FStar };

/// iota_star: x_0 = 0. phi_star: precompose with phi, landing on N^{n+1}.
/// f_star on a kernel character of N^n: precompose with the lateral
/// Frobenius N^{n+1} -> N^n.
KernelCharacter restrict_lateral(const FormalGroupLaw& F, const DeltaCharacter& theta, LateralAction action);
KernelCharacter restrict_lateral(const FormalGroupLaw& F, const KernelCharacter& psi, LateralAction action);

/// Witt Frobenius of (x1..x_{n+1}) as n series in those variables; this is
/// the lateral Frobenius N^{n+1} -> N^n in kernel coordinates.
std::vector<TruncatedSeries> lateral_frobenius_series(const FormalGroupLaw& F, int n, int max_degree);

struct DiffRelationReport {
  IdentityCheck first;   // f*(i*Theta) = i*phi*Theta + gamma Psi_1
  IdentityCheck second;  // (f^{n-1})* i*phi*Theta = i*(phi^n)*Theta
  int second_degree = 0;  // degree at which the second identity was checked
  bool ok() const { return first.pass && second.pass; }
};

/// Threshold N-3 for the first identity and N-2 for the second.
DiffRelationReport verify_diff_relation(const FormalGroupLaw& F, const DeltaCharacter& theta);

struct SplittingData {
  int m_u = 0;
  int delta_rank = 0;
  std::vector<int> filtration_dims;
  std::array<int, 2> ranks_Xn{0, 0};
  std::vector<int> rk_I;  // rk I_0, rk I_1, rk I_2
};

/// Lattices of orders 1 and 2 for F, cached by the caller if desired.
struct CharacterSuite {
  FormalGroupLaw F;
  std::vector<CharacterLattice> lattices;  // orders 0, 1, 2
  CharacterLattice primitive;
};

CharacterSuite character_suite(const FormalGroupLaw& F, const SolverOptions& opt = {});

SplittingData splitting_numbers_and_rank(const CharacterSuite& S);
SplittingData splitting_numbers_and_rank(const WeierstrassCurve& E);

bool classify_CL(const CharacterSuite& S);
bool classify_CL(const WeierstrassCurve& E);

IsocrystalData isocrystal_data(const CharacterSuite& S);
IsocrystalData isocrystal_data(const WeierstrassCurve& E);

/// X_1 / i*phi*X_0 against i*X_prim meet f* i*X_prim inside H, as dimensions.
struct OrderOneSpan {
  int lhs_dim = 0;
  int rhs_dim = 0;
  bool pass() const { return lhs_dim == rhs_dim; }
};
OrderOneSpan order_one_span_identity(const CharacterSuite& S);

/// Rank over Q_p of a list of vectors; entries of valuation >= `zero_threshold`
/// after normalizing each vector to minimum valuation 0 count as zero.
int padic_rank(const std::vector<CVector>& vectors, int zero_threshold);

/// Solve sum_j x_j cols[j] = target in the least-valuation sense over the
/// coordinates present; returns x and the residual valuation.
std::pair<CVector, int> padic_solve(const std::vector<TruncatedSeries>& cols, const TruncatedSeries& target);

}  // namespace deltacrys
