#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "deltacrys/crystalline.hpp"
#include "deltacrys/error.hpp"
#include "deltacrys/witt.hpp"

namespace deltacrys::cli {

struct Config {
  std::uint64_t p = 5;
  int prec = 8;
  int deg = 0;  // 0: 12 for order-1 work, 35 when order-2 elliptic characters are needed
  std::string curve = "1,1";
  int order = 1;
  std::string group = "curve";  // ga | gm | curve
  bool json = false;
  std::uint64_t seed = 1;
};

/// A p-adic number as unit * p^valuation + O(p^precision); zero has unit 0
/// and valuation == precision.
struct PValue {
  std::int64_t unit = 0;
  int valuation = 0;
  int precision = 0;
  bool operator==(const PValue&) const = default;
};

PValue to_pvalue(const PadicRational& x, int cap);
std::string to_string(const PValue& v, std::uint64_t p);

/// residual_valuation == PadicRational::kExact means the difference vanished exactly.
struct CheckRow {
  std::string name;
  std::string status;  // pass | fail
  int residual_valuation = 0;
  int precision = 0;
  bool operator==(const CheckRow&) const = default;
};

struct Ranks {
  int X1 = 0;
  int X2 = 0;
  int X_prim = 0;
  bool operator==(const Ranks&) const = default;
};

struct KedlayaSummary {
  std::vector<std::vector<PValue>> matrix;
  PValue trace;
  PValue det;
  bool operator==(const KedlayaSummary&) const = default;
};

struct AnalysisReport {
  int schema = 1;
  std::uint64_t p = 0;
  std::string curve;
  std::int64_t a_p = 0;
  bool ordinary = false;
  Ranks ranks;
  int m_u = 0;
  int delta_rank = 0;
  bool is_CL = false;
  std::vector<int> filtration_dims;
  std::vector<std::vector<PValue>> frobenius_matrix;
  KedlayaSummary kedlaya;
  std::vector<CheckRow> checks;

  bool ok() const;
  bool operator==(const AnalysisReport&) const = default;
};

struct VerifyReport {
  int schema = 1;
  std::uint64_t p = 0;
  std::string group;
  std::vector<CheckRow> checks;
  bool ok() const;
  bool operator==(const VerifyReport&) const = default;
};

/// Exit codes: the only pass/fail channel in scripting mode.
enum ExitCode { kPass = 0, kCheckFailure = 1, kBadInput = 2, kPrecisionExhausted = 3 };

/// Maps a library error to its exit code.
int exit_code_for(const Error& e);

Context context_for(const Config& cfg, int default_degree);

AnalysisReport cmd_analyze(const Config& cfg);
VerifyReport cmd_verify(const Config& cfg);

struct WittResult {
  WittVector value;
  std::vector<BigInt> ghost;  // reduced to symmetric residues modulo p^N
  std::string text() const;
};

/// Evaluates literals [a0, a1, ...] combined with + and * and the unary
/// F, T, V; parentheses group. Throws ParseError or LengthMismatch.
WittResult cmd_witt(const Config& cfg, const std::string& expr);

std::string cmd_characters(const Config& cfg);
std::string cmd_kedlaya(const Config& cfg);

std::string to_text(const AnalysisReport& r);
std::string to_text(const VerifyReport& r);
std::string to_json(const AnalysisReport& r);
std::string to_json(const VerifyReport& r);
AnalysisReport analysis_from_json(const std::string& s);
VerifyReport verify_from_json(const std::string& s);

}  // namespace deltacrys::cli
