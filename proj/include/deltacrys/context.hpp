#pragma once

#include <cstdint>

namespace deltacrys {

// p: odd prime, N: p-adic digits, M: series truncation degree.
struct Context {
  std::uint64_t p = 5;
  int N = 8;
  int M = 12;

  /// Validates p prime >= 3, N >= 2, M >= 1 and that p^N fits the 62-bit kernel.
  static Context make(std::uint64_t p, int N, int M);
};

}  // namespace deltacrys
