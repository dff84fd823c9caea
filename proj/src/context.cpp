#include "deltacrys/context.hpp"

#include <string>

#include "deltacrys/error.hpp"
#include "deltacrys/padic.hpp"

namespace deltacrys {

Context Context::make(std::uint64_t p, int N, int M) {
  if (p < 3 || !is_prime(p)) throw Error(ErrorKind::InvalidArgument, "p must be an odd prime, got " + std::to_string(p));
  if (N < 2) throw Error(ErrorKind::InvalidArgument, "precision N must be at least 2");
  if (M < 1) throw Error(ErrorKind::InvalidArgument, "degree M must be at least 1");
  if (N > max_precision(p))
    throw Error(ErrorKind::InvalidArgument,
                "precision N=" + std::to_string(N) + " exceeds " + std::to_string(max_precision(p)) + " digits for p=" +
                    std::to_string(p));
  return Context{p, N, M};
}

}  // namespace deltacrys
