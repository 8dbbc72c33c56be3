#pragma once

namespace mapfdl {

// Search invariants derived from the solvers' correctness arguments
// (non-decreasing expansion costs, strict constraint growth, partition
// consistency). A violation is an implementation bug, never bad input,
// so it throws std::logic_error with the failing expression.
[[noreturn]] void invariant_failure(const char* expr, const char* file, int line);

}  // namespace mapfdl

#ifdef MAPFDL_DISABLE_INVARIANT_CHECKS
#define MAPFDL_INVARIANT(expr) ((void)0)
#else
#define MAPFDL_INVARIANT(expr) \
  do {                          \
    if (!(expr)) ::mapfdl::invariant_failure(#expr, __FILE__, __LINE__); \
  } while (0)
#endif
