#pragma once

#include <functional>

namespace tdcis {

// Process-wide worker budget.  Set once by the CLI (flag or TDCIS_THREADS
// env var); library code only reads it.  Results are index-deterministic:
// workers write to disjoint pre-sized slots, so the thread count never
// changes any output bit.
int thread_budget();
void set_thread_budget(int n);

// Static block partition of [0, n) over the budget.  fn(i) must only touch
// slot i of shared output.
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace tdcis
