#pragma once

#include <cstddef>
#include <functional>

namespace tvgsp {

/// Upper bound on worker threads used by internal loops. 0 means hardware
/// concurrency. Results never depend on this value.
void set_num_threads(unsigned n);
unsigned num_threads();

/// Runs body(i) for i in [begin, end). Each index is processed exactly once
/// and bodies must write to disjoint outputs.
void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end,
                  const std::function<void(std::ptrdiff_t)>& body);

}  // namespace tvgsp
