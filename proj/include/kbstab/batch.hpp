#pragma once

#include "kbstab/propagate.hpp"

#include <exception>
#include <functional>

namespace kbstab {

/// Runs fn(i) for i in [0, count). Exec::parallel distributes indices over
/// OpenMP threads; each index must write only its own output slot so the
/// result does not depend on the schedule. The first exception thrown by
/// any index is rethrown after the loop.
void for_each_index(long count, Exec exec, const std::function<void(long)>& fn);

/// Number of OpenMP threads a parallel region would use.
int parallel_threads();

}  // namespace kbstab
