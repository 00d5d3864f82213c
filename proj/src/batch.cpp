#include "kbstab/batch.hpp"

#include <omp.h>

namespace kbstab {

void for_each_index(long count, Exec exec, const std::function<void(long)>& fn) {
  if (exec == Exec::serial) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(kbstab_batch_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

int parallel_threads() { return omp_get_max_threads(); }

}  // namespace kbstab
