#include <atomic>
#include <cstdlib>
#include <string>

#include "dpforest/kernels/kernels.hpp"

namespace dpforest::kernels {

namespace {

const KernelTable* initial_choice() {
  const char* env = std::getenv("DPFOREST_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return &scalar_table();
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_choice()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
  if (name == "scalar") {
    current().store(&scalar_table());
    return true;
  }
  if (name == "avx2" || name == "auto") {
    if (const KernelTable* t = avx2_table()) {
      current().store(t);
      return true;
    }
    if (name == "auto") {
      current().store(&scalar_table());
      return true;
    }
    return false;
  }
  return false;
}

}  // namespace dpforest::kernels
