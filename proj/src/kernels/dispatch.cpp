#include <cstdlib>
#include <string>

#include "ltscm/kernels.hpp"

namespace ltscm::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa select_isa() {
  if (const char* forced = std::getenv("LTSCM_ISA")) {
    if (std::string(forced) == "scalar") return Isa::scalar;
  }
  return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

}  // namespace

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return avx2::kTable.sum_rows != nullptr && cpu_has_avx2();
  }
  return false;
}

const KernelTable& table(Isa isa) {
  return (isa == Isa::avx2 && supported(Isa::avx2)) ? avx2::kTable : scalar::kTable;
}

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

const KernelTable& active() {
  static const KernelTable& t = table(active_isa());
  return t;
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace ltscm::kernels
