#include <cstdlib>
#include <string_view>

#include "kernels/kernels_internal.hpp"

namespace risnoma::kernels {

const KernelTable* avx2_table() noexcept
{
#ifdef RISNOMA_HAVE_AVX2
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &avx2_table_unchecked() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_table() noexcept
{
    static const KernelTable* chosen = [] {
        const char* env = std::getenv("RISNOMA_SIMD");
        if (env != nullptr && std::string_view(env) == "scalar") return &scalar_table();
        const KernelTable* fast = avx2_table();
        return fast != nullptr ? fast : &scalar_table();
    }();
    return *chosen;
}

}  // namespace risnoma::kernels
