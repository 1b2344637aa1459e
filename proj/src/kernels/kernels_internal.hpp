#pragma once

#include "risnoma/kernels.hpp"

namespace risnoma::kernels {

namespace scalar {
void cascade_gain(int q, std::size_t n, const double* a_re, const double* a_im, const double* b_re,
                  const double* b_im, double* out);
void sort_lanes(int rows, std::size_t n, double* values);
std::uint64_t count_outage(std::size_t n, const double* legit, const double* eve, double growth);
}  // namespace scalar

#ifdef RISNOMA_HAVE_AVX2
const KernelTable& avx2_table_unchecked() noexcept;
#endif

}  // namespace risnoma::kernels
