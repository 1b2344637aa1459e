#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace risnoma::kernels {

/// Monte Carlo hot loops. Arrays are structure-of-arrays with one lane per
/// trial: element (row, lane) lives at [row * n + lane]. Every table entry
/// produces bit-identical results to the scalar reference.
struct KernelTable {
    const char* name;

    /// out[j] = |sum_m conj(b[m,j]) a[m,j]|^2 over q rows.
    void (*cascade_gain)(int q, std::size_t n, const double* a_re, const double* a_im, const double* b_re,
                         const double* b_im, double* out);

    /// Sorts each lane ascending across `rows` rows, in place.
    void (*sort_lanes)(int rows, std::size_t n, double* values);

    /// Number of lanes with legit[j] < growth * (1 + eve[j]) - 1.
    std::uint64_t (*count_outage)(std::size_t n, const double* legit, const double* eve, double growth);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;

/// Table used by the simulator: AVX2 when available unless the environment
/// variable RISNOMA_SIMD is set to "scalar".
const KernelTable& active_table() noexcept;

}  // namespace risnoma::kernels
