#include <immintrin.h>

#include "kernels/kernels_internal.hpp"

namespace risnoma::kernels::avx2 {

namespace {

void cascade_gain(int q, std::size_t n, const double* a_re, const double* a_im, const double* b_re,
                  const double* b_im, double* out)
{
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d re = _mm256_setzero_pd();
        __m256d im = _mm256_setzero_pd();
        for (int m = 0; m < q; ++m) {
            const std::size_t i = static_cast<std::size_t>(m) * n + j;
            const __m256d ar = _mm256_loadu_pd(a_re + i);
            const __m256d ai = _mm256_loadu_pd(a_im + i);
            const __m256d br = _mm256_loadu_pd(b_re + i);
            const __m256d bi = _mm256_loadu_pd(b_im + i);
            re = _mm256_add_pd(re, _mm256_add_pd(_mm256_mul_pd(br, ar), _mm256_mul_pd(bi, ai)));
            im = _mm256_add_pd(im, _mm256_sub_pd(_mm256_mul_pd(br, ai), _mm256_mul_pd(bi, ar)));
        }
        _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_mul_pd(re, re), _mm256_mul_pd(im, im)));
    }
    if (j < n) {
        // Tail lanes: the scalar loop indexes rows with the full stride n.
        for (; j < n; ++j) {
            double re = 0.0;
            double im = 0.0;
            for (int m = 0; m < q; ++m) {
                const std::size_t i = static_cast<std::size_t>(m) * n + j;
                re = re + (b_re[i] * a_re[i] + b_im[i] * a_im[i]);
                im = im + (b_re[i] * a_im[i] - b_im[i] * a_re[i]);
            }
            out[j] = re * re + im * im;
        }
    }
}

void sort_lanes(int rows, std::size_t n, double* values)
{
    for (int pass = 0; pass < rows; ++pass) {
        for (int r = pass & 1; r + 1 < rows; r += 2) {
            double* lo = values + static_cast<std::size_t>(r) * n;
            double* hi = lo + n;
            std::size_t j = 0;
            for (; j + 4 <= n; j += 4) {
                const __m256d a = _mm256_loadu_pd(lo + j);
                const __m256d b = _mm256_loadu_pd(hi + j);
                // Same selection as the scalar (b < a ? b : a) including NaN handling.
                const __m256d lt = _mm256_cmp_pd(b, a, _CMP_LT_OQ);
                _mm256_storeu_pd(lo + j, _mm256_blendv_pd(a, b, lt));
                _mm256_storeu_pd(hi + j, _mm256_blendv_pd(b, a, lt));
            }
            for (; j < n; ++j) {
                const double a = lo[j];
                const double b = hi[j];
                lo[j] = b < a ? b : a;
                hi[j] = b < a ? a : b;
            }
        }
    }
}

std::uint64_t count_outage(std::size_t n, const double* legit, const double* eve, double growth)
{
    const __m256d g = _mm256_set1_pd(growth);
    const __m256d one = _mm256_set1_pd(1.0);
    std::uint64_t count = 0;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d e = _mm256_loadu_pd(eve + j);
        const __m256d thr = _mm256_sub_pd(_mm256_mul_pd(g, _mm256_add_pd(one, e)), one);
        const __m256d lt = _mm256_cmp_pd(_mm256_loadu_pd(legit + j), thr, _CMP_LT_OQ);
        count += static_cast<std::uint64_t>(__builtin_popcount(_mm256_movemask_pd(lt)));
    }
    for (; j < n; ++j) {
        const double threshold = growth * (1.0 + eve[j]) - 1.0;
        count += legit[j] < threshold ? 1 : 0;
    }
    return count;
}

}  // namespace

}  // namespace risnoma::kernels::avx2

namespace risnoma::kernels {

const KernelTable& avx2_table_unchecked() noexcept
{
    static const KernelTable table{"avx2", avx2::cascade_gain, avx2::sort_lanes, avx2::count_outage};
    return table;
}

}  // namespace risnoma::kernels
