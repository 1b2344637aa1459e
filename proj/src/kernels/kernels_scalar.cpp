#include "kernels/kernels_internal.hpp"

namespace risnoma::kernels::scalar {

void cascade_gain(int q, std::size_t n, const double* a_re, const double* a_im, const double* b_re,
                  const double* b_im, double* out)
{
    for (std::size_t j = 0; j < n; ++j) {
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

void sort_lanes(int rows, std::size_t n, double* values)
{
    // Odd-even transposition network: rows passes of compare-exchange.
    for (int pass = 0; pass < rows; ++pass) {
        for (int r = pass & 1; r + 1 < rows; r += 2) {
            double* lo = values + static_cast<std::size_t>(r) * n;
            double* hi = lo + n;
            for (std::size_t j = 0; j < n; ++j) {
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
    std::uint64_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double threshold = growth * (1.0 + eve[j]) - 1.0;
        count += legit[j] < threshold ? 1 : 0;
    }
    return count;
}

}  // namespace risnoma::kernels::scalar

namespace risnoma::kernels {

const KernelTable& scalar_table() noexcept
{
    static const KernelTable table{"scalar", scalar::cascade_gain, scalar::sort_lanes, scalar::count_outage};
    return table;
}

}  // namespace risnoma::kernels
