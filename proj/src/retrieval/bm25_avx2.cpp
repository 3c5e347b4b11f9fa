// Compiled with -mavx2 (no FMA: contraction would change rounding).
#include <immintrin.h>

#include "tooldc/bm25_kernels.hpp"

namespace tooldc::kernels {

void bm25_accumulate_avx2(std::span<const double> tf, std::span<const double> norm, double idf, double k1,
                          std::span<double> scores) {
    const std::size_t n = scores.size();
    const __m256d vk1p1 = _mm256_set1_pd(k1 + 1.0);
    const __m256d vidf = _mm256_set1_pd(idf);
    const __m256d zero = _mm256_setzero_pd();

    std::size_t d = 0;
    for (; d + 4 <= n; d += 4) {
        const __m256d t = _mm256_loadu_pd(tf.data() + d);
        const __m256d m = _mm256_cmp_pd(t, zero, _CMP_GT_OQ);
        if (_mm256_movemask_pd(m) == 0) continue;
        const __m256d num = _mm256_mul_pd(t, vk1p1);
        const __m256d den = _mm256_add_pd(t, _mm256_loadu_pd(norm.data() + d));
        // Lanes with tf == 0 may compute 0/0; the mask zeroes them.
        const __m256d contrib = _mm256_and_pd(m, _mm256_mul_pd(vidf, _mm256_div_pd(num, den)));
        _mm256_storeu_pd(scores.data() + d, _mm256_add_pd(_mm256_loadu_pd(scores.data() + d), contrib));
    }
    bm25_accumulate_scalar(tf.subspan(d), norm.subspan(d), idf, k1, scores.subspan(d));
}

}  // namespace tooldc::kernels
