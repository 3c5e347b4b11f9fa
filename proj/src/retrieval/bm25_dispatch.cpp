#include <cstdlib>
#include <string_view>

#include "tooldc/bm25_kernels.hpp"

namespace tooldc::kernels {

namespace {

Bm25Kernel detect() {
    if (const char* forced = std::getenv("TOOLDC_KERNEL"); forced != nullptr && std::string_view(forced) == "scalar")
        return Bm25Kernel::Scalar;
#if TOOLDC_HAVE_AVX2_KERNEL && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2")) return Bm25Kernel::Avx2;
#endif
    return Bm25Kernel::Scalar;
}

}  // namespace

Bm25Kernel active_bm25_kernel() {
    static const Bm25Kernel kernel = detect();
    return kernel;
}

std::string_view to_string(Bm25Kernel kernel) {
    switch (kernel) {
        case Bm25Kernel::Scalar: return "scalar";
        case Bm25Kernel::Avx2: return "avx2";
    }
    return "scalar";
}

void bm25_accumulate(std::span<const double> tf, std::span<const double> norm, double idf, double k1,
                     std::span<double> scores) {
#if TOOLDC_HAVE_AVX2_KERNEL
    if (active_bm25_kernel() == Bm25Kernel::Avx2) {
        bm25_accumulate_avx2(tf, norm, idf, k1, scores);
        return;
    }
#endif
    bm25_accumulate_scalar(tf, norm, idf, k1, scores);
}

}  // namespace tooldc::kernels
