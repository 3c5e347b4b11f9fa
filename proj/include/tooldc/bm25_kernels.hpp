#pragma once

#include <span>
#include <string_view>

// Per-term BM25 accumulation, vectorised across documents:
//
//   scores[d] += idf * tf[d] * (k1 + 1) / (tf[d] + norm[d])   where tf[d] > 0
//
// with norm[d] = k1 * (1 - b + b * len[d] / avgdl) precomputed by the caller.
// Every variant performs the same IEEE operations in the same order, so the
// results are bit-identical to the scalar reference.

namespace tooldc::kernels {

void bm25_accumulate_scalar(std::span<const double> tf, std::span<const double> norm, double idf, double k1,
                            std::span<double> scores);

#if defined(__x86_64__) || defined(_M_X64)
#define TOOLDC_HAVE_AVX2_KERNEL 1
void bm25_accumulate_avx2(std::span<const double> tf, std::span<const double> norm, double idf, double k1,
                          std::span<double> scores);
#else
#define TOOLDC_HAVE_AVX2_KERNEL 0
#endif

enum class Bm25Kernel { Scalar, Avx2 };

/// Picks AVX2 when the CPU supports it, unless TOOLDC_KERNEL=scalar.
Bm25Kernel active_bm25_kernel();
std::string_view to_string(Bm25Kernel kernel);

/// Runs the active kernel.
void bm25_accumulate(std::span<const double> tf, std::span<const double> norm, double idf, double k1,
                     std::span<double> scores);

}  // namespace tooldc::kernels
