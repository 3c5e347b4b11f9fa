#include "tooldc/bm25_kernels.hpp"

namespace tooldc::kernels {

void bm25_accumulate_scalar(std::span<const double> tf, std::span<const double> norm, double idf, double k1,
                            std::span<double> scores) {
    const double k1p1 = k1 + 1.0;
    for (std::size_t d = 0; d < scores.size(); ++d) {
        if (tf[d] > 0.0) {
            const double num = tf[d] * k1p1;
            const double den = tf[d] + norm[d];
            scores[d] += idf * (num / den);
        }
    }
}

}  // namespace tooldc::kernels
