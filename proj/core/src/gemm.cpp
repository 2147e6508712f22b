#include "mvit/gemm.hpp"

#include <algorithm>
#include <cstring>

namespace mvit {

using namespace gemm_detail;

namespace {

// 4x32 register tile; fixed bounds so the inner loops vectorize.
void microkernel(const float* __restrict a, const float* __restrict b, float* __restrict c,
                 std::size_t ldc, std::size_t depth) {
    float acc[kMr][kNr] = {};
    for (std::size_t t = 0; t < depth; ++t) {
        const float* bt = b + t * kNr;
        const float* at = a + t * kMr;
        for (std::size_t r = 0; r < kMr; ++r) {
            const float av = at[r];
            for (std::size_t j = 0; j < kNr; ++j) acc[r][j] += av * bt[j];
        }
    }
    for (std::size_t r = 0; r < kMr; ++r) {
        float* cr = c + r * ldc;
        for (std::size_t j = 0; j < kNr; ++j) cr[j] += acc[r][j];
    }
}

thread_local std::vector<float> t_apack;
thread_local PackedMat t_bpack;

}  // namespace

void PackedMat::pack(const float* b, std::size_t n, std::size_t p, std::size_t ldb) {
    n_ = n;
    p_ = p;
    panel_cols_ = p / kNr * kNr;
    const std::size_t tail_cols = p - panel_cols_;

    panels_.resize(n * panel_cols_);
    std::size_t off = 0;
    for (std::size_t t0 = 0; t0 < n; t0 += kKc) {
        const std::size_t kc = std::min(kKc, n - t0);
        for (std::size_t j0 = 0; j0 < panel_cols_; j0 += kNr) {
            for (std::size_t t = 0; t < kc; ++t)
                std::memcpy(&panels_[off + t * kNr], b + (t0 + t) * ldb + j0,
                            kNr * sizeof(float));
            off += kc * kNr;
        }
    }

    tail_.resize(n * tail_cols);
    for (std::size_t t = 0; t < n && tail_cols; ++t)
        std::memcpy(&tail_[t * tail_cols], b + t * ldb + panel_cols_,
                    tail_cols * sizeof(float));
}

void gemm_packed(const float* a, std::size_t lda, const PackedMat& b, float* c,
                 std::size_t ldc, std::size_t m) {
    const std::size_t n = b.n_, p = b.p_;
    for (std::size_t i = 0; i < m; ++i) std::memset(c + i * ldc, 0, p * sizeof(float));

    const std::size_t panels = b.panel_cols_ / kNr;
    t_apack.resize(kMc * kKc);

    std::size_t block_off = 0;
    for (std::size_t t0 = 0; t0 < n; t0 += kKc) {
        const std::size_t kc = std::min(kKc, n - t0);
        for (std::size_t i0 = 0; i0 < m; i0 += kMc) {
            const std::size_t mc = std::min(kMc, m - i0);
            const std::size_t mr_full = mc / kMr * kMr;
            for (std::size_t i = 0; i < mr_full; i += kMr) {
                float* dst = &t_apack[i * kc];
                for (std::size_t t = 0; t < kc; ++t)
                    for (std::size_t r = 0; r < kMr; ++r)
                        dst[t * kMr + r] = a[(i0 + i + r) * lda + t0 + t];
            }
            for (std::size_t pi = 0; pi < panels; ++pi) {
                const float* bp = &b.panels_[block_off + pi * kc * kNr];
                for (std::size_t i = 0; i < mr_full; i += kMr)
                    microkernel(&t_apack[i * kc], bp, c + (i0 + i) * ldc + pi * kNr, ldc, kc);
                for (std::size_t i = mr_full; i < mc; ++i) {
                    float* crow = c + (i0 + i) * ldc + pi * kNr;
                    for (std::size_t t = 0; t < kc; ++t) {
                        const float av = a[(i0 + i) * lda + t0 + t];
                        const float* bt = bp + t * kNr;
                        for (std::size_t j = 0; j < kNr; ++j) crow[j] += av * bt[j];
                    }
                }
            }
        }
        block_off += kc * kNr * panels;
    }

    const std::size_t tail_cols = p - b.panel_cols_;
    if (tail_cols) {
        for (std::size_t i = 0; i < m; ++i) {
            float* crow = c + i * ldc + b.panel_cols_;
            const float* arow = a + i * lda;
            for (std::size_t t = 0; t < n; ++t) {
                const float av = arow[t];
                const float* bt = &b.tail_[t * tail_cols];
                for (std::size_t j = 0; j < tail_cols; ++j) crow[j] += av * bt[j];
            }
        }
    }
}

void gemm(const float* a, std::size_t lda, const float* b, std::size_t ldb, float* c,
          std::size_t ldc, std::size_t m, std::size_t n, std::size_t p) {
    t_bpack.pack(b, n, p, ldb);
    gemm_packed(a, lda, t_bpack, c, ldc, m);
}

}  // namespace mvit
