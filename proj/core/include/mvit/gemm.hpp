#pragma once

#include <cstddef>
#include <vector>

namespace mvit {

// Cache-blocked single-precision GEMM, plain C++ (the hot loops have fixed
// trip counts so the compiler vectorizes them). All matrices row-major;
// lda/ldb/ldc are row strides, so sub-views of larger buffers work directly.
//
// Weight matrices that never change can be packed once with PackedMat and
// reused; gemm_packed then skips the per-call B packing entirely.

namespace gemm_detail {
inline constexpr std::size_t kMr = 4;    // micro-tile rows
inline constexpr std::size_t kNr = 32;   // micro-tile cols
inline constexpr std::size_t kKc = 256;  // depth block
inline constexpr std::size_t kMc = 128;  // row block
}  // namespace gemm_detail

// B matrix (n x p) repacked into kKc-deep panels of kNr columns.
class PackedMat {
public:
    PackedMat() = default;
    PackedMat(const float* b, std::size_t n, std::size_t p, std::size_t ldb) {
        pack(b, n, p, ldb);
    }

    void pack(const float* b, std::size_t n, std::size_t p, std::size_t ldb);

    std::size_t rows() const { return n_; }
    std::size_t cols() const { return p_; }

private:
    friend void gemm_packed(const float* a, std::size_t lda, const PackedMat& b, float* c,
                            std::size_t ldc, std::size_t m);

    std::size_t n_ = 0, p_ = 0;
    std::size_t panel_cols_ = 0;        // p rounded down to kNr
    std::vector<float> panels_;         // blocked panel data
    std::vector<float> tail_;           // leftover columns, row-major n x (p - panel_cols)
};

// c = a * b with b pre-packed; c is overwritten.
void gemm_packed(const float* a, std::size_t lda, const PackedMat& b, float* c,
                 std::size_t ldc, std::size_t m);

// c = a * b, packing b on the fly (scratch is thread-local).
void gemm(const float* a, std::size_t lda, const float* b, std::size_t ldb, float* c,
          std::size_t ldc, std::size_t m, std::size_t n, std::size_t p);

}  // namespace mvit
