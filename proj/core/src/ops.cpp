#include "mvit/ops.hpp"

#include <algorithm>
#include <cmath>

#include "mvit/gemm.hpp"

namespace mvit {

BatchNormParams BatchNormParams::identity(std::size_t channels) {
    BatchNormParams p;
    p.gamma = Tensor({channels}, 1.0f);
    p.beta = Tensor({channels}, 0.0f);
    p.running_mean = Tensor({channels}, 0.0f);
    p.running_var = Tensor({channels}, 1.0f);
    return p;
}

LayerNormParams LayerNormParams::identity(std::size_t dim) {
    LayerNormParams p;
    p.gamma = Tensor({dim}, 1.0f);
    p.beta = Tensor({dim}, 0.0f);
    return p;
}

namespace {

void require_matmul_shapes(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    if (a.size() != 2 || b.size() != 2 || a[1] != b[0])
        throw ShapeError("matmul: incompatible shapes " + shape_to_string(a) + " and " +
                         shape_to_string(b));
}

template <typename Scalar>
TensorT<Scalar> softmax_impl(const TensorT<Scalar>& v, std::size_t axis) {
    if (axis >= v.rank())
        throw ShapeError("softmax: axis " + std::to_string(axis) + " out of range for shape " +
                         shape_to_string(v.shape()));
    const auto& shape = v.shape();
    std::size_t outer = 1, inner = 1;
    for (std::size_t i = 0; i < axis; ++i) outer *= shape[i];
    for (std::size_t i = axis + 1; i < shape.size(); ++i) inner *= shape[i];
    const std::size_t len = shape[axis];

    TensorT<Scalar> out(shape);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t in = 0; in < inner; ++in) {
            const std::size_t base = o * len * inner + in;
            Scalar mx = v[base];
            for (std::size_t t = 1; t < len; ++t) mx = std::max(mx, v[base + t * inner]);
            Scalar sum = 0;
            for (std::size_t t = 0; t < len; ++t) {
                const Scalar e = std::exp(v[base + t * inner] - mx);
                out[base + t * inner] = e;
                sum += e;
            }
            const Scalar norm = Scalar(1) / sum;
            for (std::size_t t = 0; t < len; ++t) out[base + t * inner] *= norm;
        }
    }
    return out;
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
    require_matmul_shapes(a.shape(), b.shape());
    const std::size_t m = a.dim(0), n = a.dim(1), p = b.dim(1);
    Tensor c({m, p});
    gemm(a.data(), n, b.data(), p, c.data(), p, m, n, p);
    return c;
}

Tensor64 matmul(const Tensor64& a, const Tensor64& b) {
    require_matmul_shapes(a.shape(), b.shape());
    const std::size_t m = a.dim(0), n = a.dim(1), p = b.dim(1);
    Tensor64 c({m, p}, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t t = 0; t < n; ++t) {
            const double av = a(i, t);
            for (std::size_t j = 0; j < p; ++j) c(i, j) += av * b(t, j);
        }
    return c;
}

Tensor softmax(const Tensor& v, std::size_t axis) { return softmax_impl(v, axis); }
Tensor64 softmax(const Tensor64& v, std::size_t axis) { return softmax_impl(v, axis); }

Tensor relu(const Tensor& x) {
    Tensor out(x.shape());
    for (std::size_t i = 0; i < x.numel(); ++i) out[i] = x[i] > 0.0f ? x[i] : 0.0f;
    return out;
}

Tensor sigmoid(const Tensor& x) {
    Tensor out(x.shape());
    for (std::size_t i = 0; i < x.numel(); ++i) out[i] = 1.0f / (1.0f + std::exp(-x[i]));
    return out;
}

Tensor swish(const Tensor& x) {
    Tensor out(x.shape());
    for (std::size_t i = 0; i < x.numel(); ++i) out[i] = x[i] / (1.0f + std::exp(-x[i]));
    return out;
}

namespace {
std::size_t conv_out_dim(std::size_t in, std::size_t k, std::size_t stride, std::size_t pad) {
    return (in + 2 * pad - k) / stride + 1;
}
}  // namespace

Tensor conv2d(const Tensor& x, const Tensor& w, std::size_t stride, std::size_t padding) {
    if (x.rank() != 3 || w.rank() != 4 || x.dim(0) != w.dim(1))
        throw ShapeError("conv2d: input " + shape_to_string(x.shape()) + " vs kernel " +
                         shape_to_string(w.shape()));
    const std::size_t k = w.dim(2);
    if (k != w.dim(3) || k % 2 == 0)
        throw ShapeError("conv2d: kernel must be square with odd size, got " +
                         shape_to_string(w.shape()));
    const std::size_t cin = x.dim(0), h = x.dim(1), ww = x.dim(2), cout = w.dim(0);
    const std::size_t ho = conv_out_dim(h, k, stride, padding);
    const std::size_t wo = conv_out_dim(ww, k, stride, padding);

    Tensor out({cout, ho, wo}, 0.0f);
    const long pad = long(padding);
    for (std::size_t co = 0; co < cout; ++co)
        for (std::size_t ci = 0; ci < cin; ++ci)
            for (std::size_t kr = 0; kr < k; ++kr)
                for (std::size_t kc = 0; kc < k; ++kc) {
                    const float wv = w[((co * cin + ci) * k + kr) * k + kc];
                    if (wv == 0.0f) continue;
                    for (std::size_t r = 0; r < ho; ++r) {
                        const long ir = long(r * stride) + long(kr) - pad;
                        if (ir < 0 || ir >= long(h)) continue;
                        const float* xrow = x.data() + (ci * h + std::size_t(ir)) * ww;
                        float* orow = out.data() + (co * ho + r) * wo;
                        for (std::size_t c = 0; c < wo; ++c) {
                            const long ic = long(c * stride) + long(kc) - pad;
                            if (ic < 0 || ic >= long(ww)) continue;
                            orow[c] += wv * xrow[ic];
                        }
                    }
                }
    return out;
}

Tensor conv2d_depthwise(const Tensor& x, const Tensor& w, std::size_t stride,
                        std::size_t padding) {
    if (x.rank() != 3 || w.rank() != 3 || x.dim(0) != w.dim(0))
        throw ShapeError("conv2d_depthwise: input " + shape_to_string(x.shape()) +
                         " vs kernel " + shape_to_string(w.shape()));
    const std::size_t k = w.dim(1);
    if (k != w.dim(2) || k % 2 == 0)
        throw ShapeError("conv2d_depthwise: kernel must be square with odd size, got " +
                         shape_to_string(w.shape()));
    const std::size_t ch = x.dim(0), h = x.dim(1), ww = x.dim(2);
    const std::size_t ho = conv_out_dim(h, k, stride, padding);
    const std::size_t wo = conv_out_dim(ww, k, stride, padding);

    Tensor out({ch, ho, wo}, 0.0f);
    const long pad = long(padding);
    for (std::size_t c0 = 0; c0 < ch; ++c0)
        for (std::size_t kr = 0; kr < k; ++kr)
            for (std::size_t kc = 0; kc < k; ++kc) {
                const float wv = w[(c0 * k + kr) * k + kc];
                for (std::size_t r = 0; r < ho; ++r) {
                    const long ir = long(r * stride) + long(kr) - pad;
                    if (ir < 0 || ir >= long(h)) continue;
                    const float* xrow = x.data() + (c0 * h + std::size_t(ir)) * ww;
                    float* orow = out.data() + (c0 * ho + r) * wo;
                    for (std::size_t c = 0; c < wo; ++c) {
                        const long ic = long(c * stride) + long(kc) - pad;
                        if (ic < 0 || ic >= long(ww)) continue;
                        orow[c] += wv * xrow[ic];
                    }
                }
            }
    return out;
}

Tensor conv2d_pointwise(const Tensor& x, const Tensor& w) {
    if (x.rank() != 3 || w.rank() != 2 || x.dim(0) != w.dim(1))
        throw ShapeError("conv2d_pointwise: input " + shape_to_string(x.shape()) +
                         " vs kernel " + shape_to_string(w.shape()));
    const std::size_t cin = x.dim(0), h = x.dim(1), ww = x.dim(2), cout = w.dim(0);
    const std::size_t pixels = h * ww;
    Tensor out({cout, h, ww});
    // per-pixel linear map == matmul(w, x viewed as C_in x HW)
    gemm(w.data(), cin, x.data(), pixels, out.data(), pixels, cout, cin, pixels);
    return out;
}

Tensor batchnorm_inference(const Tensor& x, const BatchNormParams& p) {
    if (x.rank() != 3 || x.dim(0) != p.gamma.numel() || p.gamma.numel() != p.beta.numel() ||
        p.gamma.numel() != p.running_mean.numel() || p.gamma.numel() != p.running_var.numel())
        throw ShapeError("batchnorm_inference: input " + shape_to_string(x.shape()) +
                         " vs params of length " + std::to_string(p.gamma.numel()));
    const std::size_t ch = x.dim(0), pixels = x.dim(1) * x.dim(2);
    Tensor out(x.shape());
    for (std::size_t c = 0; c < ch; ++c) {
        const float scale = p.gamma[c] / std::sqrt(p.running_var[c] + p.eps);
        const float shift = p.beta[c] - p.running_mean[c] * scale;
        const float* src = x.data() + c * pixels;
        float* dst = out.data() + c * pixels;
        for (std::size_t i = 0; i < pixels; ++i) dst[i] = src[i] * scale + shift;
    }
    return out;
}

Tensor layernorm(const Tensor& x, const LayerNormParams& p) {
    if (x.rank() == 0 || x.shape().back() != p.gamma.numel() ||
        p.gamma.numel() != p.beta.numel())
        throw ShapeError("layernorm: input " + shape_to_string(x.shape()) +
                         " vs params of length " + std::to_string(p.gamma.numel()));
    const std::size_t d = x.shape().back();
    const std::size_t rows = x.numel() / d;
    Tensor out(x.shape());
    for (std::size_t r = 0; r < rows; ++r) {
        const float* src = x.data() + r * d;
        float* dst = out.data() + r * d;
        float mean = 0;
        for (std::size_t i = 0; i < d; ++i) mean += src[i];
        mean /= float(d);
        float var = 0;
        for (std::size_t i = 0; i < d; ++i) {
            const float dv = src[i] - mean;
            var += dv * dv;
        }
        var /= float(d);
        const float inv = 1.0f / std::sqrt(var + p.eps);
        for (std::size_t i = 0; i < d; ++i)
            dst[i] = (src[i] - mean) * inv * p.gamma[i] + p.beta[i];
    }
    return out;
}

Tensor global_avg_pool(const Tensor& x) {
    if (x.rank() != 3)
        throw ShapeError("global_avg_pool: expected C x H x W, got " +
                         shape_to_string(x.shape()));
    const std::size_t ch = x.dim(0), pixels = x.dim(1) * x.dim(2);
    Tensor out({ch});
    for (std::size_t c = 0; c < ch; ++c) {
        double sum = 0;
        const float* src = x.data() + c * pixels;
        for (std::size_t i = 0; i < pixels; ++i) sum += src[i];
        out[c] = float(sum / double(pixels));
    }
    return out;
}

}  // namespace mvit
