#pragma once

#include "mvit/tensor.hpp"

namespace mvit {

// Inference-form batch norm statistics and affine parameters, one entry per
// channel.
struct BatchNormParams {
    Tensor gamma, beta, running_mean, running_var;
    float eps = 1e-5f;

    static BatchNormParams identity(std::size_t channels);
};

struct LayerNormParams {
    Tensor gamma, beta;  // length d
    float eps = 1e-5f;

    static LayerNormParams identity(std::size_t dim);
};

// c[i][j] = sum_t a[i][t] * b[t][j]; accumulation stays in the scalar type.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor64 matmul(const Tensor64& a, const Tensor64& b);

// Numerically stable softmax along `axis`; every slice sums to 1.
Tensor softmax(const Tensor& v, std::size_t axis);
Tensor64 softmax(const Tensor64& v, std::size_t axis);

Tensor relu(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor swish(const Tensor& x);  // x * sigmoid(x)

// Cross-correlation of x (C_in x H x W) with w (C_out x C_in x K x K),
// odd K, same-padding convention (pad = K/2 for spatial preservation at
// stride 1). Output H' = (H + 2*pad - K)/stride + 1.
Tensor conv2d(const Tensor& x, const Tensor& w, std::size_t stride, std::size_t padding);

// Per-channel filtering: x (C x H x W), w (C x K x K).
Tensor conv2d_depthwise(const Tensor& x, const Tensor& w, std::size_t stride,
                        std::size_t padding);

// 1x1 convolution: x (C_in x H x W), w (C_out x C_in).
Tensor conv2d_pointwise(const Tensor& x, const Tensor& w);

// (x - mean) / sqrt(var + eps) * gamma + beta, per channel of x (C x H x W).
Tensor batchnorm_inference(const Tensor& x, const BatchNormParams& p);

// Standardize each trailing-dimension vector, then apply the affine params.
Tensor layernorm(const Tensor& x, const LayerNormParams& p);

// x (C x H x W) -> per-channel spatial mean, length C.
Tensor global_avg_pool(const Tensor& x);

}  // namespace mvit
