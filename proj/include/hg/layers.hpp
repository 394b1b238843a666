// Copyright (C) 2026 hginfer contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "hg/accum.hpp"
#include "hg/tensor.hpp"

namespace hg {

enum class PoolMode { Max, Avg };

enum class ShiftMode { Auto, Fixed };

/// Batch-norm numeric configuration. Every scalar is binary32 by type; a
/// fixed shift factor must be a positive power of two so shifting never
/// rounds.
struct BatchNormConfig {
    int64_t group_count = 32;
    ShiftMode shift_mode = ShiftMode::Auto;
    float fixed_shift = 1.0f; // used when shift_mode == Fixed
    float epsilon = 1e-5f;
    bool use_global_stats = false;
};

struct ConvParams {
    int64_t stride = 1;
    int64_t pad = 0;
};

struct PoolParams {
    PoolMode mode = PoolMode::Max;
    int64_t kernel = 2;
    int64_t stride = 2;
    int64_t pad = 0;
};

/// floor((in + 2*pad - kernel) / stride) + 1
int64_t conv_out_dim(int64_t in, int64_t kernel, int64_t stride, int64_t pad);

// Layer forwards. Inputs, weights, and outputs share one dtype; outputs are
// written into `out`, which must be pre-allocated with the inferred shape and
// the input dtype. ReLU and Scale tolerate out aliasing the input. The
// `Tensor`-returning wrappers allocate the output themselves.

void conv_forward_into(const Tensor& input, const Tensor& weights, const Tensor* bias,
                       const ConvParams& params, const AccumPolicy& policy, Tensor& out);
Tensor conv_forward(const Tensor& input, const Tensor& weights, const Tensor* bias,
                    const ConvParams& params, const AccumPolicy& policy = {});

void inner_product_forward_into(const Tensor& input, const Tensor& weights, const Tensor* bias,
                                const AccumPolicy& policy, Tensor& out);
Tensor inner_product_forward(const Tensor& input, const Tensor& weights, const Tensor* bias,
                             const AccumPolicy& policy = {});

void batchnorm_forward_into(const Tensor& input, const BatchNormConfig& cfg,
                            const Tensor* global_mean, const Tensor* global_var, Tensor& out);
Tensor batchnorm_forward(const Tensor& input, const BatchNormConfig& cfg,
                         const Tensor* global_mean = nullptr, const Tensor* global_var = nullptr);

void relu_forward_into(const Tensor& input, Tensor& out);
Tensor relu_forward(const Tensor& input);

void pool_forward_into(const Tensor& input, const PoolParams& params, Tensor& out);
Tensor pool_forward(const Tensor& input, const PoolParams& params);

void softmax_forward_into(const Tensor& input, Tensor& out); // across channels per (n, h, w)
Tensor softmax_forward(const Tensor& input);

void eltwise_sum_forward_into(std::span<const Tensor* const> inputs,
                              std::span<const float> coeffs, Tensor& out);
Tensor eltwise_sum_forward(std::span<const Tensor* const> inputs,
                           std::span<const float> coeffs = {});

void scale_forward_into(const Tensor& input, const Tensor& gamma, const Tensor* beta, Tensor& out);
Tensor scale_forward(const Tensor& input, const Tensor& gamma, const Tensor* beta = nullptr);

// Reduction building blocks used by the batch-norm layer and exposed for
// direct use. grouped_mean partitions the values into `group_count`
// contiguous groups (sizes floor(n/G) or ceil(n/G)), averages each group with
// a float 1/size scalar, and combines the group means weighted by their exact
// float share size/n, so the estimator equals the arithmetic mean up to
// rounding. shifted_variance centers the data, scales it by a power-of-two
// shift before squaring, averages the squares with grouped_mean, and unshifts
// once at the end with the float scalar 1/s^2.

Half grouped_mean(std::span<const Half> values, int64_t group_count);
float grouped_mean(std::span<const float> values, int64_t group_count);

/// The combination stage of grouped_mean on precomputed group means.
Half combine_group_means(std::span<const Half> means, std::span<const int64_t> sizes,
                         int64_t total_count);

Half shifted_variance(std::span<const Half> values, Half mean, const BatchNormConfig& cfg);
float shifted_variance(std::span<const float> values, float mean, const BatchNormConfig& cfg);

/// Auto-mode shift factor: 2^(-ceil(log2(max_abs)) + 3) clamped to powers of
/// two in [2^-10, 2^10], keeping shifted magnitudes near 8. Returns 1 for
/// zero or non-finite max_abs.
float auto_shift_factor(float max_abs);

} // namespace hg
