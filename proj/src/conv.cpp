// Copyright (C) 2026 hginfer contributors
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#include "hg/layers.hpp"
#include "kernels_common.hpp"

namespace hg {

using detail::dispatch_dtype;
using detail::elems_of;
using detail::require;
using detail::shape_str;

namespace {

struct ConvDims {
    int64_t N, C, H, W;
    int64_t OC, KH, KW;
    int64_t OH, OW;
    int64_t stride, pad;
};

ConvDims check_conv(const Tensor& input, const Tensor& weights, const Tensor* bias,
                    const ConvParams& p, const Tensor* out) {
    detail::require_same_dtype("conv_forward", input, weights);
    const auto& is = input.shape();
    const auto& ws = weights.shape();
    ConvDims d{is.n, is.c, is.h, is.w, ws.n, ws.h, ws.w, 0, 0, p.stride, p.pad};
    require(ws.c == is.c, "conv_forward",
            "weight input channels " + std::to_string(ws.c) + " != input channels " +
                std::to_string(is.c));
    require(p.stride >= 1 && p.pad >= 0, "conv_forward", "invalid stride/pad");
    d.OH = conv_out_dim(is.h, d.KH, p.stride, p.pad);
    d.OW = conv_out_dim(is.w, d.KW, p.stride, p.pad);
    require(d.OH >= 1 && d.OW >= 1, "conv_forward",
            "kernel does not fit input " + shape_str(is));
    if (bias) {
        detail::require_same_dtype("conv_forward", input, *bias);
        require(bias->shape() == Shape{1, d.OC, 1, 1}, "conv_forward",
                "bias shape " + shape_str(bias->shape()) + " != 1x" + std::to_string(d.OC) +
                    "x1x1");
    }
    if (out) {
        require(out->dtype() == input.dtype(), "conv_forward", "output dtype differs from input");
        require(out->shape() == Shape{d.N, d.OC, d.OH, d.OW}, "conv_forward",
                "output shape " + shape_str(out->shape()) + " != expected");
    }
    return d;
}

// f32 path: im2row per batch item, then a row-major GEMM. Padding
// contributes explicit zeros so every output accumulates the same term count.
void conv_f32(const Tensor& input, const Tensor& weights, const Tensor* bias, const ConvDims& d,
              Tensor& out) {
    const auto in = input.f32();
    const auto w = weights.f32();
    auto dst = out.f32();
    const int64_t cols = d.C * d.KH * d.KW;
    const int64_t rows = d.OH * d.OW;
    std::vector<float> patch(static_cast<size_t>(rows * cols));
    for (int64_t n = 0; n < d.N; ++n) {
#pragma omp parallel for schedule(static)
        for (int64_t j = 0; j < rows; ++j) {
            const int64_t oh = j / d.OW, ow = j % d.OW;
            float* row = patch.data() + j * cols;
            int64_t k = 0;
            for (int64_t c = 0; c < d.C; ++c) {
                const float* src = in.data() + (n * d.C + c) * d.H * d.W;
                for (int64_t kh = 0; kh < d.KH; ++kh) {
                    const int64_t ih = oh * d.stride - d.pad + kh;
                    for (int64_t kw = 0; kw < d.KW; ++kw) {
                        const int64_t iw = ow * d.stride - d.pad + kw;
                        row[k++] = (ih >= 0 && ih < d.H && iw >= 0 && iw < d.W)
                                       ? src[ih * d.W + iw]
                                       : 0.0f;
                    }
                }
            }
        }
#pragma omp parallel for schedule(static)
        for (int64_t oc = 0; oc < d.OC; ++oc) {
            const float* wrow = w.data() + oc * cols;
            const float b = bias ? bias->f32()[static_cast<size_t>(oc)] : 0.0f;
            float* o = dst.data() + (n * d.OC + oc) * rows;
            for (int64_t j = 0; j < rows; ++j) {
                const float* row = patch.data() + j * cols;
                float acc = 0.0f;
                for (int64_t k = 0; k < cols; ++k) acc += wrow[k] * row[k];
                o[j] = acc + b;
            }
        }
    }
}

// f16 path: direct loops; every multiply and accumulation step is a rounded
// half operation, associated per AccumPolicy. Padding pushes zero terms so
// the reduction tree shape depends only on geometry.
void conv_f16(const Tensor& input, const Tensor& weights, const Tensor* bias, const ConvDims& d,
              const AccumPolicy& policy, Tensor& out) {
    const auto in = input.f16();
    const auto w = weights.f16();
    auto dst = out.f16();
    const Half zero{0};
#pragma omp parallel for collapse(2) schedule(static)
    for (int64_t n = 0; n < d.N; ++n) {
        for (int64_t oc = 0; oc < d.OC; ++oc) {
            const Half* wbase = w.data() + oc * d.C * d.KH * d.KW;
            const Half b = bias ? bias->f16()[static_cast<size_t>(oc)] : zero;
            Half* o = dst.data() + (n * d.OC + oc) * d.OH * d.OW;
            for (int64_t oh = 0; oh < d.OH; ++oh) {
                for (int64_t ow = 0; ow < d.OW; ++ow) {
                    HalfAccumulator acc(policy);
                    const Half* wk = wbase;
                    for (int64_t c = 0; c < d.C; ++c) {
                        const Half* src = in.data() + (n * d.C + c) * d.H * d.W;
                        for (int64_t kh = 0; kh < d.KH; ++kh) {
                            const int64_t ih = oh * d.stride - d.pad + kh;
                            for (int64_t kw = 0; kw < d.KW; ++kw) {
                                const int64_t iw = ow * d.stride - d.pad + kw;
                                const Half x = (ih >= 0 && ih < d.H && iw >= 0 && iw < d.W)
                                                   ? src[ih * d.W + iw]
                                                   : zero;
                                acc.push(h_mul(x, *wk++));
                            }
                        }
                    }
                    Half r = acc.finish();
                    if (bias) r = h_add(r, b);
                    o[oh * d.OW + ow] = r;
                }
            }
        }
    }
}

template <class M>
void inner_product_impl(const Tensor& input, const Tensor& weights, const Tensor* bias,
                        const AccumPolicy& policy, Tensor& out) {
    const auto in = elems_of<M>(input);
    const auto w = elems_of<M>(weights);
    auto dst = elems_of<M>(out);
    const int64_t N = input.shape().n;
    const int64_t K = input.elems() / N;
    const int64_t OC = weights.shape().n;
#pragma omp parallel for collapse(2) schedule(static)
    for (int64_t n = 0; n < N; ++n) {
        for (int64_t oc = 0; oc < OC; ++oc) {
            const auto* x = in.data() + n * K;
            const auto* wrow = w.data() + oc * K;
            typename M::Accumulator acc(policy);
            for (int64_t k = 0; k < K; ++k) acc.push(M::mul(x[k], wrow[k]));
            auto r = acc.finish();
            if (bias) r = M::add(r, elems_of<M>(*bias)[static_cast<size_t>(oc)]);
            dst[n * OC + oc] = r;
        }
    }
}

} // namespace

void conv_forward_into(const Tensor& input, const Tensor& weights, const Tensor* bias,
                       const ConvParams& p, const AccumPolicy& policy, Tensor& out) {
    const ConvDims d = check_conv(input, weights, bias, p, &out);
    if (input.dtype() == Dtype::F32) {
        conv_f32(input, weights, bias, d, out);
    } else {
        conv_f16(input, weights, bias, d, policy, out);
    }
}

Tensor conv_forward(const Tensor& input, const Tensor& weights, const Tensor* bias,
                    const ConvParams& p, const AccumPolicy& policy) {
    const ConvDims d = check_conv(input, weights, bias, p, nullptr);
    Tensor out = Tensor::alloc({d.N, d.OC, d.OH, d.OW}, input.dtype());
    conv_forward_into(input, weights, bias, p, policy, out);
    return out;
}

void inner_product_forward_into(const Tensor& input, const Tensor& weights, const Tensor* bias,
                                const AccumPolicy& policy, Tensor& out) {
    detail::require_same_dtype("inner_product_forward", input, weights);
    const int64_t K = input.elems() / input.shape().n;
    const auto& ws = weights.shape();
    require(ws.c == K && ws.h == 1 && ws.w == 1, "inner_product_forward",
            "weight inner dim " + std::to_string(ws.c) + " != input C*H*W " + std::to_string(K));
    if (bias) {
        detail::require_same_dtype("inner_product_forward", input, *bias);
        require(bias->shape() == Shape{1, ws.n, 1, 1}, "inner_product_forward",
                "bias shape " + shape_str(bias->shape()) + " != 1x" + std::to_string(ws.n) +
                    "x1x1");
    }
    require(out.dtype() == input.dtype(), "inner_product_forward",
            "output dtype differs from input");
    require(out.shape() == Shape{input.shape().n, ws.n, 1, 1}, "inner_product_forward",
            "output shape " + shape_str(out.shape()) + " != expected");
    dispatch_dtype(input.dtype(),
                   [&](auto m) { inner_product_impl<decltype(m)>(input, weights, bias, policy, out); });
}

Tensor inner_product_forward(const Tensor& input, const Tensor& weights, const Tensor* bias,
                             const AccumPolicy& policy) {
    Tensor out = Tensor::alloc({input.shape().n, weights.shape().n, 1, 1}, input.dtype());
    inner_product_forward_into(input, weights, bias, policy, out);
    return out;
}

} // namespace hg
