// Copyright (C) 2026 hginfer contributors
// SPDX-License-Identifier: Apache-2.0

#include "hg/layers.hpp"

#include <algorithm>
#include <vector>

#include "kernels_common.hpp"

namespace hg {

using detail::dispatch_dtype;
using detail::elems_of;
using detail::require;
using detail::require_same_dtype;
using detail::shape_str;

int64_t conv_out_dim(int64_t in, int64_t kernel, int64_t stride, int64_t pad) {
    const int64_t padded = in + 2 * pad;
    if (kernel < 1 || stride < 1 || pad < 0 || padded < kernel) return 0;
    return (padded - kernel) / stride + 1;
}

namespace {

void require_out(const char* op, const Tensor& input, const Tensor& out, const Shape& want) {
    require(out.dtype() == input.dtype(), op, "output dtype differs from input");
    require(out.shape() == want, op,
            "output shape " + shape_str(out.shape()) + " != expected " + shape_str(want));
}

template <class M>
void relu_impl(const Tensor& input, Tensor& out) {
    const auto in = elems_of<M>(input);
    auto dst = elems_of<M>(out);
    const int64_t n = input.elems();
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
        const auto x = in[i];
        dst[i] = M::less(x, M::zero()) ? M::zero() : x;
    }
}

template <class M>
void pool_impl(const Tensor& input, const PoolParams& p, Tensor& out) {
    const auto in = elems_of<M>(input);
    auto dst = elems_of<M>(out);
    const auto& is = input.shape();
    const auto& os = out.shape();
    const int64_t N = is.n, C = is.c, H = is.h, W = is.w;
    const int64_t OH = os.h, OW = os.w;
#pragma omp parallel for collapse(2) schedule(static)
    for (int64_t n = 0; n < N; ++n) {
        for (int64_t c = 0; c < C; ++c) {
            const auto* src = in.data() + (n * C + c) * H * W;
            auto* o = dst.data() + (n * C + c) * OH * OW;
            for (int64_t oh = 0; oh < OH; ++oh) {
                for (int64_t ow = 0; ow < OW; ++ow) {
                    const int64_t h0 = oh * p.stride - p.pad;
                    const int64_t w0 = ow * p.stride - p.pad;
                    if (p.mode == PoolMode::Max) {
                        typename M::Elem best{};
                        bool seen = false;
                        for (int64_t kh = 0; kh < p.kernel; ++kh) {
                            const int64_t ih = h0 + kh;
                            if (ih < 0 || ih >= H) continue;
                            for (int64_t kw = 0; kw < p.kernel; ++kw) {
                                const int64_t iw = w0 + kw;
                                if (iw < 0 || iw >= W) continue;
                                const auto v = src[ih * W + iw];
                                if (!seen || M::less(best, v)) best = v;
                                seen = true;
                            }
                        }
                        o[oh * OW + ow] = best;
                    } else {
                        typename M::Accumulator acc{};
                        int64_t count = 0;
                        for (int64_t kh = 0; kh < p.kernel; ++kh) {
                            const int64_t ih = h0 + kh;
                            if (ih < 0 || ih >= H) continue;
                            for (int64_t kw = 0; kw < p.kernel; ++kw) {
                                const int64_t iw = w0 + kw;
                                if (iw < 0 || iw >= W) continue;
                                acc.push(src[ih * W + iw]);
                                ++count;
                            }
                        }
                        // divisor counts in-bounds elements; it enters as a float scalar
                        o[oh * OW + ow] = M::scale(acc.finish(), 1.0f / static_cast<float>(count));
                    }
                }
            }
        }
    }
}

template <class M>
void softmax_impl(const Tensor& input, Tensor& out) {
    const auto in = elems_of<M>(input);
    auto dst = elems_of<M>(out);
    const auto& s = input.shape();
    const int64_t N = s.n, C = s.c, HW = s.h * s.w;
#pragma omp parallel for collapse(2) schedule(static)
    for (int64_t n = 0; n < N; ++n) {
        for (int64_t p = 0; p < HW; ++p) {
            const int64_t base = n * C * HW + p;
            // subtract the channel max before exponentiation; exp(12) already
            // overflows half, so this is not optional in f16 mode
            auto mx = in[base];
            for (int64_t c = 1; c < C; ++c) {
                const auto v = in[base + c * HW];
                if (M::less(mx, v)) mx = v;
            }
            std::vector<typename M::Elem> e(static_cast<size_t>(C));
            typename M::Accumulator sum{};
            for (int64_t c = 0; c < C; ++c) {
                e[static_cast<size_t>(c)] = M::exp(M::sub(in[base + c * HW], mx));
                sum.push(e[static_cast<size_t>(c)]);
            }
            const auto z = sum.finish();
            for (int64_t c = 0; c < C; ++c) {
                dst[base + c * HW] = M::div(e[static_cast<size_t>(c)], z);
            }
        }
    }
}

template <class M>
void eltwise_impl(std::span<const Tensor* const> inputs, std::span<const float> coeffs,
                  Tensor& out) {
    auto dst = elems_of<M>(out);
    const int64_t n = out.elems();
    const size_t k = inputs.size();
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
        auto acc = M::scale(elems_of<M>(*inputs[0])[i], coeffs.empty() ? 1.0f : coeffs[0]);
        for (size_t t = 1; t < k; ++t) {
            const auto term =
                M::scale(elems_of<M>(*inputs[t])[i], coeffs.empty() ? 1.0f : coeffs[t]);
            acc = M::add(acc, term);
        }
        dst[i] = acc;
    }
}

template <class M>
void scale_impl(const Tensor& input, const Tensor& gamma, const Tensor* beta, Tensor& out) {
    const auto in = elems_of<M>(input);
    const auto g = elems_of<M>(gamma);
    auto dst = elems_of<M>(out);
    const auto& s = input.shape();
    const int64_t N = s.n, C = s.c, HW = s.h * s.w;
#pragma omp parallel for collapse(2) schedule(static)
    for (int64_t n = 0; n < N; ++n) {
        for (int64_t c = 0; c < C; ++c) {
            const auto gc = g[c];
            const int64_t base = (n * C + c) * HW;
            if (beta) {
                const auto bc = elems_of<M>(*beta)[c];
                for (int64_t i = 0; i < HW; ++i) dst[base + i] = M::add(M::mul(in[base + i], gc), bc);
            } else {
                for (int64_t i = 0; i < HW; ++i) dst[base + i] = M::mul(in[base + i], gc);
            }
        }
    }
}

} // namespace

void relu_forward_into(const Tensor& input, Tensor& out) {
    require_out("relu_forward", input, out, input.shape());
    dispatch_dtype(input.dtype(), [&](auto m) { relu_impl<decltype(m)>(input, out); });
}

Tensor relu_forward(const Tensor& input) {
    Tensor out = Tensor::alloc(input.shape(), input.dtype());
    relu_forward_into(input, out);
    return out;
}

void pool_forward_into(const Tensor& input, const PoolParams& p, Tensor& out) {
    require(p.kernel >= 1 && p.stride >= 1 && p.pad >= 0 && p.pad < p.kernel, "pool_forward",
            "invalid kernel/stride/pad");
    const auto& s = input.shape();
    const Shape want{s.n, s.c, conv_out_dim(s.h, p.kernel, p.stride, p.pad),
                     conv_out_dim(s.w, p.kernel, p.stride, p.pad)};
    require(want.h >= 1 && want.w >= 1, "pool_forward",
            "window does not fit input " + shape_str(s));
    require_out("pool_forward", input, out, want);
    dispatch_dtype(input.dtype(), [&](auto m) { pool_impl<decltype(m)>(input, p, out); });
}

Tensor pool_forward(const Tensor& input, const PoolParams& p) {
    const auto& s = input.shape();
    const Shape want{s.n, s.c, conv_out_dim(s.h, p.kernel, p.stride, p.pad),
                     conv_out_dim(s.w, p.kernel, p.stride, p.pad)};
    require(want.h >= 1 && want.w >= 1, "pool_forward",
            "window does not fit input " + shape_str(s));
    Tensor out = Tensor::alloc(want, input.dtype());
    pool_forward_into(input, p, out);
    return out;
}

void softmax_forward_into(const Tensor& input, Tensor& out) {
    require_out("softmax_forward", input, out, input.shape());
    dispatch_dtype(input.dtype(), [&](auto m) { softmax_impl<decltype(m)>(input, out); });
}

Tensor softmax_forward(const Tensor& input) {
    Tensor out = Tensor::alloc(input.shape(), input.dtype());
    softmax_forward_into(input, out);
    return out;
}

void eltwise_sum_forward_into(std::span<const Tensor* const> inputs,
                              std::span<const float> coeffs, Tensor& out) {
    require(!inputs.empty(), "eltwise_forward", "needs at least one input");
    require(coeffs.empty() || coeffs.size() == inputs.size(), "eltwise_forward",
            "coefficient count differs from input count");
    for (const Tensor* t : inputs) {
        require_same_dtype("eltwise_forward", *inputs[0], *t);
        require(t->shape() == inputs[0]->shape(), "eltwise_forward",
                "input shapes differ: " + shape_str(t->shape()) + " vs " +
                    shape_str(inputs[0]->shape()));
    }
    require_out("eltwise_forward", *inputs[0], out, inputs[0]->shape());
    dispatch_dtype(out.dtype(), [&](auto m) { eltwise_impl<decltype(m)>(inputs, coeffs, out); });
}

Tensor eltwise_sum_forward(std::span<const Tensor* const> inputs, std::span<const float> coeffs) {
    require(!inputs.empty(), "eltwise_forward", "needs at least one input");
    Tensor out = Tensor::alloc(inputs[0]->shape(), inputs[0]->dtype());
    eltwise_sum_forward_into(inputs, coeffs, out);
    return out;
}

void scale_forward_into(const Tensor& input, const Tensor& gamma, const Tensor* beta, Tensor& out) {
    require_same_dtype("scale_forward", input, gamma);
    const Shape want{1, input.shape().c, 1, 1};
    require(gamma.shape() == want, "scale_forward",
            "gamma shape " + shape_str(gamma.shape()) + " != " + shape_str(want));
    if (beta) {
        require_same_dtype("scale_forward", input, *beta);
        require(beta->shape() == want, "scale_forward",
                "beta shape " + shape_str(beta->shape()) + " != " + shape_str(want));
    }
    require_out("scale_forward", input, out, input.shape());
    dispatch_dtype(input.dtype(), [&](auto m) { scale_impl<decltype(m)>(input, gamma, beta, out); });
}

Tensor scale_forward(const Tensor& input, const Tensor& gamma, const Tensor* beta) {
    Tensor out = Tensor::alloc(input.shape(), input.dtype());
    scale_forward_into(input, gamma, beta, out);
    return out;
}

} // namespace hg
