// Copyright (C) 2026 hginfer contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hg/layers.hpp"
#include "kernels_common.hpp"

namespace hg {

using detail::dispatch_dtype;
using detail::elems_of;
using detail::require;
using detail::shape_str;

float auto_shift_factor(float max_abs) {
    if (!(max_abs > 0.0f) || !std::isfinite(max_abs)) return 1.0f;
    int e = std::ilogb(max_abs);
    if (std::ldexp(1.0f, e) != max_abs) ++e; // ceil(log2)
    return std::clamp(std::ldexp(1.0f, -e + 3), 0x1p-10f, 0x1p10f);
}

namespace {

bool is_power_of_two(float s) {
    if (!(s > 0.0f) || !std::isfinite(s)) return false;
    int e = 0;
    return std::frexp(s, &e) == 0.5f;
}

float resolve_shift(const BatchNormConfig& cfg, float max_abs) {
    if (cfg.shift_mode == ShiftMode::Auto) return auto_shift_factor(max_abs);
    if (!is_power_of_two(cfg.fixed_shift)) {
        throw ConfigError("batchnorm: fixed shift factor must be a positive power of two");
    }
    return cfg.fixed_shift;
}

template <class M>
typename M::Elem grouped_mean_impl(std::span<const typename M::Elem> values, int64_t G) {
    const int64_t n = static_cast<int64_t>(values.size());
    if (n == 0) throw ConfigError("grouped_mean: empty input");
    if (G < 1 || G > n) throw ConfigError("grouped_mean: group count must be in [1, n]");
    const int64_t base = n / G, rem = n % G;
    typename M::Accumulator combined{};
    int64_t idx = 0;
    for (int64_t g = 0; g < G; ++g) {
        const int64_t size = base + (g < rem ? 1 : 0);
        typename M::Accumulator gsum{};
        for (int64_t i = 0; i < size; ++i) gsum.push(values[static_cast<size_t>(idx + i)]);
        idx += size;
        const auto gmean = M::scale(gsum.finish(), 1.0f / static_cast<float>(size));
        combined.push(M::scale(gmean, static_cast<float>(size) / static_cast<float>(n)));
    }
    return combined.finish();
}

template <class M>
typename M::Elem shifted_variance_impl(std::span<const typename M::Elem> values,
                                       typename M::Elem mean, const BatchNormConfig& cfg) {
    const int64_t n = static_cast<int64_t>(values.size());
    if (n == 0) throw ConfigError("shifted_variance: empty input");
    const int64_t G = std::min<int64_t>(cfg.group_count, n);
    if (G < 1) throw ConfigError("shifted_variance: group count must be >= 1");

    float max_abs = 0.0f;
    bool saw_nan = false;
    for (const auto v : values) {
        const float d = std::fabs(M::widen(M::sub(v, mean)));
        if (std::isnan(d)) saw_nan = true;
        if (d > max_abs) max_abs = d;
    }
    if (saw_nan) max_abs = std::numeric_limits<float>::infinity();
    if (max_abs == 0.0f) return M::zero();
    const float s = resolve_shift(cfg, max_abs);

    // grouped mean over squared shifted deviations, computed on the fly
    const int64_t base = n / G, rem = n % G;
    typename M::Accumulator combined{};
    int64_t idx = 0;
    for (int64_t g = 0; g < G; ++g) {
        const int64_t size = base + (g < rem ? 1 : 0);
        typename M::Accumulator gsum{};
        for (int64_t i = 0; i < size; ++i) {
            const auto d = M::scale(M::sub(values[static_cast<size_t>(idx + i)], mean), s);
            gsum.push(M::mul(d, d));
        }
        idx += size;
        const auto gmean = M::scale(gsum.finish(), 1.0f / static_cast<float>(size));
        combined.push(M::scale(gmean, static_cast<float>(size) / static_cast<float>(n)));
    }
    // unshift once, at the very end
    return M::scale(combined.finish(), 1.0f / (s * s));
}

template <class M>
void batchnorm_impl(const Tensor& input, const BatchNormConfig& cfg, const Tensor* gmean,
                    const Tensor* gvar, Tensor& out) {
    const auto in = elems_of<M>(input);
    auto dst = elems_of<M>(out);
    const auto& s = input.shape();
    const int64_t N = s.n, C = s.c, HW = s.h * s.w;
    const int64_t per_channel = N * HW;
#pragma omp parallel for schedule(static)
    for (int64_t c = 0; c < C; ++c) {
        typename M::Elem mu;
        float var_f;
        if (cfg.use_global_stats) {
            mu = elems_of<M>(*gmean)[static_cast<size_t>(c)];
            var_f = M::widen(elems_of<M>(*gvar)[static_cast<size_t>(c)]);
        } else {
            std::vector<typename M::Elem> vals(static_cast<size_t>(per_channel));
            int64_t i = 0;
            for (int64_t n = 0; n < N; ++n) {
                const auto* src = in.data() + (n * C + c) * HW;
                for (int64_t p = 0; p < HW; ++p) vals[static_cast<size_t>(i++)] = src[p];
            }
            mu = grouped_mean_impl<M>(vals, cfg.group_count);
            var_f = M::widen(shifted_variance_impl<M>(vals, mu, cfg));
        }
        // epsilon and the reciprocal square root stay in binary32
        const float inv_std = 1.0f / std::sqrt(var_f + cfg.epsilon);
        for (int64_t n = 0; n < N; ++n) {
            const auto* src = in.data() + (n * C + c) * HW;
            auto* o = dst.data() + (n * C + c) * HW;
            for (int64_t p = 0; p < HW; ++p) o[p] = M::scale(M::sub(src[p], mu), inv_std);
        }
    }
}

} // namespace

Half grouped_mean(std::span<const Half> values, int64_t group_count) {
    return grouped_mean_impl<detail::F16Math>(values, group_count);
}

float grouped_mean(std::span<const float> values, int64_t group_count) {
    return grouped_mean_impl<detail::F32Math>(values, group_count);
}

Half combine_group_means(std::span<const Half> means, std::span<const int64_t> sizes,
                         int64_t total_count) {
    if (means.empty() || means.size() != sizes.size() || total_count < 1) {
        throw ConfigError("combine_group_means: inconsistent arguments");
    }
    HalfAccumulator acc{};
    for (size_t g = 0; g < means.size(); ++g) {
        acc.push(h_scale_by_float(means[g],
                                  static_cast<float>(sizes[g]) / static_cast<float>(total_count)));
    }
    return acc.finish();
}

Half shifted_variance(std::span<const Half> values, Half mean, const BatchNormConfig& cfg) {
    return shifted_variance_impl<detail::F16Math>(values, mean, cfg);
}

float shifted_variance(std::span<const float> values, float mean, const BatchNormConfig& cfg) {
    return shifted_variance_impl<detail::F32Math>(values, mean, cfg);
}

void batchnorm_forward_into(const Tensor& input, const BatchNormConfig& cfg,
                            const Tensor* global_mean, const Tensor* global_var, Tensor& out) {
    const auto& s = input.shape();
    if (cfg.use_global_stats) {
        require(global_mean && global_var, "batchnorm_forward",
                "use_global_stats requires mean and variance blobs");
        const Shape want{1, s.c, 1, 1};
        detail::require_same_dtype("batchnorm_forward", input, *global_mean);
        detail::require_same_dtype("batchnorm_forward", input, *global_var);
        require(global_mean->shape() == want && global_var->shape() == want, "batchnorm_forward",
                "stats blobs must have shape 1x" + std::to_string(s.c) + "x1x1");
    } else {
        const int64_t per_channel = s.n * s.h * s.w;
        if (cfg.group_count < 1 || cfg.group_count > per_channel) {
            throw ConfigError("batchnorm: group count " + std::to_string(cfg.group_count) +
                              " exceeds per-channel element count " + std::to_string(per_channel));
        }
    }
    if (cfg.shift_mode == ShiftMode::Fixed && !is_power_of_two(cfg.fixed_shift)) {
        throw ConfigError("batchnorm: fixed shift factor must be a positive power of two");
    }
    require(out.dtype() == input.dtype() && out.shape() == input.shape(), "batchnorm_forward",
            "output must match input shape and dtype");
    dispatch_dtype(input.dtype(), [&](auto m) {
        batchnorm_impl<decltype(m)>(input, cfg, global_mean, global_var, out);
    });
}

Tensor batchnorm_forward(const Tensor& input, const BatchNormConfig& cfg,
                         const Tensor* global_mean, const Tensor* global_var) {
    Tensor out = Tensor::alloc(input.shape(), input.dtype());
    batchnorm_forward_into(input, cfg, global_mean, global_var, out);
    return out;
}

} // namespace hg
