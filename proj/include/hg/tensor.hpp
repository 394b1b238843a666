// Copyright (C) 2026 hginfer contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include "hg/half.hpp"
#include "hg/meter.hpp"

namespace hg {

enum class Dtype : uint8_t { F32 = 0, F16 = 1 };

constexpr size_t element_size(Dtype d) {
    return d == Dtype::F32 ? 4 : 2;
}

std::string_view dtype_name(Dtype d);
std::optional<Dtype> dtype_from_name(std::string_view name);

/// NCHW dimensions. Vectors and matrices are embedded as (N, C, 1, 1).
struct Shape {
    int64_t n = 0;
    int64_t c = 0;
    int64_t h = 0;
    int64_t w = 0;

    int64_t elems() const { return n * c * h * w; }
    bool operator==(const Shape&) const = default;
};

/// Dense NCHW tensor tagged with its element dtype. The buffer holds exactly
/// shape.elems() elements, contiguous and row-major; F16 tensors store raw
/// 16-bit patterns. Tensors either own their storage or are mapped over
/// caller-managed bytes (arena slots); copies always deep-copy into owned
/// storage.
class Tensor {
public:
    Tensor() = default;

    /// Zero-filled tensor. When a meter is given the allocation is reported
    /// to it. Throws AllocError for dimensions < 1 or byte-size overflow.
    static Tensor alloc(const Shape& shape, Dtype dtype, MemoryMeter* meter = nullptr);

    /// Non-owning tensor over externally managed storage of at least
    /// byte_size() bytes. The storage must outlive the tensor.
    static Tensor map(const Shape& shape, Dtype dtype, std::byte* storage);

    Tensor(const Tensor& other);
    Tensor& operator=(const Tensor& other);
    Tensor(Tensor&&) noexcept = default;
    Tensor& operator=(Tensor&&) noexcept = default;

    const Shape& shape() const { return shape_; }
    Dtype dtype() const { return dtype_; }
    int64_t elems() const { return shape_.elems(); }
    size_t byte_size() const { return static_cast<size_t>(elems()) * element_size(dtype_); }
    bool empty() const { return data_ == nullptr; }

    std::byte* data() { return data_; }
    const std::byte* data() const { return data_; }

    std::span<float> f32();
    std::span<const float> f32() const;
    std::span<Half> f16();
    std::span<const Half> f16() const;

    /// Elementwise dtype conversion (f32_to_f16 / f16_to_f32). Crossing
    /// dtypes reports elems() conversions to the meter; converting to the
    /// same dtype is a plain copy and reports nothing.
    Tensor convert(Dtype target, MemoryMeter* meter = nullptr) const;

    /// Deterministic uniform fill from [lo, hi), lo < hi. Draws come from
    /// std::mt19937_64 seeded with `seed`; each draw maps the top 24 bits of
    /// one 64-bit output to a binary32 value in [0, 1) and scales it into the
    /// range. F16 tensors store each binary32 draw rounded to half.
    void fill_random(uint64_t seed, float lo, float hi);

private:
    Shape shape_{};
    Dtype dtype_ = Dtype::F32;
    std::unique_ptr<std::byte[]> owned_;
    std::byte* data_ = nullptr;
};

bool bitwise_equal(const Tensor& a, const Tensor& b);

} // namespace hg
