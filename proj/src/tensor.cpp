// Copyright (C) 2026 hginfer contributors
// SPDX-License-Identifier: Apache-2.0

#include "hg/tensor.hpp"

#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "hg/error.hpp"

namespace hg {

std::string_view dtype_name(Dtype d) {
    return d == Dtype::F32 ? "f32" : "f16";
}

std::optional<Dtype> dtype_from_name(std::string_view name) {
    if (name == "f32" || name == "F32") return Dtype::F32;
    if (name == "f16" || name == "F16") return Dtype::F16;
    return std::nullopt;
}

Tensor Tensor::alloc(const Shape& shape, Dtype dtype, MemoryMeter* meter) {
    const int64_t dims[4] = {shape.n, shape.c, shape.h, shape.w};
    for (int64_t d : dims) {
        if (d < 1) {
            std::ostringstream os;
            os << "alloc: dimension must be >= 1, got shape " << shape.n << "x"
               << shape.c << "x" << shape.h << "x" << shape.w;
            throw AllocError(os.str());
        }
    }
    unsigned __int128 total = 1;
    for (int64_t d : dims) total *= static_cast<unsigned __int128>(d);
    total *= element_size(dtype);
    if (total > static_cast<unsigned __int128>(std::numeric_limits<int64_t>::max())) {
        throw AllocError("alloc: byte size overflows addressable memory");
    }

    Tensor t;
    t.shape_ = shape;
    t.dtype_ = dtype;
    t.owned_ = std::make_unique<std::byte[]>(static_cast<size_t>(total)); // zero-filled
    t.data_ = t.owned_.get();
    if (meter) meter->on_alloc(static_cast<size_t>(total));
    return t;
}

Tensor Tensor::map(const Shape& shape, Dtype dtype, std::byte* storage) {
    Tensor t;
    t.shape_ = shape;
    t.dtype_ = dtype;
    t.data_ = storage;
    return t;
}

Tensor::Tensor(const Tensor& other) {
    shape_ = other.shape_;
    dtype_ = other.dtype_;
    if (other.data_) {
        owned_ = std::make_unique<std::byte[]>(other.byte_size());
        std::memcpy(owned_.get(), other.data_, other.byte_size());
        data_ = owned_.get();
    }
}

Tensor& Tensor::operator=(const Tensor& other) {
    if (this != &other) {
        Tensor tmp(other);
        *this = std::move(tmp);
    }
    return *this;
}

std::span<float> Tensor::f32() {
    if (dtype_ != Dtype::F32) throw ConfigError("tensor: f32 access on f16 tensor");
    return {reinterpret_cast<float*>(data_), static_cast<size_t>(elems())};
}

std::span<const float> Tensor::f32() const {
    if (dtype_ != Dtype::F32) throw ConfigError("tensor: f32 access on f16 tensor");
    return {reinterpret_cast<const float*>(data_), static_cast<size_t>(elems())};
}

std::span<Half> Tensor::f16() {
    if (dtype_ != Dtype::F16) throw ConfigError("tensor: f16 access on f32 tensor");
    return {reinterpret_cast<Half*>(data_), static_cast<size_t>(elems())};
}

std::span<const Half> Tensor::f16() const {
    if (dtype_ != Dtype::F16) throw ConfigError("tensor: f16 access on f32 tensor");
    return {reinterpret_cast<const Half*>(data_), static_cast<size_t>(elems())};
}

Tensor Tensor::convert(Dtype target, MemoryMeter* meter) const {
    Tensor out = Tensor::alloc(shape_, target, meter);
    const int64_t n = elems();
    if (target == dtype_) {
        std::memcpy(out.data_, data_, byte_size());
        return out;
    }
    if (meter) meter->on_convert(static_cast<uint64_t>(n));
    if (dtype_ == Dtype::F32) {
        const auto src = f32();
        auto dst = out.f16();
        for (int64_t i = 0; i < n; ++i) dst[i] = f32_to_f16(src[i]);
    } else {
        const auto src = f16();
        auto dst = out.f32();
        for (int64_t i = 0; i < n; ++i) dst[i] = f16_to_f32(src[i]);
    }
    return out;
}

void Tensor::fill_random(uint64_t seed, float lo, float hi) {
    if (!(lo < hi)) throw ConfigError("fill_random: requires lo < hi");
    std::mt19937_64 rng(seed);
    const int64_t n = elems();
    const float span = hi - lo;
    if (dtype_ == Dtype::F32) {
        auto dst = f32();
        for (int64_t i = 0; i < n; ++i) {
            const float u = static_cast<float>(rng() >> 40) * 0x1.0p-24f;
            dst[i] = lo + u * span;
        }
    } else {
        auto dst = f16();
        for (int64_t i = 0; i < n; ++i) {
            const float u = static_cast<float>(rng() >> 40) * 0x1.0p-24f;
            dst[i] = f32_to_f16(lo + u * span);
        }
    }
}

bool bitwise_equal(const Tensor& a, const Tensor& b) {
    if (a.shape() != b.shape() || a.dtype() != b.dtype()) return false;
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    return std::memcmp(a.data(), b.data(), a.byte_size()) == 0;
}

} // namespace hg
