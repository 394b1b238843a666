// Copyright (C) 2026 hginfer contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sstream>

#include "hg/accum.hpp"
#include "hg/error.hpp"
#include "hg/tensor.hpp"

namespace hg::detail {

template <class M>
std::span<const typename M::Elem> elems_of(const Tensor& t);
template <class M>
std::span<typename M::Elem> elems_of(Tensor& t);

template <>
inline std::span<const float> elems_of<F32Math>(const Tensor& t) { return t.f32(); }
template <>
inline std::span<float> elems_of<F32Math>(Tensor& t) { return t.f32(); }
template <>
inline std::span<const Half> elems_of<F16Math>(const Tensor& t) { return t.f16(); }
template <>
inline std::span<Half> elems_of<F16Math>(Tensor& t) { return t.f16(); }

// Runs f with the math policy matching the dtype.
template <class F>
decltype(auto) dispatch_dtype(Dtype d, F&& f) {
    if (d == Dtype::F32) return f(F32Math{});
    return f(F16Math{});
}

inline void require(bool ok, const char* op, const std::string& what) {
    if (!ok) {
        std::ostringstream os;
        os << op << ": " << what;
        throw ShapeError(os.str());
    }
}

inline std::string shape_str(const Shape& s) {
    std::ostringstream os;
    os << s.n << "x" << s.c << "x" << s.h << "x" << s.w;
    return os.str();
}

inline void require_same_dtype(const char* op, const Tensor& a, const Tensor& b) {
    if (a.dtype() != b.dtype()) {
        std::ostringstream os;
        os << op << ": mixed dtypes " << dtype_name(a.dtype()) << " vs " << dtype_name(b.dtype());
        throw ShapeError(os.str());
    }
}

} // namespace hg::detail
