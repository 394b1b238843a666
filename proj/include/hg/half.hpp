// Copyright (C) 2026 hginfer contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace hg {

/// IEEE-754 binary16 value held as its raw bit pattern:
/// 1 sign bit, 5 exponent bits (bias 15), 10 mantissa bits.
/// Finite range is [2^-24, 65504] in magnitude. All arithmetic on Half is
/// emulated in software: operands are widened to binary32 (exact), the
/// operation runs in binary32, and the result is rounded once back to
/// binary16 with round-to-nearest, ties-to-even. For +, -, *, / of half
/// operands this equals the correctly rounded half operation.
struct Half {
    uint16_t bits = 0;

    friend bool operator==(Half a, Half b) { return a.bits == b.bits; }
    friend bool operator!=(Half a, Half b) { return a.bits != b.bits; }
};

inline constexpr uint16_t kHalfPosInfBits = 0x7C00;
inline constexpr uint16_t kHalfNegInfBits = 0xFC00;
// Every NaN produced by conversion or arithmetic collapses to this pattern.
inline constexpr uint16_t kHalfCanonicalNanBits = 0x7E00;
inline constexpr uint16_t kHalfMaxFiniteBits = 0x7BFF;

inline constexpr float kHalfMaxFinite = 65504.0f;      // value of 0x7BFF
inline constexpr float kHalfMinSubnormal = 0x1p-24f;   // value of 0x0001

inline bool h_isnan(Half h) {
    return (h.bits & 0x7FFFu) > 0x7C00u;
}

inline bool h_isinf(Half h) {
    return (h.bits & 0x7FFFu) == 0x7C00u;
}

inline bool h_isfinite(Half h) {
    return (h.bits & 0x7C00u) != 0x7C00u;
}

inline Half h_neg(Half h) {
    return Half{static_cast<uint16_t>(h.bits ^ 0x8000u)};
}

/// Exact widening: every binary16 value is representable in binary32.
inline float f16_to_f32(Half h) {
    const uint32_t sign = static_cast<uint32_t>(h.bits & 0x8000u) << 16;
    const uint32_t exp = (h.bits >> 10) & 0x1Fu;
    uint32_t mant = h.bits & 0x3FFu;
    uint32_t out;
    if (exp == 0) {
        if (mant == 0) {
            out = sign; // +-0
        } else {
            // Subnormal half: renormalize into the binary32 format.
            const int shift = std::countl_zero(mant) - 21; // in [1, 10]
            mant = (mant << shift) & 0x3FFu;
            out = sign | ((113u - static_cast<uint32_t>(shift)) << 23) | (mant << 13);
        }
    } else if (exp == 31) {
        out = sign | 0x7F800000u | (mant << 13); // inf / NaN (payload kept)
    } else {
        out = sign | ((exp + 112u) << 23) | (mant << 13);
    }
    return std::bit_cast<float>(out);
}

/// Correctly rounded binary32 -> binary16 under round-to-nearest, ties-to-even.
/// Magnitudes rounding beyond 65504 give +-infinity (65520, the midpoint to
/// 2^16, ties to even and overflows). Magnitudes at or below 2^-25 round to
/// +-0. NaN inputs collapse to the canonical quiet NaN pattern.
inline Half f32_to_f16(float x) {
    const uint32_t u = std::bit_cast<uint32_t>(x);
    const uint16_t sign = static_cast<uint16_t>((u >> 16) & 0x8000u);
    const uint32_t abs = u & 0x7FFFFFFFu;

    if (abs >= 0x47800000u) { // |x| >= 2^16: overflow, inf, or NaN
        if (abs > 0x7F800000u) return Half{kHalfCanonicalNanBits};
        return Half{static_cast<uint16_t>(sign | kHalfPosInfBits)};
    }
    if (abs >= 0x38800000u) { // normal half range: |x| >= 2^-14
        const uint32_t exp = (abs >> 23) - 112u;
        uint32_t v = (exp << 10) | ((abs >> 13) & 0x3FFu);
        const uint32_t rem = abs & 0x1FFFu;
        // Mantissa carry may ripple into the exponent; 0x7BFF+1 == inf as required.
        v += (rem > 0x1000u) || ((rem == 0x1000u) && (v & 1u));
        return Half{static_cast<uint16_t>(sign | v)};
    }
    if (abs < 0x33000000u) { // |x| < 2^-25: below the smallest subnormal midpoint
        return Half{sign};
    }
    // Subnormal result: round the significand onto the 2^-24 grid.
    // Inputs here are normal binary32 values in [2^-25, 2^-14).
    const uint32_t mant = (abs & 0x007FFFFFu) | 0x00800000u;
    const uint32_t shift = 126u - (abs >> 23); // in [14, 24]
    uint32_t q = mant >> shift;
    const uint32_t rem = mant & ((1u << shift) - 1u);
    const uint32_t mid = 1u << (shift - 1);
    q += (rem > mid) || ((rem == mid) && (q & 1u));
    return Half{static_cast<uint16_t>(sign | q)}; // q == 1024 lands on 2^-14 exactly
}

inline Half h_add(Half a, Half b) {
    return f32_to_f16(f16_to_f32(a) + f16_to_f32(b));
}

inline Half h_sub(Half a, Half b) {
    return f32_to_f16(f16_to_f32(a) - f16_to_f32(b));
}

inline Half h_mul(Half a, Half b) {
    return f32_to_f16(f16_to_f32(a) * f16_to_f32(b));
}

inline Half h_div(Half a, Half b) {
    return f32_to_f16(f16_to_f32(a) / f16_to_f32(b));
}

/// The one sanctioned way a float scalar enters half arithmetic: widen the
/// half operand, multiply in binary32, round once. Layer code passes scalars
/// as float and never pre-converts them to half.
inline Half h_scale_by_float(Half h, float s) {
    return f32_to_f16(f16_to_f32(h) * s);
}

inline Half h_from_f32(float x) { return f32_to_f16(x); }

} // namespace hg
