// Copyright (C) 2026 hginfer contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

#include "hg/half.hpp"

namespace hg {

/// How half-precision reductions (dot products, pool sums, moment sums)
/// associate. Naive is one left-to-right chain, kept to reproduce the classic
/// overflow failures. Grouped splits the stream into fixed-size blocks:
/// terms inside a block are reduced over a balanced pairwise tree and the
/// per-block partials are then combined left to right. Both orders are fixed,
/// so results never depend on thread count.
struct AccumPolicy {
    enum class Mode { Naive, Grouped };

    Mode mode = Mode::Grouped;
    int64_t block = 256;

    static AccumPolicy naive() { return {Mode::Naive, 0}; }
    static AccumPolicy grouped(int64_t block = 256) { return {Mode::Grouped, block}; }
};

namespace detail {

// Streaming pairwise reduction: partials of equal size merge as they appear
// (binary-counter scheme), leftovers collapse smallest-first at the end. For
// a power-of-two count this is exactly the balanced binary tree.
class HalfPairwiseSum {
public:
    void push(Half v) {
        uint32_t size = 1;
        while (depth_ > 0 && sizes_[depth_ - 1] == size) {
            --depth_;
            v = h_add(partials_[depth_], v);
            size <<= 1;
        }
        partials_[depth_] = v;
        sizes_[depth_] = size;
        ++depth_;
    }

    Half finish() {
        if (depth_ == 0) return Half{0};
        Half acc = partials_[--depth_];
        while (depth_ > 0) acc = h_add(acc, partials_[--depth_]);
        return acc;
    }

    bool empty() const { return depth_ == 0; }

private:
    Half partials_[32];
    uint32_t sizes_[32];
    uint32_t depth_ = 0;
};

} // namespace detail

/// Half-precision streaming accumulator obeying an AccumPolicy.
class HalfAccumulator {
public:
    explicit HalfAccumulator(const AccumPolicy& policy = {}) : policy_(policy) {}

    void push(Half v) {
        if (policy_.mode == AccumPolicy::Mode::Naive) {
            total_ = h_add(total_, v);
            return;
        }
        block_.push(v);
        if (++in_block_ == policy_.block) flush_block();
    }

    Half finish() {
        if (policy_.mode == AccumPolicy::Mode::Grouped && in_block_ > 0) flush_block();
        return total_;
    }

private:
    void flush_block() {
        const Half partial = block_.finish();
        total_ = started_ ? h_add(total_, partial) : partial;
        started_ = true;
        in_block_ = 0;
    }

    AccumPolicy policy_;
    detail::HalfPairwiseSum block_;
    Half total_{0};
    int64_t in_block_ = 0;
    bool started_ = false;
};

/// Single-precision twin: plain binary32 arithmetic, one sequential chain.
/// The policy is accepted for interface symmetry but does not alter f32 math.
class FloatAccumulator {
public:
    explicit FloatAccumulator(const AccumPolicy& = {}) {}

    void push(float v) { total_ += v; }
    float finish() { return total_; }

private:
    float total_ = 0.0f;
};

namespace detail {

// Per-dtype arithmetic used by the layer kernels. Scalars stay in binary32
// and reach half data only through h_scale_by_float.
struct F32Math {
    using Elem = float;
    using Accumulator = FloatAccumulator;

    static Elem zero() { return 0.0f; }
    static Elem add(Elem a, Elem b) { return a + b; }
    static Elem sub(Elem a, Elem b) { return a - b; }
    static Elem mul(Elem a, Elem b) { return a * b; }
    static Elem div(Elem a, Elem b) { return a / b; }
    static Elem scale(Elem x, float s) { return x * s; }
    static float widen(Elem x) { return x; }
    static Elem exp(Elem x) { return std::exp(x); }
    static bool less(Elem a, Elem b) { return a < b; }
};

struct F16Math {
    using Elem = Half;
    using Accumulator = HalfAccumulator;

    static Elem zero() { return Half{0}; }
    static Elem add(Elem a, Elem b) { return h_add(a, b); }
    static Elem sub(Elem a, Elem b) { return h_sub(a, b); }
    static Elem mul(Elem a, Elem b) { return h_mul(a, b); }
    static Elem div(Elem a, Elem b) { return h_div(a, b); }
    static Elem scale(Elem x, float s) { return h_scale_by_float(x, s); }
    static float widen(Elem x) { return f16_to_f32(x); }
    static Elem exp(Elem x) { return f32_to_f16(std::exp(f16_to_f32(x))); }
    static bool less(Elem a, Elem b) { return f16_to_f32(a) < f16_to_f32(b); }
};

} // namespace detail
} // namespace hg
