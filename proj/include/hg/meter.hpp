// Copyright (C) 2026 hginfer contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

namespace hg {

/// Tracks live blob bytes and dtype-conversion work for one forward run.
/// peak_bytes is monotone and never below current_bytes.
struct MemoryMeter {
    size_t current_bytes = 0;
    size_t peak_bytes = 0;
    uint64_t conversion_count = 0; // elements converted between dtypes

    void on_alloc(size_t bytes) {
        current_bytes += bytes;
        if (current_bytes > peak_bytes) peak_bytes = current_bytes;
    }

    void on_free(size_t bytes) { current_bytes -= bytes; }

    void on_convert(uint64_t elements) { conversion_count += elements; }
};

} // namespace hg
