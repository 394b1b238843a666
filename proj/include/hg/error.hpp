// Copyright (C) 2026 hginfer contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace hg {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Allocation rejected (zero dimension, size overflow).
class AllocError : public Error {
public:
    using Error::Error;
};

// Tensor/layer shape inconsistency; message names the offending layer or blob.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Invalid layer or run configuration (bad group count, non power-of-two shift, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed network description text; message carries line information.
class ParseError : public Error {
public:
    using Error::Error;
};

// Graph-level validation failure; message names the layer or blob.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Weight-file container violation (magic, version, sizes, mixed dtypes).
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace hg
