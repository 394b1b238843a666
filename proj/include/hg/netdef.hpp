// Copyright (C) 2026 hginfer contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hg {

enum class LayerKind {
    Input,
    Convolution,
    Pooling,
    ReLU,
    InnerProduct,
    BatchNorm,
    Scale,
    Eltwise,
    Softmax,
};

std::string_view layer_kind_name(LayerKind kind);
std::optional<LayerKind> layer_kind_from_name(std::string_view name);

using ParamValue = std::variant<int64_t, float, bool, std::string, std::vector<float>>;
using ParamMap = std::map<std::string, ParamValue>;

/// One node of the network graph. Params hold only integers, binary32
/// scalars, booleans, mode strings, and float lists; half-typed scalar
/// hyperparameters cannot be expressed.
struct LayerSpec {
    std::string name;
    LayerKind kind = LayerKind::Input;
    std::vector<std::string> inputs;   // blob names consumed
    std::vector<std::string> outputs;  // blob names produced
    ParamMap params;
    std::vector<std::string> weight_names;

    bool operator==(const LayerSpec&) const = default;
};

/// Declarative network description. The layer list is a topological order:
/// validation requires every consumed blob to be produced by an earlier
/// layer, so the graph is a DAG by construction.
struct NetDef {
    std::string name;
    std::vector<LayerSpec> layers;

    bool operator==(const NetDef&) const = default;
};

/// Parses the JSON network description (schema in docs/formats.md), applies
/// per-kind parameter defaults, and validates the graph. Throws ParseError
/// with line information for malformed text and ValidationError naming the
/// offending layer or blob for graph violations.
NetDef parse_netdef(std::string_view text);
NetDef load_netdef(const std::string& path);
std::string serialize_netdef(const NetDef& net);

/// Graph and parameter validation on an already-built NetDef.
void validate(const NetDef& net);

// Typed parameter access; validation has guaranteed presence and type.
int64_t param_int(const LayerSpec& layer, std::string_view key);
float param_float(const LayerSpec& layer, std::string_view key);
bool param_bool(const LayerSpec& layer, std::string_view key);
const std::string& param_str(const LayerSpec& layer, std::string_view key);
const std::vector<float>& param_floats(const LayerSpec& layer, std::string_view key);

} // namespace hg
