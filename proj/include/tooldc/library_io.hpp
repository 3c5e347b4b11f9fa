#pragma once

#include <string>
#include <string_view>

#include "tooldc/json_fwd.hpp"
#include "tooldc/tool.hpp"

namespace tooldc {

/// Reads a JSON array of tool objects in the benchmark schema shape:
///   {"name", "description", "parameters": {"type": "dict",
///    "properties": {<p>: {"type", "description"}}, "required": [...]}}
/// Throws LibraryError on malformed JSON (with byte offset), duplicate tool
/// names, unknown type keywords and invalid identifiers.
ToolLibrary load_library(std::string_view source);

ToolLibrary library_from_json(const json& array);
ToolDefinition tool_from_json(const json& object);

/// Compact, deterministic JSON. Key order is name, description, parameters.
std::string render_library(const ToolLibrary& lib);
json library_to_json(const ToolLibrary& lib);
json tool_to_json(const ToolDefinition& tool);

/// Bridges between argument values and JSON.
Value value_from_json(const json& j);
json value_to_json(const Value& v);

}  // namespace tooldc
