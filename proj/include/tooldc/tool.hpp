#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tooldc/value.hpp"

namespace tooldc {

enum class ParamType { String, Integer, Float, Boolean, Array, Object, Any };

/// Canonical keyword written by render_library ("dict" for objects, matching
/// the benchmark schema files).
std::string_view to_string(ParamType type);

/// Accepts the canonical keywords plus the aliases number, object, dict,
/// tuple. Anything else yields nullopt.
std::optional<ParamType> parse_param_type(std::string_view keyword);

struct ParamSpec {
    std::string name;
    ParamType type = ParamType::Any;
    std::string description;
    bool required = false;

    friend bool operator==(const ParamSpec&, const ParamSpec&) = default;
};

struct ToolDefinition {
    std::string name;
    std::string description;
    std::vector<ParamSpec> params;

    const ParamSpec* find_param(std::string_view param_name) const;

    friend bool operator==(const ToolDefinition&, const ToolDefinition&) = default;
};

/// True when `name` is a dotted identifier: ident ('.' ident)*.
bool is_dotted_identifier(std::string_view name);

/// True when `name` is a plain identifier: [A-Za-z_][A-Za-z0-9_]*.
bool is_identifier(std::string_view name);

class LibraryError : public std::runtime_error {
public:
    enum class Kind { Parse, DuplicateTool, UnknownType, InvalidName, DuplicateParam, Shape };

    LibraryError(Kind kind, std::string message, std::size_t offset = 0)
        : std::runtime_error(std::move(message)), kind_(kind), offset_(offset) {}

    Kind kind() const noexcept { return kind_; }
    /// Byte offset of a JSON syntax error; 0 for other kinds.
    std::size_t offset() const noexcept { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

/// Ordered tool collection with a name index. Construction validates the
/// invariants: unique tool names, valid identifiers, unique param names.
class ToolLibrary {
public:
    ToolLibrary() = default;
    explicit ToolLibrary(std::vector<ToolDefinition> tools);

    const std::vector<ToolDefinition>& tools() const noexcept { return tools_; }
    std::size_t size() const noexcept { return tools_.size(); }
    bool empty() const noexcept { return tools_.empty(); }
    const ToolDefinition& operator[](std::size_t position) const { return tools_.at(position); }

    std::optional<std::size_t> position_of(std::string_view name) const;
    const ToolDefinition* find(std::string_view name) const;

    /// New library holding the tools at `positions`, in that order.
    ToolLibrary subset(const std::vector<std::size_t>& positions) const;

    friend bool operator==(const ToolLibrary& a, const ToolLibrary& b) { return a.tools_ == b.tools_; }

private:
    std::vector<ToolDefinition> tools_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

struct ToolInvocation {
    std::string name;
    ValueMap args;

    friend bool operator==(const ToolInvocation&, const ToolInvocation&) = default;
};

/// Sequence of calls. The empty list stands for the null outcome.
using InvocationList = std::vector<ToolInvocation>;

}  // namespace tooldc
