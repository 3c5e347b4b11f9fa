#include "tooldc/tool.hpp"

#include <algorithm>
#include <set>

namespace tooldc {

std::string_view to_string(ParamType type) {
    switch (type) {
        case ParamType::String: return "string";
        case ParamType::Integer: return "integer";
        case ParamType::Float: return "float";
        case ParamType::Boolean: return "boolean";
        case ParamType::Array: return "array";
        case ParamType::Object: return "dict";
        case ParamType::Any: return "any";
    }
    return "any";
}

std::optional<ParamType> parse_param_type(std::string_view keyword) {
    if (keyword == "string") return ParamType::String;
    if (keyword == "integer") return ParamType::Integer;
    if (keyword == "float" || keyword == "number") return ParamType::Float;
    if (keyword == "boolean") return ParamType::Boolean;
    if (keyword == "array" || keyword == "tuple") return ParamType::Array;
    if (keyword == "dict" || keyword == "object") return ParamType::Object;
    if (keyword == "any") return ParamType::Any;
    return std::nullopt;
}

namespace {

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

}  // namespace

bool is_identifier(std::string_view name) {
    return !name.empty() && ident_start(name.front()) && std::all_of(name.begin(), name.end(), ident_char);
}

bool is_dotted_identifier(std::string_view name) {
    std::size_t start = 0;
    while (true) {
        const auto dot = name.find('.', start);
        if (!is_identifier(name.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start)))
            return false;
        if (dot == std::string_view::npos) return true;
        start = dot + 1;
    }
}

const ParamSpec* ToolDefinition::find_param(std::string_view param_name) const {
    auto it = std::find_if(params.begin(), params.end(), [&](const ParamSpec& p) { return p.name == param_name; });
    return it == params.end() ? nullptr : &*it;
}

ToolLibrary::ToolLibrary(std::vector<ToolDefinition> tools) : tools_(std::move(tools)) {
    for (std::size_t i = 0; i < tools_.size(); ++i) {
        const auto& tool = tools_[i];
        if (!is_dotted_identifier(tool.name))
            throw LibraryError(LibraryError::Kind::InvalidName, "invalid tool name: '" + tool.name + "'");
        std::set<std::string_view> seen;
        for (const auto& p : tool.params) {
            if (!is_identifier(p.name))
                throw LibraryError(LibraryError::Kind::InvalidName,
                                   "invalid parameter name '" + p.name + "' in tool " + tool.name);
            if (!seen.insert(p.name).second)
                throw LibraryError(LibraryError::Kind::DuplicateParam,
                                   "duplicate parameter '" + p.name + "' in tool " + tool.name);
        }
        if (!index_.emplace(tool.name, i).second)
            throw LibraryError(LibraryError::Kind::DuplicateTool, "duplicate tool: " + tool.name);
    }
}

std::optional<std::size_t> ToolLibrary::position_of(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const ToolDefinition* ToolLibrary::find(std::string_view name) const {
    auto pos = position_of(name);
    return pos ? &tools_[*pos] : nullptr;
}

ToolLibrary ToolLibrary::subset(const std::vector<std::size_t>& positions) const {
    std::vector<ToolDefinition> picked;
    picked.reserve(positions.size());
    for (auto p : positions) picked.push_back(tools_.at(p));
    return ToolLibrary(std::move(picked));
}

}  // namespace tooldc
