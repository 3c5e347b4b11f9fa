#include "tooldc/library_io.hpp"

#include <set>

namespace tooldc {

namespace {

[[noreturn]] void shape_error(const std::string& what) {
    throw LibraryError(LibraryError::Kind::Shape, what);
}

std::string string_field(const json& object, const char* key, const std::string& context) {
    auto it = object.find(key);
    if (it == object.end() || it->is_null()) return {};
    if (!it->is_string()) shape_error(context + ": field '" + key + "' must be a string");
    return it->get<std::string>();
}

}  // namespace

ToolDefinition tool_from_json(const json& object) {
    if (!object.is_object()) shape_error("tool entry must be an object");
    ToolDefinition tool;
    tool.name = string_field(object, "name", "tool");
    if (tool.name.empty()) shape_error("tool entry without a name");
    tool.description = string_field(object, "description", tool.name);

    auto params_it = object.find("parameters");
    if (params_it == object.end() || params_it->is_null()) return tool;
    const json& params = *params_it;
    if (!params.is_object()) shape_error(tool.name + ": 'parameters' must be an object");

    std::set<std::string> required;
    if (auto req = params.find("required"); req != params.end() && !req->is_null()) {
        if (!req->is_array()) shape_error(tool.name + ": 'required' must be an array");
        for (const auto& r : *req) {
            if (!r.is_string()) shape_error(tool.name + ": 'required' entries must be strings");
            required.insert(r.get<std::string>());
        }
    }

    if (auto props = params.find("properties"); props != params.end() && !props->is_null()) {
        if (!props->is_object()) shape_error(tool.name + ": 'properties' must be an object");
        for (const auto& [pname, pdef] : props->items()) {
            if (!pdef.is_object()) shape_error(tool.name + "." + pname + ": property must be an object");
            ParamSpec spec;
            spec.name = pname;
            spec.description = string_field(pdef, "description", tool.name + "." + pname);
            const auto keyword = string_field(pdef, "type", tool.name + "." + pname);
            auto type = parse_param_type(keyword);
            if (!type)
                throw LibraryError(LibraryError::Kind::UnknownType,
                                   "unknown type '" + keyword + "' for " + tool.name + "." + pname);
            spec.type = *type;
            spec.required = required.erase(pname) > 0;
            tool.params.push_back(std::move(spec));
        }
    }
    if (!required.empty())
        shape_error(tool.name + ": required parameter '" + *required.begin() + "' is not declared");
    return tool;
}

ToolLibrary library_from_json(const json& array) {
    if (!array.is_array()) shape_error("tool library must be a JSON array");
    std::vector<ToolDefinition> tools;
    tools.reserve(array.size());
    for (const auto& entry : array) tools.push_back(tool_from_json(entry));
    return ToolLibrary(std::move(tools));
}

ToolLibrary load_library(std::string_view source) {
    json parsed;
    try {
        parsed = json::parse(source);
    } catch (const json::parse_error& e) {
        throw LibraryError(LibraryError::Kind::Parse, e.what(), e.byte);
    }
    return library_from_json(parsed);
}

json tool_to_json(const ToolDefinition& tool) {
    json properties = json::object();
    json required = json::array();
    for (const auto& p : tool.params) {
        properties[p.name] = json{{"type", std::string(to_string(p.type))}, {"description", p.description}};
        if (p.required) required.push_back(p.name);
    }
    return json{{"name", tool.name},
                {"description", tool.description},
                {"parameters", json{{"type", "dict"}, {"properties", std::move(properties)}, {"required", std::move(required)}}}};
}

json library_to_json(const ToolLibrary& lib) {
    json out = json::array();
    for (const auto& tool : lib.tools()) out.push_back(tool_to_json(tool));
    return out;
}

std::string render_library(const ToolLibrary& lib) { return library_to_json(lib).dump(); }

Value value_from_json(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return Value{};
        case json::value_t::boolean: return Value(j.get<bool>());
        case json::value_t::number_integer: return Value(j.get<std::int64_t>());
        case json::value_t::number_unsigned: {
            const auto u = j.get<std::uint64_t>();
            if (u > static_cast<std::uint64_t>(INT64_MAX)) return Value(static_cast<double>(u));
            return Value(static_cast<std::int64_t>(u));
        }
        case json::value_t::number_float: return Value(j.get<double>());
        case json::value_t::string: return Value(j.get<std::string>());
        case json::value_t::array: {
            ValueList list;
            list.reserve(j.size());
            for (const auto& e : j) list.push_back(value_from_json(e));
            return Value(std::move(list));
        }
        case json::value_t::object: {
            ValueMap map;
            for (const auto& [k, v] : j.items()) map.emplace_back(k, value_from_json(v));
            return Value(std::move(map));
        }
        default:
            shape_error("unsupported JSON value");
    }
}

json value_to_json(const Value& v) {
    switch (v.kind()) {
        case ValueKind::Null: return nullptr;
        case ValueKind::Boolean: return v.as_bool();
        case ValueKind::Integer: return v.as_int();
        case ValueKind::Float: return v.as_float();
        case ValueKind::Text: return v.as_text();
        case ValueKind::List: {
            json out = json::array();
            for (const auto& e : v.as_list()) out.push_back(value_to_json(e));
            return out;
        }
        case ValueKind::Map: {
            json out = json::object();
            for (const auto& [k, e] : v.as_map()) out[k] = value_to_json(e);
            return out;
        }
    }
    return nullptr;
}

}  // namespace tooldc
