#include <algorithm>
#include <sstream>

#include "tooldc/cotforge.hpp"
#include "tooldc/evalharness.hpp"
#include "tooldc/library_io.hpp"

namespace tooldc {

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// xlam annotates types Python-style: "str", "List[int]", "Dict[str, Any]",
// "float, optional".
std::optional<ParamType> xlam_type(std::string keyword) {
    keyword = trim(keyword);
    if (auto canonical = parse_param_type(keyword)) return canonical;
    std::string head = keyword.substr(0, keyword.find('['));
    std::transform(head.begin(), head.end(), head.begin(), [](unsigned char c) { return std::tolower(c); });
    if (head == "str") return ParamType::String;
    if (head == "int") return ParamType::Integer;
    if (head == "bool") return ParamType::Boolean;
    if (head == "list" || head == "tuple" || head == "set" || head == "sequence") return ParamType::Array;
    if (head == "dict" || head == "mapping") return ParamType::Object;
    if (head == "any") return ParamType::Any;
    return std::nullopt;
}

json maybe_embedded(const json& j) {
    return j.is_string() ? json::parse(j.get<std::string>()) : j;
}

ToolDefinition xlam_tool(const json& j) {
    const auto& params = j.contains("parameters") ? j.at("parameters") : json(nullptr);
    if (params.is_object() && params.contains("properties")) return tool_from_json(j);

    ToolDefinition tool;
    tool.name = j.at("name").get<std::string>();
    tool.description = j.value("description", "");
    if (params.is_null()) return tool;
    for (const auto& [pname, pdef] : params.items()) {
        ParamSpec spec;
        spec.name = pname;
        spec.description = pdef.value("description", "");
        std::string keyword = pdef.value("type", "any");
        bool optional = pdef.contains("default");
        if (auto comma = keyword.rfind(", optional"); comma != std::string::npos && comma + 10 == keyword.size()) {
            optional = true;
            keyword.resize(comma);
        }
        auto type = xlam_type(keyword);
        if (!type)
            throw LibraryError(LibraryError::Kind::UnknownType,
                               "unknown type '" + keyword + "' for " + tool.name + "." + pname);
        spec.type = *type;
        spec.required = !optional;
        tool.params.push_back(std::move(spec));
    }
    return tool;
}

}  // namespace

RawSample raw_sample_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("raw sample must be an object");
    RawSample sample;
    sample.query = j.at("query").get<std::string>();

    std::vector<ToolDefinition> tools;
    for (const auto& t : maybe_embedded(j.at("tools"))) tools.push_back(xlam_tool(t));
    sample.library = ToolLibrary(std::move(tools));

    for (const auto& a : maybe_embedded(j.at("answers"))) {
        ToolInvocation call;
        call.name = a.at("name").get<std::string>();
        if (!sample.library.find(call.name))
            throw std::invalid_argument("answer calls unknown tool '" + call.name + "'");
        if (auto args = a.find("arguments"); args != a.end() && !args->is_null()) {
            for (const auto& [k, v] : args->items()) call.args.emplace_back(k, value_from_json(v));
        }
        sample.ground_truth.push_back(std::move(call));
    }
    return sample;
}

std::vector<RawSample> read_raw_corpus(std::istream& in) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    std::vector<RawSample> out;

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return out;
    if (text[first] == '[') {
        json all;
        try {
            all = json::parse(text);
        } catch (const json::parse_error& e) {
            throw DatasetError(1, e.what());
        }
        std::size_t entry = 0;
        for (const auto& j : all) {
            ++entry;
            try {
                out.push_back(raw_sample_from_json(j));
            } catch (const std::exception& e) {
                throw DatasetError(entry, std::string("entry: ") + e.what());
            }
        }
        return out;
    }

    std::istringstream lines(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(lines, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(raw_sample_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw DatasetError(number, e.what());
        }
    }
    return out;
}

}  // namespace tooldc
