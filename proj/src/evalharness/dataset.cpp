#include <set>
#include <string>

#include "tooldc/evalharness.hpp"
#include "tooldc/library_io.hpp"

namespace tooldc {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

AnswerSpec answer_from_json(const json& j) {
    if (!j.is_object()) bad("answer must be an object");
    AnswerSpec spec;
    spec.function = j.at("fn").get<std::string>();
    std::set<std::string> optional;
    if (auto it = j.find("optional"); it != j.end()) {
        for (const auto& name : *it) optional.insert(name.get<std::string>());
    }
    if (auto params = j.find("params"); params != j.end()) {
        if (!params->is_object()) bad("answer params must be an object");
        for (const auto& [name, values] : params->items()) {
            ParamAnswer pa;
            pa.name = name;
            pa.optional = optional.erase(name) > 0;
            if (!values.is_array()) bad("acceptable values for '" + name + "' must be a list");
            for (const auto& v : values) {
                if (v.is_string() && v.get<std::string>().empty()) {
                    pa.optional = true;
                    continue;
                }
                pa.acceptable.push_back(value_from_json(v));
            }
            if (pa.acceptable.empty() && !pa.optional) bad("no acceptable values for '" + name + "'");
            spec.params.push_back(std::move(pa));
        }
    }
    for (const auto& name : optional) spec.params.push_back(ParamAnswer{name, {}, true});
    return spec;
}

json answer_to_json(const AnswerSpec& spec) {
    json params = json::object();
    json optional = json::array();
    for (const auto& p : spec.params) {
        json values = json::array();
        for (const auto& v : p.acceptable) values.push_back(value_to_json(v));
        params[p.name] = std::move(values);
        if (p.optional) optional.push_back(p.name);
    }
    return json{{"fn", spec.function}, {"params", std::move(params)}, {"optional", std::move(optional)}};
}

}  // namespace

EvalInstance instance_from_json(const json& j) {
    if (!j.is_object()) bad("instance must be a JSON object");
    EvalInstance inst;
    inst.id = j.at("id").get<std::string>();
    inst.category = j.value("category", "");
    inst.query = j.at("question").get<std::string>();
    inst.library = library_from_json(j.at("functions"));
    if (auto golden = j.find("golden"); golden != j.end()) inst.golden = golden->get<std::vector<std::string>>();
    for (const auto& name : inst.golden) {
        if (!inst.library.find(name)) bad("golden tool '" + name + "' is not in the library");
    }
    if (auto answers = j.find("answers"); answers != j.end()) {
        for (const auto& a : *answers) inst.answers.push_back(answer_from_json(a));
    }
    return inst;
}

json instance_to_json(const EvalInstance& inst) {
    json answers = json::array();
    for (const auto& a : inst.answers) answers.push_back(answer_to_json(a));
    return json{{"id", inst.id},
                {"category", inst.category},
                {"question", inst.query},
                {"functions", library_to_json(inst.library)},
                {"golden", inst.golden},
                {"answers", std::move(answers)}};
}

std::vector<EvalInstance> read_dataset(std::istream& in) {
    std::vector<EvalInstance> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(instance_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw DatasetError(number, e.what());
        }
    }
    return out;
}

void write_dataset(std::ostream& out, const std::vector<EvalInstance>& dataset) {
    for (const auto& inst : dataset) out << instance_to_json(inst).dump() << '\n';
}

ToolLibrary pooled_tools(const std::vector<EvalInstance>& dataset) {
    std::vector<ToolDefinition> tools;
    std::set<std::string> seen;
    for (const auto& inst : dataset) {
        for (const auto& tool : inst.library.tools()) {
            if (seen.insert(tool.name).second) tools.push_back(tool);
        }
    }
    return ToolLibrary(std::move(tools));
}

}  // namespace tooldc
