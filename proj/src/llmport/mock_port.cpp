#include <algorithm>
#include <fstream>
#include <sstream>

#include "tooldc/mock_port.hpp"
#include "tooldc/prompts.hpp"

namespace tooldc {

namespace {

// End of the JSON array starting at `open`, honouring strings; npos if unbalanced.
std::size_t matching_bracket(std::string_view s, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = open; i < s.size(); ++i) {
        const char c = s[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == '[' || c == '{') ++depth;
        else if ((c == ']' || c == '}') && --depth == 0) return i;
    }
    return std::string_view::npos;
}

}  // namespace

std::set<std::string> extract_prompt_tools(std::string_view system_prompt) {
    std::set<std::string> names;
    const auto marker = system_prompt.find(prompts::kToolListMarker);
    if (marker == std::string_view::npos) return names;
    const auto open = system_prompt.find('[', marker);
    if (open == std::string_view::npos) return names;
    const auto close = matching_bracket(system_prompt, open);
    if (close == std::string_view::npos) return names;
    const auto parsed = json::parse(system_prompt.substr(open, close - open + 1), nullptr, false);
    if (!parsed.is_array()) return names;
    for (const auto& tool : parsed) {
        if (tool.is_object() && tool.contains("name") && tool["name"].is_string())
            names.insert(tool["name"].get<std::string>());
    }
    return names;
}

bool MockMatcher::matches(const MockContext& ctx) const {
    if (stage == Stage::Try && !ctx.try_stage) return false;
    if (stage == Stage::Retry && ctx.try_stage) return false;
    if (min_tools && ctx.tools.size() < *min_tools) return false;
    if (max_tools && ctx.tools.size() > *max_tools) return false;
    for (const auto& needle : query_contains)
        if (ctx.query.find(needle) == std::string::npos) return false;
    for (const auto& name : tools_include)
        if (!ctx.tools.contains(name)) return false;
    for (const auto& name : tools_exclude)
        if (ctx.tools.contains(name)) return false;
    return true;
}

void ScriptedMock::add_rule(MockMatcher matcher, std::string response) {
    rules_.push_back({[m = std::move(matcher)](const MockContext& ctx) { return m.matches(ctx); }, std::move(response)});
}

void ScriptedMock::add_rule(std::function<bool(const MockContext&)> matcher, std::string response) {
    rules_.push_back({std::move(matcher), std::move(response)});
}

std::string ScriptedMock::complete(const ChatRequest& request) {
    std::uint64_t ordinal = 0;
    {
        std::lock_guard lock(mutex_);
        ordinal = ++calls_;
    }
    if (auto it = faults_.find(ordinal); it != faults_.end()) {
        if (it->second == MockFault::Transport)
            throw LlmError(LlmError::Kind::Transport, "scripted transport fault at call " + std::to_string(ordinal));
        return std::string(kMockGibberish);
    }
    MockContext ctx{request.user, extract_prompt_tools(request.system), request.system,
                    request.system.starts_with(prompts::kTryPrefix)};
    for (const auto& rule : rules_) {
        if (rule.matcher(ctx)) return rule.response;
    }
    return default_;
}

Usage ScriptedMock::usage() const {
    std::lock_guard lock(mutex_);
    return Usage{calls_, 0, 0};
}

namespace {

std::vector<std::string> string_list(const json& j, const char* key) {
    std::vector<std::string> out;
    if (auto it = j.find(key); it != j.end()) {
        if (!it->is_array()) throw std::invalid_argument(std::string("mock fixture: '") + key + "' must be an array");
        for (const auto& e : *it) out.push_back(e.get<std::string>());
    }
    return out;
}

}  // namespace

ScriptedMock ScriptedMock::from_json(const json& fixture) {
    if (!fixture.is_object()) throw std::invalid_argument("mock fixture must be a JSON object");
    ScriptedMock mock;
    if (fixture.contains("default")) mock.set_default(fixture.at("default").get<std::string>());
    if (auto rules = fixture.find("rules"); rules != fixture.end()) {
        for (const auto& r : *rules) {
            MockMatcher m;
            m.query_contains = string_list(r, "query_contains");
            m.tools_include = string_list(r, "tools_include");
            m.tools_exclude = string_list(r, "tools_exclude");
            if (r.contains("min_tools")) m.min_tools = r.at("min_tools").get<std::size_t>();
            if (r.contains("max_tools")) m.max_tools = r.at("max_tools").get<std::size_t>();
            const auto stage = r.value("stage", "any");
            if (stage == "try") m.stage = MockMatcher::Stage::Try;
            else if (stage == "retry") m.stage = MockMatcher::Stage::Retry;
            else if (stage != "any") throw std::invalid_argument("mock fixture: unknown stage '" + stage + "'");
            mock.add_rule(std::move(m), r.at("response").get<std::string>());
        }
    }
    if (auto faults = fixture.find("faults"); faults != fixture.end()) {
        for (const auto& [ordinal, kind] : faults->items()) {
            const auto k = kind.get<std::string>();
            MockFault fault;
            if (k == "gibberish") fault = MockFault::Gibberish;
            else if (k == "transport") fault = MockFault::Transport;
            else throw std::invalid_argument("mock fixture: unknown fault '" + k + "'");
            mock.set_fault(std::stoull(ordinal), fault);
        }
    }
    return mock;
}

ScriptedMock ScriptedMock::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open mock fixture: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json(json::parse(buffer.str()));
}

}  // namespace tooldc
