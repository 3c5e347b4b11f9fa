#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tooldc/json_fwd.hpp"
#include "tooldc/llmport.hpp"

namespace tooldc {

/// What the mock can see of a request: the user query, the names of the
/// tools rendered into the system prompt, and which prompt family it is.
struct MockContext {
    std::string query;
    std::set<std::string> tools;
    std::string system;
    bool try_stage = false;
};

/// Declarative matcher; every populated field must hold.
struct MockMatcher {
    std::vector<std::string> query_contains;
    std::vector<std::string> tools_include;
    std::vector<std::string> tools_exclude;
    std::optional<std::size_t> min_tools;
    std::optional<std::size_t> max_tools;
    enum class Stage { Any, Try, Retry } stage = Stage::Any;

    bool matches(const MockContext& ctx) const;
};

struct MockRule {
    std::function<bool(const MockContext&)> matcher;
    std::string response;
};

enum class MockFault { Gibberish, Transport };

inline constexpr std::string_view kMockGibberish = "@@ scripted fault: unparseable output @@";

/// Rule-driven completion port for offline runs. The first matching rule
/// answers; otherwise the default text. Faults fire by 1-based call ordinal
/// in arrival order, so fault plans are only reproducible when callers
/// serialize their requests.
class ScriptedMock final : public CompletionPort {
public:
    ScriptedMock() = default;
    explicit ScriptedMock(std::string default_response) : default_(std::move(default_response)) {}
    ScriptedMock(ScriptedMock&& other) noexcept
        : rules_(std::move(other.rules_)),
          default_(std::move(other.default_)),
          faults_(std::move(other.faults_)),
          calls_(other.calls_) {}

    void add_rule(MockMatcher matcher, std::string response);
    void add_rule(std::function<bool(const MockContext&)> matcher, std::string response);
    void set_default(std::string response) { default_ = std::move(response); }
    void set_fault(std::uint64_t ordinal, MockFault fault) { faults_[ordinal] = fault; }

    std::string complete(const ChatRequest& request) override;
    Usage usage() const override;

    /// Fixture format:
    ///   {"default": str,
    ///    "rules": [{"query_contains": [..], "tools_include": [..],
    ///               "tools_exclude": [..], "min_tools": n, "max_tools": n,
    ///               "stage": "try"|"retry"|"any", "response": str}],
    ///    "faults": {"<ordinal>": "gibberish"|"transport"}}
    static ScriptedMock from_json(const json& fixture);
    static ScriptedMock from_file(const std::string& path);

private:
    std::vector<MockRule> rules_;
    std::string default_ = "I cannot help with that.";
    std::map<std::uint64_t, MockFault> faults_;
    mutable std::mutex mutex_;
    std::uint64_t calls_ = 0;
};

/// Tool names from the JSON array embedded in a rendered prompt (the array
/// following "Here is a list of functions in json format"). Empty when no
/// such array can be read.
std::set<std::string> extract_prompt_tools(std::string_view system_prompt);

}  // namespace tooldc
