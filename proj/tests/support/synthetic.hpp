#pragma once

// Synthetic benchmark used by the pipeline tests and the acceptance suite.
//
// Each case has a golden tool and a decoy. The scripted mock answers with the
// golden call only when the context holds at most six tools including the
// golden one; otherwise it calls the decoy if present, else refuses. About a
// third of the cases are "hard": six lure tools share the query words, which
// pushes the golden tool out of the BM25 top five.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "tooldc/callgrammar.hpp"
#include "tooldc/instance.hpp"
#include "tooldc/mock_port.hpp"

namespace tooldc::synthetic {

inline const std::vector<std::string>& topic_words() {
    static const std::vector<std::string> words{
        "weather", "invoice", "flight",  "hotel",    "stock",   "recipe",  "movie",  "ticket",  "parcel",  "loan",
        "insurance", "calendar", "podcast", "vaccine", "mortgage", "lyrics", "tariff", "satellite", "harvest", "museum",
        "voltage", "glacier",  "payroll", "forecast", "tennis",  "chess",   "pharmacy", "vineyard", "subway", "bakery",
        "quarry",  "orchard",  "festival", "marathon", "lighthouse", "archive", "telescope", "carpool", "kennel", "dentist"};
    return words;
}

inline const std::vector<std::string>& pool_words() {
    static const std::vector<std::string> words{
        "alpha", "bravo", "cobalt", "delta", "ember", "fjord",  "garnet", "harbor", "indigo", "juniper",
        "krypton", "lagoon", "magnet", "nebula", "onyx", "prism", "quartz", "raven", "sierra", "tundra"};
    return words;
}

inline ToolDefinition simple_tool(std::string name, std::string description) {
    return ToolDefinition{std::move(name),
                          std::move(description),
                          {ParamSpec{"target", ParamType::String, "what to act on", true},
                           ParamSpec{"limit", ParamType::Integer, "maximum results", false}}};
}

struct Case {
    EvalInstance instance;  // standard setting (before injection)
    std::string ref;        // token embedded in the query, e.g. "(ref c007)"
    std::string golden_call;
    std::string decoy;
    std::string decoy_call;
    bool hard = false;
};

inline std::string ref_token(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "(ref c%03zu)", i);
    return buf;
}

inline Case make_case(std::size_t i) {
    const auto& words = topic_words();
    const std::string w1 = words[i % words.size()];
    const std::string w2 = words[(i * 7 + 3) % words.size()] == w1 ? words[(i + 1) % words.size()]
                                                                     : words[(i * 7 + 3) % words.size()];
    Case c;
    c.ref = ref_token(i);
    c.hard = i % 3 == 0;
    const std::string value = "v" + std::to_string(i);

    std::vector<ToolDefinition> tools;
    std::string golden;
    if (c.hard) {
        golden = "op" + std::to_string(i) + "_resolve";
        tools.push_back(simple_tool(golden, "Resolve one " + w1 + " " + w2 +
                                                " record through the extended auditing workflow with optional "
                                                "archival retention and verbose compliance reporting enabled"));
        for (int j = 0; j < 6; ++j)
            tools.push_back(simple_tool(w1 + "_" + w2 + "_lure" + std::to_string(j),
                                        w1 + " " + w2 + " " + w1 + " " + w2 + " helper"));
    } else {
        golden = w1 + "_" + w2 + "_lookup";
        tools.push_back(simple_tool(golden, "Look up " + w1 + " " + w2 + " data"));
        for (int j = 0; j < 3; ++j) {
            const auto& other = words[(i + 11 + 5 * static_cast<std::size_t>(j)) % words.size()];
            tools.push_back(simple_tool("misc" + std::to_string(i) + "_" + other + std::to_string(j),
                                        "Manage " + other + " entries"));
        }
    }
    // Keep the golden tool off position 0.
    std::rotate(tools.begin(), tools.begin() + 1, tools.begin() + 2);

    c.decoy = tools[0].name == golden ? tools[1].name : tools[0].name;
    c.golden_call = "[" + golden + "(target=\"" + value + "\")]";
    c.decoy_call = "[" + c.decoy + "(target=\"" + value + "\")]";

    c.instance.id = "syn-" + std::to_string(i);
    c.instance.category = i % 2 == 0 ? "simple" : "multiple";
    c.instance.query = "Please handle this " + w1 + " " + w2 + " request " + c.ref;
    c.instance.library = ToolLibrary(std::move(tools));
    c.instance.golden = {golden};
    c.instance.answers = {AnswerSpec{golden, {ParamAnswer{"target", {Value(value)}, false}, ParamAnswer{"limit", {}, true}}}};
    return c;
}

inline std::vector<Case> make_suite(std::size_t count) {
    std::vector<Case> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(make_case(i));
    return out;
}

/// Distractor pool with vocabulary disjoint from the topic words.
inline ToolLibrary make_pool(std::size_t size) {
    std::vector<ToolDefinition> tools;
    const auto& words = pool_words();
    for (std::size_t k = 0; k < size; ++k) {
        const auto& a = words[k % words.size()];
        const auto& b = words[(k / words.size() + k * 3 + 1) % words.size()];
        tools.push_back(simple_tool("pool_" + a + "_" + b + "_" + std::to_string(k), "Configure " + a + " " + b + " settings"));
    }
    return ToolLibrary(std::move(tools));
}

/// The context-limited mock described above.
inline void add_rules(ScriptedMock& mock, const std::vector<Case>& cases, std::size_t max_context = 6) {
    for (const auto& c : cases) {
        MockMatcher golden;
        golden.query_contains = {c.ref};
        golden.tools_include = {c.instance.golden.front()};
        golden.max_tools = max_context;
        mock.add_rule(golden, c.golden_call);

        MockMatcher decoy;
        decoy.query_contains = {c.ref};
        decoy.tools_include = {c.decoy};
        mock.add_rule(decoy, c.decoy_call);
    }
    mock.set_default("I cannot help with that.");
}

/// Answers with the golden call whenever the golden tool is visible.
inline void add_cooperative_rules(ScriptedMock& mock, const std::vector<Case>& cases) {
    for (const auto& c : cases) {
        MockMatcher golden;
        golden.query_contains = {c.ref};
        golden.tools_include = {c.instance.golden.front()};
        mock.add_rule(golden, c.golden_call);
    }
    mock.set_default("I cannot help with that.");
}

}  // namespace tooldc::synthetic
