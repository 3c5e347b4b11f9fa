#pragma once

#include <string>
#include <string_view>

#include "tooldc/tool.hpp"

namespace tooldc::prompts {

/// Marker line that precedes the rendered tool list in every system prompt.
inline constexpr std::string_view kToolListMarker = "Here is a list of functions in json format that you can invoke.";

/// Local inference over one group.
inline constexpr std::string_view kTrySystem =
    "You are a Function Selection Expert. Your task is to identify ALL functions that are semantically relevant to "
    "the user's question from the provided list. Extract information from the user's question and substitute it "
    "into the function parameters.\n"
    "\n"
    "Read the user's question and the function descriptions carefully. Choose any function that could potentially "
    "meet user needs or meet a part of user needs.\n"
    "\n"
    "If you decide to invoke any of the function(s), you MUST put it in the format of: "
    "[func_name1(params_name1=params_value1...), func_name2(params)]. You SHOULD NOT include any other text in the "
    "response.\n"
    "Here is a list of functions in json format that you can invoke.\n"
    "\n"
    "<Tools>\n";

/// Final decision over the validated tools; also the single-shot baseline prompt.
inline constexpr std::string_view kRetrySystem =
    "You are an expert in composing functions. You are given a question and a set of possible functions. Based on "
    "the question, you will need to make one or more function/tool calls to achieve the purpose. If none of the "
    "functions can be used, point it out. If the given question lacks the parameters required by the function, also "
    "point it out.\n"
    "\n"
    "You should only return the function calls in your response.\n"
    "If you decide to invoke any of the function(s), you MUST put it in the format of:\n"
    "[func_name1(params_name1=params_value1...), func_name2(params)]. \n"
    "You SHOULD NOT include any other text in the response.\n"
    "\n"
    "At each turn, you should try your best to complete the tasks requested by the user within the current turn. "
    "Continue to output functions to call until you have fulfilled the user's request to the best of your "
    "ability.\n"
    "\n"
    "Here is a list of functions in json format that you can invoke.\n"
    "<Tools>\n";

inline constexpr std::string_view kTryPrefix = "You are a Function Selection Expert.";

/// Substitutes the rendered library for the <Tools> placeholder.
std::string render_system(std::string_view templ, const ToolLibrary& tools);

}  // namespace tooldc::prompts
