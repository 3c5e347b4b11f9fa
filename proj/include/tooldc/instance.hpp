#pragma once

#include <string>
#include <vector>

#include "tooldc/tool.hpp"

namespace tooldc {

struct ParamAnswer {
    std::string name;
    /// Any of these values is accepted. May be empty only when `optional`,
    /// in which case the parameter must be omitted.
    std::vector<Value> acceptable;
    bool optional = false;

    friend bool operator==(const ParamAnswer&, const ParamAnswer&) = default;
};

/// Ground truth for one expected call.
struct AnswerSpec {
    std::string function;
    std::vector<ParamAnswer> params;

    friend bool operator==(const AnswerSpec&, const AnswerSpec&) = default;
};

/// One benchmark row.
struct EvalInstance {
    std::string id;
    std::string category;
    std::string query;
    ToolLibrary library;
    std::vector<std::string> golden;
    std::vector<AnswerSpec> answers;

    friend bool operator==(const EvalInstance&, const EvalInstance&) = default;
};

}  // namespace tooldc
