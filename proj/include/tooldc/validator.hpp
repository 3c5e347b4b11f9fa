#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tooldc/callgrammar.hpp"
#include "tooldc/json_fwd.hpp"
#include "tooldc/tool.hpp"

namespace tooldc {

struct FailureReason {
    enum class Kind { UnknownFunction, UnknownArgKey, MissingRequired, TypeMismatch, NullOutcome };

    Kind kind = Kind::NullOutcome;
    std::string function;  // empty for NullOutcome
    std::string key;       // arg/param key where relevant
    ParamType expected = ParamType::Any;
    ValueKind got = ValueKind::Null;

    friend bool operator==(const FailureReason&, const FailureReason&) = default;
};

std::string_view to_string(FailureReason::Kind kind);
std::string describe(const FailureReason& reason);

struct CallReport {
    std::string function;
    std::vector<FailureReason> reasons;

    bool valid() const noexcept { return reasons.empty(); }
    friend bool operator==(const CallReport&, const CallReport&) = default;
};

struct ValidationReport {
    bool valid = false;
    std::vector<FailureReason> reasons;
    std::vector<CallReport> per_call;

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// Whether a value of this kind may fill a parameter of this type. Integers
/// satisfy float parameters; `any` takes everything except null; null is
/// handled by the caller (legal only for optional parameters).
bool kind_satisfies(ValueKind got, ParamType expected);

/// Schema consistency check over a parsed outcome: function name exists,
/// argument keys are declared and required ones present, value kinds match.
/// Null or empty outcomes are invalid with a single NullOutcome reason.
ValidationReport check(const ParseOutcome& outcome, std::span<const ToolDefinition> schemas);

struct GroupOutcome {
    std::size_t group_index;
    ParseOutcome outcome;
};

/// The valid subset in group-index order. `group_schemas[i]` holds the
/// schemas shown to outcomes[i].
std::vector<GroupOutcome> filter_valid(const std::vector<GroupOutcome>& outcomes,
                                       const std::vector<std::vector<ToolDefinition>>& group_schemas);

json report_to_json(const ValidationReport& report);
ValidationReport report_from_json(const json& j);

}  // namespace tooldc
