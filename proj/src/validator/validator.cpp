#include <algorithm>
#include <stdexcept>

#include "tooldc/validator.hpp"

namespace tooldc {

std::string_view to_string(FailureReason::Kind kind) {
    switch (kind) {
        case FailureReason::Kind::UnknownFunction: return "unknown_function";
        case FailureReason::Kind::UnknownArgKey: return "unknown_arg_key";
        case FailureReason::Kind::MissingRequired: return "missing_required";
        case FailureReason::Kind::TypeMismatch: return "type_mismatch";
        case FailureReason::Kind::NullOutcome: return "null_outcome";
    }
    return "null_outcome";
}

std::string describe(const FailureReason& r) {
    switch (r.kind) {
        case FailureReason::Kind::UnknownFunction: return "unknown function '" + r.function + "'";
        case FailureReason::Kind::UnknownArgKey: return r.function + ": unknown argument '" + r.key + "'";
        case FailureReason::Kind::MissingRequired: return r.function + ": missing required '" + r.key + "'";
        case FailureReason::Kind::TypeMismatch:
            return r.function + ": '" + r.key + "' expects " + std::string(to_string(r.expected)) + ", got " +
                   std::string(to_string(r.got));
        case FailureReason::Kind::NullOutcome: return "no parseable invocation";
    }
    return {};
}

bool kind_satisfies(ValueKind got, ParamType expected) {
    switch (expected) {
        case ParamType::Any: return got != ValueKind::Null;
        case ParamType::String: return got == ValueKind::Text;
        case ParamType::Integer: return got == ValueKind::Integer;
        case ParamType::Float: return got == ValueKind::Float || got == ValueKind::Integer;
        case ParamType::Boolean: return got == ValueKind::Boolean;
        case ParamType::Array: return got == ValueKind::List;
        case ParamType::Object: return got == ValueKind::Map;
    }
    return false;
}

namespace {

const ToolDefinition* find_schema(std::span<const ToolDefinition> schemas, std::string_view name) {
    auto it = std::find_if(schemas.begin(), schemas.end(), [&](const ToolDefinition& t) { return t.name == name; });
    return it == schemas.end() ? nullptr : &*it;
}

CallReport check_call(const ToolInvocation& call, std::span<const ToolDefinition> schemas) {
    using Kind = FailureReason::Kind;
    CallReport report{call.name, {}};
    const ToolDefinition* schema = find_schema(schemas, call.name);
    if (schema == nullptr) {
        report.reasons.push_back({Kind::UnknownFunction, call.name, {}, ParamType::Any, ValueKind::Null});
        return report;
    }
    for (const auto& [key, value] : call.args) {
        if (schema->find_param(key) == nullptr)
            report.reasons.push_back({Kind::UnknownArgKey, call.name, key, ParamType::Any, ValueKind::Null});
    }
    for (const auto& p : schema->params) {
        if (p.required && find_key(call.args, p.name) == nullptr)
            report.reasons.push_back({Kind::MissingRequired, call.name, p.name, p.type, ValueKind::Null});
    }
    for (const auto& [key, value] : call.args) {
        const ParamSpec* p = schema->find_param(key);
        if (p == nullptr) continue;
        const bool ok = value.is_null() ? !p->required : kind_satisfies(value.kind(), p->type);
        if (!ok) report.reasons.push_back({Kind::TypeMismatch, call.name, key, p->type, value.kind()});
    }
    return report;
}

}  // namespace

ValidationReport check(const ParseOutcome& outcome, std::span<const ToolDefinition> schemas) {
    if (schemas.empty()) throw std::invalid_argument("check: no schemas supplied");
    ValidationReport report;
    if (outcome.is_null() || outcome.calls().empty()) {
        report.reasons.push_back({FailureReason::Kind::NullOutcome, {}, {}, ParamType::Any, ValueKind::Null});
        return report;
    }
    for (const auto& call : outcome.calls()) {
        auto sub = check_call(call, schemas);
        report.reasons.insert(report.reasons.end(), sub.reasons.begin(), sub.reasons.end());
        report.per_call.push_back(std::move(sub));
    }
    report.valid = report.reasons.empty();
    return report;
}

std::vector<GroupOutcome> filter_valid(const std::vector<GroupOutcome>& outcomes,
                                       const std::vector<std::vector<ToolDefinition>>& group_schemas) {
    if (outcomes.size() != group_schemas.size())
        throw std::invalid_argument("filter_valid: one schema set per outcome required");
    std::vector<std::size_t> order(outcomes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return outcomes[a].group_index < outcomes[b].group_index; });
    std::vector<GroupOutcome> valid;
    for (auto i : order) {
        if (check(outcomes[i].outcome, group_schemas[i]).valid) valid.push_back(outcomes[i]);
    }
    return valid;
}

namespace {

json reason_to_json(const FailureReason& r) {
    using Kind = FailureReason::Kind;
    json j{{"kind", std::string(to_string(r.kind))}};
    if (r.kind != Kind::NullOutcome) j["function"] = r.function;
    if (r.kind == Kind::UnknownArgKey || r.kind == Kind::MissingRequired || r.kind == Kind::TypeMismatch)
        j["key"] = r.key;
    if (r.kind == Kind::TypeMismatch || r.kind == Kind::MissingRequired)
        j["expected"] = std::string(to_string(r.expected));
    if (r.kind == Kind::TypeMismatch) j["got"] = std::string(to_string(r.got));
    return j;
}

FailureReason::Kind reason_kind_from(std::string_view s) {
    using Kind = FailureReason::Kind;
    for (auto k : {Kind::UnknownFunction, Kind::UnknownArgKey, Kind::MissingRequired, Kind::TypeMismatch,
                   Kind::NullOutcome}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown failure kind: " + std::string(s));
}

ValueKind value_kind_from(std::string_view s) {
    for (auto k : {ValueKind::Null, ValueKind::Boolean, ValueKind::Integer, ValueKind::Float, ValueKind::Text,
                   ValueKind::List, ValueKind::Map}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown value kind: " + std::string(s));
}

FailureReason reason_from_json(const json& j) {
    FailureReason r;
    r.kind = reason_kind_from(j.at("kind").get<std::string>());
    r.function = j.value("function", "");
    r.key = j.value("key", "");
    if (j.contains("expected")) {
        auto t = parse_param_type(j.at("expected").get<std::string>());
        if (!t) throw std::invalid_argument("unknown type in report");
        r.expected = *t;
    }
    if (j.contains("got")) r.got = value_kind_from(j.at("got").get<std::string>());
    return r;
}

}  // namespace

json report_to_json(const ValidationReport& report) {
    json reasons = json::array();
    for (const auto& r : report.reasons) reasons.push_back(reason_to_json(r));
    json calls = json::array();
    for (const auto& c : report.per_call) {
        json cr = json::array();
        for (const auto& r : c.reasons) cr.push_back(reason_to_json(r));
        calls.push_back(json{{"function", c.function}, {"valid", c.valid()}, {"reasons", std::move(cr)}});
    }
    return json{{"valid", report.valid}, {"reasons", std::move(reasons)}, {"per_call", std::move(calls)}};
}

ValidationReport report_from_json(const json& j) {
    ValidationReport report;
    report.valid = j.at("valid").get<bool>();
    for (const auto& r : j.at("reasons")) report.reasons.push_back(reason_from_json(r));
    if (j.contains("per_call")) {
        for (const auto& c : j.at("per_call")) {
            CallReport cr{c.at("function").get<std::string>(), {}};
            for (const auto& r : c.at("reasons")) cr.reasons.push_back(reason_from_json(r));
            report.per_call.push_back(std::move(cr));
        }
    }
    return report;
}

}  // namespace tooldc
