#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "tooldc/tool.hpp"

namespace tooldc {

/// Result of reading a model response. `Null` keeps the raw text for traces.
class ParseOutcome {
public:
    struct Null {
        std::string raw;
        friend bool operator==(const Null&, const Null&) = default;
    };

    static ParseOutcome parsed(InvocationList calls) { return ParseOutcome(std::move(calls)); }
    static ParseOutcome null(std::string raw) { return ParseOutcome(Null{std::move(raw)}); }

    bool is_parsed() const noexcept { return std::holds_alternative<InvocationList>(state_); }
    bool is_null() const noexcept { return !is_parsed(); }

    const InvocationList& calls() const { return std::get<InvocationList>(state_); }
    const std::string& raw() const { return std::get<Null>(state_).raw; }

    friend bool operator==(const ParseOutcome&, const ParseOutcome&) = default;

private:
    explicit ParseOutcome(InvocationList calls) : state_(std::move(calls)) {}
    explicit ParseOutcome(Null n) : state_(std::move(n)) {}

    std::variant<InvocationList, Null> state_;
};

/// Parses `[f(a=1, b="x"), pkg.g()]`. Total: every failure becomes Null.
///
/// Accepted around the list: surrounding whitespace and one ``` fence
/// (optionally tagged, e.g. ```python). After the first top-level list only
/// whitespace or further bracket blocks may follow; those are ignored.
/// Literals follow Python/JSON conventions: quoted strings with backslash
/// escapes, integers, floats, True/False/true/false, None/null, lists and
/// string-keyed maps. Duplicate keyword arguments or map keys reject.
ParseOutcome parse_invocations(std::string_view raw);

/// Canonical text: double-quoted strings, True/False/None, ", " between
/// items, no other whitespace. Floats always carry a '.' or exponent so
/// they read back as floats.
std::string serialize_invocations(const InvocationList& calls);
std::string serialize_invocation(const ToolInvocation& call);
std::string serialize_value(const Value& value);

}  // namespace tooldc
