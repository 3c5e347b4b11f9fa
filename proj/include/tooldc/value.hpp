#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace tooldc {

struct Value;

using ValueList = std::vector<Value>;
// Ordered key/value pairs. Keys are unique; insertion order is kept so that
// rendering is deterministic.
using ValueMap = std::vector<std::pair<std::string, Value>>;

enum class ValueKind { Null, Boolean, Integer, Float, Text, List, Map };

std::string_view to_string(ValueKind kind);

/// Argument value domain. Integers stay integers: nothing in the parser or
/// the JSON bridge widens an integer literal to a float.
struct Value {
    using Storage = std::variant<std::monostate, bool, std::int64_t, double, std::string, ValueList, ValueMap>;

    Storage data;

    Value() = default;
    Value(std::nullptr_t) {}
    Value(bool b) : data(b) {}
    Value(int i) : data(static_cast<std::int64_t>(i)) {}
    Value(std::int64_t i) : data(i) {}
    Value(double d) : data(d) {}
    Value(const char* s) : data(std::string(s)) {}
    Value(std::string s) : data(std::move(s)) {}
    Value(ValueList l) : data(std::move(l)) {}
    Value(ValueMap m) : data(std::move(m)) {}

    ValueKind kind() const noexcept { return static_cast<ValueKind>(data.index()); }

    bool is_null() const noexcept { return kind() == ValueKind::Null; }
    bool as_bool() const { return std::get<bool>(data); }
    std::int64_t as_int() const { return std::get<std::int64_t>(data); }
    double as_float() const { return std::get<double>(data); }
    const std::string& as_text() const { return std::get<std::string>(data); }
    const ValueList& as_list() const { return std::get<ValueList>(data); }
    const ValueMap& as_map() const { return std::get<ValueMap>(data); }

    // Structural equality: kinds must agree, maps compare in order.
    friend bool operator==(const Value& a, const Value& b);
};

/// Equality used for scoring: 3 == 3.0, lists element-wise in order, maps
/// key-wise regardless of key order. Text, booleans and null compare exactly.
bool loosely_equal(const Value& a, const Value& b);

/// Finds a key in a map value; nullptr when absent.
const Value* find_key(const ValueMap& map, std::string_view key);

}  // namespace tooldc
