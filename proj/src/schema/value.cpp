#include "tooldc/value.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tooldc {

std::string_view to_string(ValueKind kind) {
    switch (kind) {
        case ValueKind::Null: return "null";
        case ValueKind::Boolean: return "boolean";
        case ValueKind::Integer: return "integer";
        case ValueKind::Float: return "float";
        case ValueKind::Text: return "text";
        case ValueKind::List: return "list";
        case ValueKind::Map: return "map";
    }
    return "unknown";
}

bool operator==(const Value& a, const Value& b) { return a.data == b.data; }

const Value* find_key(const ValueMap& map, std::string_view key) {
    auto it = std::find_if(map.begin(), map.end(), [&](const auto& kv) { return kv.first == key; });
    return it == map.end() ? nullptr : &it->second;
}

namespace {

bool int_equals_float(std::int64_t i, double d) {
    if (!std::isfinite(d) || std::trunc(d) != d) return false;
    // [-2^63, 2^63) is exactly representable at the bounds.
    constexpr double lo = -9223372036854775808.0;
    constexpr double hi = 9223372036854775808.0;
    if (d < lo || d >= hi) return false;
    return static_cast<std::int64_t>(d) == i;
}

}  // namespace

bool loosely_equal(const Value& a, const Value& b) {
    const auto ka = a.kind();
    const auto kb = b.kind();
    if (ka == ValueKind::Integer && kb == ValueKind::Float) return int_equals_float(a.as_int(), b.as_float());
    if (ka == ValueKind::Float && kb == ValueKind::Integer) return int_equals_float(b.as_int(), a.as_float());
    if (ka != kb) return false;
    switch (ka) {
        case ValueKind::List: {
            const auto& la = a.as_list();
            const auto& lb = b.as_list();
            return la.size() == lb.size() && std::equal(la.begin(), la.end(), lb.begin(), loosely_equal);
        }
        case ValueKind::Map: {
            const auto& ma = a.as_map();
            const auto& mb = b.as_map();
            if (ma.size() != mb.size()) return false;
            return std::all_of(ma.begin(), ma.end(), [&](const auto& kv) {
                const Value* other = find_key(mb, kv.first);
                return other != nullptr && loosely_equal(kv.second, *other);
            });
        }
        default:
            return a == b;
    }
}

}  // namespace tooldc
