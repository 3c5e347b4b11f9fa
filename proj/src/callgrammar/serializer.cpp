#include <charconv>
#include <cmath>
#include <cstdio>

#include "tooldc/callgrammar.hpp"

namespace tooldc {

namespace {

void write_text(std::string& out, const std::string& s) {
    out += '"';
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20 || c == 0x7F) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned char>(c));
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void write_float(std::string& out, double d) {
    if (std::isnan(d)) {
        // No NaN literal exists in the grammar.
        out += "None";
        return;
    }
    if (std::isinf(d)) {
        out += d < 0 ? "-1e999" : "1e999";
        return;
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, d);
    std::string_view text(buf, static_cast<std::size_t>(res.ptr - buf));
    out += text;
    if (text.find_first_of(".e") == std::string_view::npos) out += ".0";
}

void write_value(std::string& out, const Value& v) {
    switch (v.kind()) {
        case ValueKind::Null: out += "None"; break;
        case ValueKind::Boolean: out += v.as_bool() ? "True" : "False"; break;
        case ValueKind::Integer: out += std::to_string(v.as_int()); break;
        case ValueKind::Float: write_float(out, v.as_float()); break;
        case ValueKind::Text: write_text(out, v.as_text()); break;
        case ValueKind::List: {
            out += '[';
            bool first = true;
            for (const auto& item : v.as_list()) {
                if (!first) out += ", ";
                first = false;
                write_value(out, item);
            }
            out += ']';
            break;
        }
        case ValueKind::Map: {
            out += '{';
            bool first = true;
            for (const auto& [key, item] : v.as_map()) {
                if (!first) out += ", ";
                first = false;
                write_text(out, key);
                out += ": ";
                write_value(out, item);
            }
            out += '}';
            break;
        }
    }
}

void write_call(std::string& out, const ToolInvocation& call) {
    out += call.name;
    out += '(';
    bool first = true;
    for (const auto& [key, value] : call.args) {
        if (!first) out += ", ";
        first = false;
        out += key;
        out += '=';
        write_value(out, value);
    }
    out += ')';
}

}  // namespace

std::string serialize_value(const Value& value) {
    std::string out;
    write_value(out, value);
    return out;
}

std::string serialize_invocation(const ToolInvocation& call) {
    std::string out;
    write_call(out, call);
    return out;
}

std::string serialize_invocations(const InvocationList& calls) {
    std::string out = "[";
    bool first = true;
    for (const auto& call : calls) {
        if (!first) out += ", ";
        first = false;
        write_call(out, call);
    }
    out += ']';
    return out;
}

}  // namespace tooldc
