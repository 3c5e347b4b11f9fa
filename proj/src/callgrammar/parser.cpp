#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <optional>

#include "tooldc/callgrammar.hpp"

namespace tooldc {

namespace {

constexpr int kMaxDepth = 128;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || is_digit(c); }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string_view strip_fence(std::string_view s) {
    if (s.substr(0, 3) != "```") return s;
    auto eol = s.find('\n');
    if (eol == std::string_view::npos) return s;
    auto body = s.substr(eol + 1);
    body = trim(body);
    if (body.size() >= 3 && body.substr(body.size() - 3) == "```") body.remove_suffix(3);
    return trim(body);
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

// Recursive descent over a string_view. Every method returns nullopt/false
// on a grammar violation; nothing throws.
class Reader {
public:
    explicit Reader(std::string_view text) : s_(text) {}

    std::optional<InvocationList> call_list() {
        skip_ws();
        if (!eat('[')) return std::nullopt;
        InvocationList calls;
        skip_ws();
        if (eat(']')) return calls;
        while (true) {
            auto call = invocation();
            if (!call) return std::nullopt;
            calls.push_back(std::move(*call));
            skip_ws();
            if (eat(']')) return calls;
            if (!eat(',')) return std::nullopt;
        }
    }

    // Anything after the first block must be blank or another block.
    bool acceptable_tail() {
        skip_ws();
        return at_end() || peek() == '[';
    }

private:
    std::optional<ToolInvocation> invocation() {
        skip_ws();
        auto name = dotted_ident();
        if (!name) return std::nullopt;
        skip_ws();
        if (!eat('(')) return std::nullopt;
        ToolInvocation call{std::move(*name), {}};
        skip_ws();
        if (eat(')')) return call;
        while (true) {
            skip_ws();
            auto key = ident();
            if (!key) return std::nullopt;
            skip_ws();
            if (!eat('=')) return std::nullopt;
            auto value = literal(0);
            if (!value) return std::nullopt;
            if (find_key(call.args, *key) != nullptr) return std::nullopt;
            call.args.emplace_back(std::move(*key), std::move(*value));
            skip_ws();
            if (eat(')')) return call;
            if (!eat(',')) return std::nullopt;
        }
    }

    std::optional<std::string> ident() {
        if (at_end() || !ident_start(peek())) return std::nullopt;
        const auto start = pos_;
        while (!at_end() && ident_char(peek())) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    std::optional<std::string> dotted_ident() {
        auto first = ident();
        if (!first) return std::nullopt;
        std::string name = std::move(*first);
        while (!at_end() && peek() == '.') {
            ++pos_;
            auto part = ident();
            if (!part) return std::nullopt;
            name += '.';
            name += *part;
        }
        return name;
    }

    std::optional<Value> literal(int depth) {
        if (depth > kMaxDepth) return std::nullopt;
        skip_ws();
        if (at_end()) return std::nullopt;
        const char c = peek();
        if (c == '"' || c == '\'') {
            auto text = quoted();
            if (!text) return std::nullopt;
            return Value(std::move(*text));
        }
        if (c == '[') return list(depth);
        if (c == '{') return map(depth);
        if (c == '-' || c == '+' || c == '.' || is_digit(c)) return number();
        if (ident_start(c)) {
            auto word = ident();
            if (*word == "True" || *word == "true") return Value(true);
            if (*word == "False" || *word == "false") return Value(false);
            if (*word == "None" || *word == "null") return Value(nullptr);
        }
        return std::nullopt;
    }

    std::optional<Value> list(int depth) {
        ++pos_;  // '['
        ValueList items;
        skip_ws();
        if (eat(']')) return Value(std::move(items));
        while (true) {
            auto item = literal(depth + 1);
            if (!item) return std::nullopt;
            items.push_back(std::move(*item));
            skip_ws();
            if (eat(']')) return Value(std::move(items));
            if (!eat(',')) return std::nullopt;
        }
    }

    std::optional<Value> map(int depth) {
        ++pos_;  // '{'
        ValueMap entries;
        skip_ws();
        if (eat('}')) return Value(std::move(entries));
        while (true) {
            skip_ws();
            if (at_end() || (peek() != '"' && peek() != '\'')) return std::nullopt;
            auto key = quoted();
            if (!key) return std::nullopt;
            skip_ws();
            if (!eat(':')) return std::nullopt;
            auto value = literal(depth + 1);
            if (!value) return std::nullopt;
            if (find_key(entries, *key) != nullptr) return std::nullopt;
            entries.emplace_back(std::move(*key), std::move(*value));
            skip_ws();
            if (eat('}')) return Value(std::move(entries));
            if (!eat(',')) return std::nullopt;
        }
    }

    std::optional<unsigned> hex4() {
        if (s_.size() - pos_ < 4) return std::nullopt;
        unsigned v = 0;
        auto res = std::from_chars(s_.data() + pos_, s_.data() + pos_ + 4, v, 16);
        if (res.ec != std::errc{} || res.ptr != s_.data() + pos_ + 4) return std::nullopt;
        pos_ += 4;
        return v;
    }

    std::optional<std::string> quoted() {
        const char quote = s_[pos_++];
        std::string out;
        while (true) {
            if (at_end()) return std::nullopt;
            const char c = s_[pos_++];
            if (c == quote) return out;
            if (c != '\\') {
                out += c;
                continue;
            }
            if (at_end()) return std::nullopt;
            const char e = s_[pos_++];
            switch (e) {
                case '\\': out += '\\'; break;
                case '\'': out += '\''; break;
                case '"': out += '"'; break;
                case '/': out += '/'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                case 'b': out += '\b'; break;
                case 'f': out += '\f'; break;
                case '0': out += '\0'; break;
                case 'u': {
                    auto hi = hex4();
                    if (!hi) return std::nullopt;
                    char32_t cp = *hi;
                    if (cp >= 0xD800 && cp <= 0xDBFF) {
                        if (s_.substr(pos_, 2) != "\\u") return std::nullopt;
                        pos_ += 2;
                        auto lo = hex4();
                        if (!lo || *lo < 0xDC00 || *lo > 0xDFFF) return std::nullopt;
                        cp = 0x10000 + ((cp - 0xD800) << 10) + (*lo - 0xDC00);
                    } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
                        return std::nullopt;
                    }
                    append_utf8(out, cp);
                    break;
                }
                default:
                    return std::nullopt;
            }
        }
    }

    std::optional<Value> number() {
        const auto start = pos_;
        if (peek() == '-' || peek() == '+') ++pos_;
        std::size_t int_digits = 0;
        std::size_t frac_digits = 0;
        bool is_float = false;
        while (!at_end() && is_digit(peek())) ++pos_, ++int_digits;
        if (!at_end() && peek() == '.') {
            is_float = true;
            ++pos_;
            while (!at_end() && is_digit(peek())) ++pos_, ++frac_digits;
        }
        if (int_digits + frac_digits == 0) return std::nullopt;
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            is_float = true;
            ++pos_;
            if (!at_end() && (peek() == '-' || peek() == '+')) ++pos_;
            std::size_t exp_digits = 0;
            while (!at_end() && is_digit(peek())) ++pos_, ++exp_digits;
            if (exp_digits == 0) return std::nullopt;
        }
        // An identifier glued to a number ("3abc") is not a literal.
        if (!at_end() && (ident_char(peek()) || peek() == '.')) return std::nullopt;

        std::string_view token = s_.substr(start, pos_ - start);
        if (token.front() == '+') token.remove_prefix(1);
        if (!is_float) {
            std::int64_t v = 0;
            auto res = std::from_chars(token.data(), token.data() + token.size(), v);
            if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) return std::nullopt;
            return Value(v);
        }
        double d = 0;
        auto res = std::from_chars(token.data(), token.data() + token.size(), d);
        if (res.ec == std::errc::result_out_of_range) {
            // from_chars leaves d untouched on over/underflow; strtod saturates.
            const std::string copy(token);
            d = std::strtod(copy.c_str(), nullptr);
        } else if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
            return std::nullopt;
        }
        return Value(d);
    }

    void skip_ws() {
        while (!at_end() && is_space(peek())) ++pos_;
    }
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    bool eat(char c) {
        if (at_end() || peek() != c) return false;
        ++pos_;
        return true;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

ParseOutcome parse_invocations(std::string_view raw) {
    const auto body = strip_fence(trim(raw));
    if (body.empty() || body.front() != '[') return ParseOutcome::null(std::string(raw));
    Reader reader(body);
    auto calls = reader.call_list();
    if (!calls || !reader.acceptable_tail()) return ParseOutcome::null(std::string(raw));
    return ParseOutcome::parsed(std::move(*calls));
}

}  // namespace tooldc
