#pragma once

// Seeded generators for property tests. Uses raw mt19937_64 output so runs
// are identical across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tooldc/callgrammar.hpp"
#include "tooldc/instance.hpp"
#include "tooldc/tool.hpp"

namespace tooldc::gen {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
    bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }
    std::int64_t integer() {
        switch (below(4)) {
            case 0: return static_cast<std::int64_t>(below(10));
            case 1: return -static_cast<std::int64_t>(below(1000));
            case 2: return static_cast<std::int64_t>(engine_());
            default: return static_cast<std::int64_t>(below(100000));
        }
    }
    double real() {
        switch (below(4)) {
            case 0: return static_cast<double>(below(100)) + 0.5;
            case 1: return -static_cast<double>(below(1000)) / 8.0;
            case 2: return std::ldexp(static_cast<double>(engine_() >> 11), static_cast<int>(below(80)) - 60);
            default: return static_cast<double>(below(50));  // integral floats must stay floats
        }
    }
    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

inline std::string identifier(Rng& rng, std::size_t max_len = 8) {
    static const std::string first = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_";
    static const std::string rest = first + "0123456789";
    std::string s(1, first[rng.below(first.size())]);
    const auto len = rng.below(max_len);
    for (std::size_t i = 0; i < len; ++i) s += rest[rng.below(rest.size())];
    return s;
}

inline std::string text(Rng& rng) {
    static const std::vector<std::string> pieces{"a",  "Paris", " ",  ",",  "(",      ")",  "[",   "]", "{", "}",
                                                 "\"", "'",     "\\", "\n", "\t",     "=",  "é",   "日本", "x,y", "\x01",
                                                 "",   "None",  "True", "0", "\\n",  "😀", "```", ":"};
    std::string s;
    const auto n = rng.below(6);
    for (std::size_t i = 0; i < n; ++i) s += pieces[rng.below(pieces.size())];
    return s;
}

inline Value value(Rng& rng, int depth = 0) {
    const std::size_t kinds = depth >= 3 ? 5 : 7;
    switch (rng.below(kinds)) {
        case 0: return Value(nullptr);
        case 1: return Value(rng.chance(0.5));
        case 2: return Value(rng.integer());
        case 3: return Value(rng.real());
        case 4: return Value(text(rng));
        case 5: {
            ValueList l;
            const auto n = rng.below(4);
            for (std::size_t i = 0; i < n; ++i) l.push_back(value(rng, depth + 1));
            return Value(std::move(l));
        }
        default: {
            ValueMap m;
            const auto n = rng.below(4);
            for (std::size_t i = 0; i < n; ++i) {
                auto key = text(rng) + std::to_string(i);  // unique keys
                m.emplace_back(std::move(key), value(rng, depth + 1));
            }
            return Value(std::move(m));
        }
    }
}

inline std::string dotted_name(Rng& rng) {
    std::string name = identifier(rng);
    if (rng.chance(0.3)) name += "." + identifier(rng);
    return name;
}

inline ToolInvocation invocation(Rng& rng) {
    ToolInvocation call{dotted_name(rng), {}};
    const auto n = rng.below(5);
    for (std::size_t i = 0; i < n; ++i) {
        auto key = identifier(rng, 4) + "_" + std::to_string(i);
        call.args.emplace_back(std::move(key), value(rng));
    }
    return call;
}

inline InvocationList invocation_list(Rng& rng) {
    InvocationList calls;
    const auto n = rng.below(4);
    for (std::size_t i = 0; i < n; ++i) calls.push_back(invocation(rng));
    return calls;
}

inline ParamType param_type(Rng& rng) {
    static const ParamType all[] = {ParamType::String, ParamType::Integer, ParamType::Float, ParamType::Boolean,
                                    ParamType::Array,  ParamType::Object,  ParamType::Any};
    return all[rng.below(7)];
}

/// A value of a kind the type accepts (null excluded).
inline Value value_for(Rng& rng, ParamType type) {
    switch (type) {
        case ParamType::String: return Value(text(rng));
        case ParamType::Integer: return Value(rng.integer());
        case ParamType::Float: return rng.chance(0.3) ? Value(rng.integer()) : Value(rng.real());
        case ParamType::Boolean: return Value(rng.chance(0.5));
        case ParamType::Array: return Value(ValueList{value(rng, 2)});
        case ParamType::Object: return Value(ValueMap{{"k", value(rng, 2)}});
        case ParamType::Any: {
            Value v;
            do v = value(rng);
            while (v.is_null());
            return v;
        }
    }
    return Value(nullptr);
}

inline ToolDefinition tool(Rng& rng, const std::string& name) {
    ToolDefinition t{name, "tool " + name, {}};
    const auto n = rng.below(5);
    for (std::size_t i = 0; i < n; ++i)
        t.params.push_back(ParamSpec{"p" + std::to_string(i), param_type(rng), "param", rng.chance(0.6)});
    return t;
}

/// A conforming call to `t`, perturbed so that every check dimension is hit
/// regularly.
inline ToolInvocation perturbed_call(Rng& rng, const ToolDefinition& t) {
    ToolInvocation call{t.name, {}};
    for (const auto& p : t.params) {
        if (p.required || rng.chance(0.5)) call.args.emplace_back(p.name, value_for(rng, p.type));
    }
    switch (rng.below(8)) {
        case 0: call.name += "_ghost"; break;  // unknown function
        case 1:
            call.args.emplace_back("extra_" + identifier(rng, 3), value(rng));  // unknown key
            break;
        case 2:
            if (!call.args.empty()) call.args.erase(call.args.begin() + static_cast<long>(rng.below(call.args.size())));
            break;
        case 3:
            if (!call.args.empty()) call.args[rng.below(call.args.size())].second = value(rng);  // maybe wrong kind
            break;
        case 4:
            if (!call.args.empty()) call.args[rng.below(call.args.size())].second = Value(nullptr);
            break;
        default: break;  // conforming
    }
    return call;
}

struct AstFixture {
    ParseOutcome prediction = ParseOutcome::null({});
    std::vector<AnswerSpec> spec;
};

/// Parallel-call fixture over a tiny name and value alphabet, so that several
/// specs often accept the same call and a greedy pairing can go wrong.
inline AstFixture ast_fixture(Rng& rng, std::size_t max_calls = 8) {
    static const char* names[] = {"f", "g"};
    static const char* keys[] = {"a", "b"};
    auto small_value = [&]() -> Value {
        switch (rng.below(4)) {
            case 0: return Value(static_cast<std::int64_t>(rng.below(3)));
            case 1: return Value(static_cast<double>(rng.below(3)));
            case 2: return Value(rng.below(2) == 0 ? "x" : "y");
            default: return Value(ValueList{Value(static_cast<std::int64_t>(rng.below(2)))});
        }
    };
    AstFixture fx;
    const auto n = rng.below(max_calls + 1);
    for (std::size_t i = 0; i < n; ++i) {
        AnswerSpec a{names[rng.below(2)], {}};
        for (const char* k : keys) {
            if (rng.chance(0.25)) continue;
            ParamAnswer p{k, {}, rng.chance(0.3)};
            for (std::size_t v = 0, m = rng.below(3) + (p.optional ? 0 : 1); v < m; ++v) p.acceptable.push_back(small_value());
            a.params.push_back(std::move(p));
        }
        fx.spec.push_back(std::move(a));
    }
    if (rng.chance(0.05)) return fx;  // null prediction

    // Start from a conforming call per spec, then perturb.
    InvocationList calls;
    for (const auto& a : fx.spec) {
        ToolInvocation call{a.function, {}};
        for (const auto& p : a.params) {
            if (p.acceptable.empty() || (p.optional && rng.chance(0.3))) continue;
            call.args.emplace_back(p.name, p.acceptable[rng.below(p.acceptable.size())]);
        }
        calls.push_back(std::move(call));
    }
    for (std::size_t i = calls.size(); i > 1; --i) std::swap(calls[i - 1], calls[rng.below(i)]);
    switch (rng.below(6)) {
        case 0:
            if (!calls.empty()) calls[rng.below(calls.size())].name = names[rng.below(2)];
            break;
        case 1:
            if (!calls.empty()) {
                auto& c = calls[rng.below(calls.size())];
                if (!c.args.empty()) c.args[rng.below(c.args.size())].second = small_value();
            }
            break;
        case 2:
            if (!calls.empty()) calls.pop_back();
            break;
        case 3:
            if (!calls.empty()) {
                auto& c = calls[rng.below(calls.size())];
                if (!c.args.empty()) c.args.erase(c.args.begin());
            }
            break;
        default: break;
    }
    fx.prediction = ParseOutcome::parsed(std::move(calls));
    return fx;
}

}  // namespace tooldc::gen
