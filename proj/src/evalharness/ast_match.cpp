#include <algorithm>
#include <functional>

#include "tooldc/evalharness.hpp"

namespace tooldc {

bool call_matches(const ToolInvocation& call, const AnswerSpec& spec) {
    if (call.name != spec.function) return false;
    for (const auto& [key, value] : call.args) {
        if (std::none_of(spec.params.begin(), spec.params.end(), [&](const ParamAnswer& p) { return p.name == key; }))
            return false;
    }
    for (const auto& p : spec.params) {
        const Value* given = find_key(call.args, p.name);
        if (given == nullptr) {
            if (!p.optional) return false;
            continue;
        }
        const bool accepted = std::any_of(p.acceptable.begin(), p.acceptable.end(),
                                          [&](const Value& v) { return loosely_equal(*given, v); });
        if (!accepted) return false;
    }
    return true;
}

bool ast_match(const ParseOutcome& prediction, const std::vector<AnswerSpec>& spec) {
    if (prediction.is_null()) return false;
    const auto& calls = prediction.calls();
    if (calls.size() != spec.size()) return false;

    const std::size_t n = calls.size();
    std::vector<std::vector<std::size_t>> edges(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (call_matches(calls[i], spec[j])) edges[i].push_back(j);

    // Kuhn's augmenting paths; a perfect matching must cover every call.
    std::vector<std::size_t> owner(n, n);
    std::vector<bool> visited;
    std::function<bool(std::size_t)> augment = [&](std::size_t i) {
        for (auto j : edges[i]) {
            if (visited[j]) continue;
            visited[j] = true;
            if (owner[j] == n || augment(owner[j])) {
                owner[j] = i;
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
        visited.assign(n, false);
        if (!augment(i)) return false;
    }
    return true;
}

}  // namespace tooldc
