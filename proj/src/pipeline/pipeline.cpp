#include <algorithm>
#include <atomic>
#include <future>
#include <set>

#include "tooldc/pipeline.hpp"
#include "tooldc/prompts.hpp"

namespace tooldc {

std::string_view to_string(Strategy::Kind kind) {
    switch (kind) {
        case Strategy::Kind::ToolDcTf: return "tooldc";
        case Strategy::Kind::AllFuns: return "all_funs";
        case Strategy::Kind::TopK: return "top_k";
        case Strategy::Kind::GtFuns: return "gt_funs";
    }
    return "tooldc";
}

std::optional<Strategy::Kind> parse_strategy_kind(std::string_view name) {
    for (auto k : {Strategy::Kind::ToolDcTf, Strategy::Kind::AllFuns, Strategy::Kind::TopK, Strategy::Kind::GtFuns}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

namespace {

ChatRequest make_request(std::string_view templ, const ToolLibrary& tools, const std::string& query,
                         const PipelineConfig& cfg) {
    return ChatRequest{prompts::render_system(templ, tools), query, cfg.temperature, cfg.max_tokens, cfg.model};
}

}  // namespace

std::vector<TryResult> run_try(const std::string& query, const std::vector<ToolGroup>& groups, const ToolLibrary& lib,
                               CompletionPort& port, const PipelineConfig& cfg) {
    std::vector<ChatRequest> requests;
    requests.reserve(groups.size());
    for (const auto& group : groups)
        requests.push_back(make_request(prompts::kTrySystem, lib.subset(group.members), query, cfg));

    std::vector<TryResult> results(groups.size());
    auto run_one = [&](std::size_t i) {
        auto& result = results[i];
        result.group_index = groups[i].index;
        try {
            result.raw = port.complete(requests[i]);
            result.outcome = parse_invocations(result.raw);
        } catch (const LlmError& e) {
            result.error = e.what();
            result.outcome = ParseOutcome::null({});
        }
    };

    const std::size_t workers = cfg.try_parallelism == 0 ? groups.size() : std::min(cfg.try_parallelism, groups.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < groups.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next++; i < groups.size(); i = next++) run_one(i);
            }));
        }
        for (auto& f : pool) f.get();
    }

    if (!results.empty() &&
        std::all_of(results.begin(), results.end(), [](const TryResult& r) { return !r.error.empty(); }))
        throw PipelineError("every Try group failed: " + results.front().error);
    return results;
}

std::vector<std::size_t> build_retry_set(const std::vector<GroupOutcome>& valid, const ToolLibrary& lib) {
    std::vector<std::size_t> positions;
    std::set<std::size_t> seen;
    for (const auto& v : valid) {
        if (!v.outcome.is_parsed()) continue;
        for (const auto& call : v.outcome.calls()) {
            auto pos = lib.position_of(call.name);
            if (pos && seen.insert(*pos).second) positions.push_back(*pos);
        }
    }
    return positions;
}

RetryResult run_retry(const std::string& query, const std::vector<std::size_t>& positions, const ToolLibrary& lib,
                      CompletionPort& port, const PipelineConfig& cfg) {
    if (positions.empty()) throw PipelineError("run_retry: empty tool set");
    const auto request = make_request(prompts::kRetrySystem, lib.subset(positions), query, cfg);
    RetryResult result;
    try {
        result.raw = port.complete(request);
    } catch (const LlmError& e) {
        throw PipelineError(std::string("final completion failed: ") + e.what());
    }
    result.outcome = parse_invocations(result.raw);
    return result;
}

namespace {

std::vector<std::size_t> all_positions(std::size_t n) {
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
}

void finish_with(RunTrace& trace, const EvalInstance& instance, std::vector<std::size_t> context, CompletionPort& port,
                 const PipelineConfig& cfg) {
    trace.context = std::move(context);
    trace.final_issued = true;
    ++trace.completions;
    auto result = run_retry(instance.query, trace.context, instance.library, port, cfg);
    trace.final_raw = std::move(result.raw);
    trace.final_outcome = std::move(result.outcome);
}

void run_tool_dc(RunTrace& trace, const EvalInstance& instance, const Strategy& strategy, CompletionPort& port,
                 const Retriever& retriever, const PipelineConfig& cfg) {
    const auto& lib = instance.library;
    const auto plan = build_plan(retriever(instance.query, lib), lib.size(), strategy.grouping);

    trace.completions += plan.groups.size();
    auto tries = run_try(instance.query, plan.groups, lib, port, cfg);

    std::vector<GroupOutcome> outcomes;
    std::vector<std::vector<ToolDefinition>> schemas;
    for (std::size_t i = 0; i < plan.groups.size(); ++i) {
        const auto& group = plan.groups[i];
        auto& t = tries[i];
        GroupTrace g;
        g.index = group.index;
        g.members = group.members;
        g.anchor = group.anchor;
        g.raw = std::move(t.raw);
        g.outcome = std::move(t.outcome);
        g.error = std::move(t.error);
        g.report = check(g.outcome, lib.subset(group.members).tools());
        outcomes.push_back({group.index, g.outcome});
        schemas.push_back(lib.subset(group.members).tools());
        trace.groups.push_back(std::move(g));
    }

    const auto valid = filter_valid(outcomes, schemas);
    for (const auto& v : valid) trace.valid_groups.push_back(v.group_index);
    trace.retry_set = build_retry_set(valid, lib);

    if (!trace.retry_set.empty()) {
        finish_with(trace, instance, trace.retry_set, port, cfg);
    } else if (cfg.fallback_all_funs) {
        trace.fallback_used = true;
        finish_with(trace, instance, all_positions(lib.size()), port, cfg);
    }
}

}  // namespace

RunTrace run_strategy(const EvalInstance& instance, const Strategy& strategy, CompletionPort& port,
                      const Retriever& retriever, const PipelineConfig& cfg) {
    const auto& lib = instance.library;
    if (lib.empty()) throw PipelineError("instance " + instance.id + " has an empty tool library");

    RunTrace trace;
    trace.instance_id = instance.id;
    trace.strategy = strategy.kind;
    for (const auto& t : lib.tools()) trace.tool_names.push_back(t.name);

    switch (strategy.kind) {
        case Strategy::Kind::ToolDcTf:
            run_tool_dc(trace, instance, strategy, port, retriever, cfg);
            break;
        case Strategy::Kind::AllFuns:
            finish_with(trace, instance, all_positions(lib.size()), port, cfg);
            break;
        case Strategy::Kind::TopK:
            finish_with(trace, instance, top_k(retriever(instance.query, lib), strategy.k), port, cfg);
            break;
        case Strategy::Kind::GtFuns: {
            if (instance.golden.empty()) throw PipelineError("instance " + instance.id + " has no golden tools");
            std::vector<std::size_t> context;
            for (std::size_t i = 0; i < lib.size(); ++i) {
                if (std::find(instance.golden.begin(), instance.golden.end(), lib[i].name) != instance.golden.end())
                    context.push_back(i);
            }
            if (context.empty()) throw PipelineError("instance " + instance.id + ": golden tools not in library");
            finish_with(trace, instance, std::move(context), port, cfg);
            break;
        }
    }
    return trace;
}

namespace {

json outcome_json(const ParseOutcome& o) {
    return o.is_parsed() ? json(serialize_invocations(o.calls())) : json(nullptr);
}

json positions_json(const std::vector<std::size_t>& p) {
    json out = json::array();
    for (auto x : p) out.push_back(x);
    return out;
}

std::vector<std::size_t> positions_from(const json& j) {
    std::vector<std::size_t> out;
    for (const auto& x : j) out.push_back(x.get<std::size_t>());
    return out;
}

}  // namespace

json trace_to_json(const RunTrace& trace) {
    json groups = json::array();
    for (const auto& g : trace.groups) {
        json names = json::array();
        for (auto m : g.members) names.push_back(trace.tool_names.at(m));
        groups.push_back(json{{"index", g.index},
                              {"members", positions_json(g.members)},
                              {"member_names", std::move(names)},
                              {"anchor", g.anchor ? json(*g.anchor) : json(nullptr)},
                              {"raw", g.raw},
                              {"outcome", outcome_json(g.outcome)},
                              {"report", report_to_json(g.report)},
                              {"error", g.error}});
    }
    json retry_names = json::array();
    for (auto p : trace.retry_set) retry_names.push_back(trace.tool_names.at(p));
    json j{{"id", trace.instance_id},
           {"strategy", std::string(to_string(trace.strategy))},
           {"tools", trace.tool_names},
           {"groups", std::move(groups)},
           {"valid_groups", positions_json(trace.valid_groups)},
           {"retry_set", positions_json(trace.retry_set)},
           {"retry_names", std::move(retry_names)},
           {"context", positions_json(trace.context)},
           {"final_issued", trace.final_issued},
           {"fallback_used", trace.fallback_used},
           {"final_raw", trace.final_raw},
           {"final", outcome_json(trace.final_outcome)},
           {"completions", trace.completions}};
    return j;
}

RunTrace trace_from_json(const json& j) {
    RunTrace t;
    t.instance_id = j.at("id").get<std::string>();
    auto kind = parse_strategy_kind(j.at("strategy").get<std::string>());
    if (!kind) throw std::invalid_argument("unknown strategy in trace");
    t.strategy = *kind;
    t.tool_names = j.at("tools").get<std::vector<std::string>>();
    for (const auto& g : j.at("groups")) {
        GroupTrace gt;
        gt.index = g.at("index").get<std::size_t>();
        gt.members = positions_from(g.at("members"));
        if (!g.at("anchor").is_null()) gt.anchor = g.at("anchor").get<std::size_t>();
        gt.raw = g.at("raw").get<std::string>();
        gt.outcome = parse_invocations(gt.raw);
        gt.report = report_from_json(g.at("report"));
        gt.error = g.value("error", "");
        for (auto m : gt.members) {
            if (m >= t.tool_names.size()) throw std::invalid_argument("trace member out of range");
        }
        t.groups.push_back(std::move(gt));
    }
    t.valid_groups = positions_from(j.at("valid_groups"));
    t.retry_set = positions_from(j.at("retry_set"));
    t.context = positions_from(j.at("context"));
    for (auto p : t.retry_set)
        if (p >= t.tool_names.size()) throw std::invalid_argument("trace retry position out of range");
    for (auto p : t.context)
        if (p >= t.tool_names.size()) throw std::invalid_argument("trace context position out of range");
    t.final_issued = j.at("final_issued").get<bool>();
    t.fallback_used = j.value("fallback_used", false);
    t.final_raw = j.at("final_raw").get<std::string>();
    t.final_outcome = t.final_issued ? parse_invocations(t.final_raw) : ParseOutcome::null({});
    t.completions = j.at("completions").get<std::size_t>();
    return t;
}

}  // namespace tooldc
