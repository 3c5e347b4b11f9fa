#include <algorithm>
#include <atomic>
#include <future>

#include "tooldc/cotforge.hpp"
#include "tooldc/grouping.hpp"
#include "tooldc/library_io.hpp"
#include "tooldc/validator.hpp"

namespace tooldc {

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out;
}

}  // namespace

std::string synthesize_rationale(const std::vector<std::string>& candidate_calls,
                                 const std::vector<std::string>& valid_tools) {
    std::string r = "\n1. Candidate Selection: Analyzing the user's query, I will attempt to map key information to the "
                    "function parameters. The functions that potentially match and may have their parameters filled "
                    "are: ";
    r += join(candidate_calls);
    r += "\n\n2. Validation: I will now strictly verify these candidates against their definitions, ensuring all "
         "parameter types and constraints are met. The functions that pass this strict verification are: ";
    r += join(valid_tools);
    r += ".\n\n3. Final Review: I will now eliminate any interference from irrelevant functions and focus solely on "
         "the valid candidates.\n";
    return r;
}

std::string assemble_target(std::string_view rationale, const InvocationList& final) {
    std::string out;
    out += kThinkOpen;
    out += rationale;
    out += kThinkClose;
    out += kToolOpen;
    out += serialize_invocations(final);
    out += kToolClose;
    return out;
}

std::optional<ParsedTarget> split_target(std::string_view target) {
    if (!target.starts_with(kThinkOpen) || !target.ends_with(kToolClose)) return std::nullopt;
    const auto think_end = target.find(kThinkClose);
    if (think_end == std::string_view::npos) return std::nullopt;
    const auto tool_start = think_end + kThinkClose.size();
    if (target.substr(tool_start, kToolOpen.size()) != kToolOpen) return std::nullopt;
    const auto body_start = tool_start + kToolOpen.size();
    const auto body_end = target.size() - kToolClose.size();
    if (body_end < body_start) return std::nullopt;
    ParsedTarget parsed;
    parsed.rationale = std::string(target.substr(kThinkOpen.size(), think_end - kThinkOpen.size()));
    parsed.final = parse_invocations(target.substr(body_start, body_end - body_start));
    return parsed;
}

bool strictly_equal(const InvocationList& a, const InvocationList& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || a[i].args.size() != b[i].args.size()) return false;
        for (const auto& [key, value] : a[i].args) {
            const Value* other = find_key(b[i].args, key);
            if (other == nullptr || !loosely_equal(value, *other)) return false;
        }
    }
    return true;
}

CotResult build_cot_detailed(const RawSample& sample, CompletionPort& port, const PipelineConfig& cfg) {
    CotResult result;
    const auto& lib = sample.library;
    if (lib.empty()) {
        result.status = CotStatus::SkippedEmptyValid;
        return result;
    }

    // Phase 1: every tool on its own, checked against its own schema.
    const auto groups = enumeration_groups(lib.size());
    result.completions += groups.size();
    std::vector<TryResult> tries;
    try {
        tries = run_try(sample.query, groups, lib, port, cfg);
    } catch (const PipelineError& e) {
        result.status = CotStatus::Errored;
        result.error = e.what();
        return result;
    }

    std::vector<std::string> candidates;
    std::vector<std::string> valid_names;
    for (std::size_t i = 0; i < tries.size(); ++i) {
        const auto& outcome = tries[i].outcome;
        if (outcome.is_parsed() && !outcome.calls().empty()) candidates.push_back(serialize_invocations(outcome.calls()));
        const ToolDefinition* schema = &lib[groups[i].members.front()];
        if (check(outcome, std::span<const ToolDefinition>(schema, 1)).valid) {
            result.valid_positions.push_back(groups[i].members.front());
            valid_names.push_back(schema->name);
        }
    }
    if (result.valid_positions.empty()) {
        result.status = CotStatus::SkippedEmptyValid;
        return result;
    }

    // Phase 2: one decision over the surviving tools.
    ++result.completions;
    RetryResult retry;
    try {
        retry = run_retry(sample.query, result.valid_positions, lib, port, cfg);
    } catch (const PipelineError& e) {
        result.status = CotStatus::Errored;
        result.error = e.what();
        return result;
    }

    // Phase 3: keep only trajectories that land on the ground truth.
    if (!retry.outcome.is_parsed() || !strictly_equal(retry.outcome.calls(), sample.ground_truth)) {
        result.status = CotStatus::SkippedMismatch;
        return result;
    }
    CoTSample cot;
    cot.query = sample.query;
    cot.tools = render_library(lib);
    cot.rationale = synthesize_rationale(candidates, valid_names);
    cot.final = retry.outcome.calls();
    cot.target = assemble_target(cot.rationale, cot.final);
    result.status = CotStatus::Emitted;
    result.sample = std::move(cot);
    return result;
}

std::optional<CoTSample> build_cot(const RawSample& sample, CompletionPort& port, const PipelineConfig& cfg) {
    return build_cot_detailed(sample, port, cfg).sample;
}

json cot_record(const CoTSample& sample) {
    return json{{"query", sample.query}, {"tools", sample.tools}, {"target", sample.target}};
}

CotCounts build_dataset(const std::vector<RawSample>& raw, CompletionPort& port, std::ostream& sink,
                        const CotConfig& cfg) {
    CotCounts counts;
    const std::size_t window = std::max<std::size_t>(1, cfg.concurrency);
    std::vector<CotResult> results;
    for (std::size_t start = 0; start < raw.size(); start += window) {
        const std::size_t end = std::min(raw.size(), start + window);
        results.assign(end - start, CotResult{});
        if (window == 1) {
            results[0] = build_cot_detailed(raw[start], port, cfg.pipeline);
        } else {
            std::vector<std::future<CotResult>> pending;
            for (std::size_t i = start; i < end; ++i)
                pending.push_back(std::async(std::launch::async,
                                             [&, i] { return build_cot_detailed(raw[i], port, cfg.pipeline); }));
            for (std::size_t i = 0; i < pending.size(); ++i) results[i] = pending[i].get();
        }
        for (auto& r : results) {
            switch (r.status) {
                case CotStatus::Emitted:
                    sink << cot_record(*r.sample).dump() << '\n';
                    sink.flush();
                    if (!sink) throw SinkError(counts.emitted, "failed writing CoT record");
                    ++counts.emitted;
                    break;
                case CotStatus::SkippedEmptyValid: ++counts.skipped_empty_valid; break;
                case CotStatus::SkippedMismatch: ++counts.skipped_mismatch; break;
                case CotStatus::Errored: ++counts.errored; break;
            }
        }
    }
    return counts;
}

}  // namespace tooldc
