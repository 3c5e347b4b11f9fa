#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tooldc/callgrammar.hpp"
#include "tooldc/grouping.hpp"
#include "tooldc/instance.hpp"
#include "tooldc/json_fwd.hpp"
#include "tooldc/llmport.hpp"
#include "tooldc/retrieval.hpp"
#include "tooldc/validator.hpp"

namespace tooldc {

class PipelineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Strategy {
    enum class Kind { ToolDcTf, AllFuns, TopK, GtFuns };

    Kind kind = Kind::ToolDcTf;
    GroupingConfig grouping;  // ToolDcTf
    std::size_t k = 5;        // TopK

    static Strategy tool_dc(GroupingConfig cfg = {}) { return {Kind::ToolDcTf, cfg, 5}; }
    static Strategy all_funs() { return {Kind::AllFuns, {}, 5}; }
    static Strategy top_k(std::size_t k) { return {Kind::TopK, {}, k}; }
    static Strategy gt_funs() { return {Kind::GtFuns, {}, 5}; }
};

/// "tooldc", "all_funs", "top_k", "gt_funs".
std::string_view to_string(Strategy::Kind kind);
std::optional<Strategy::Kind> parse_strategy_kind(std::string_view name);

struct PipelineConfig {
    double temperature = 0.0;
    std::size_t max_tokens = 512;
    std::string model;
    /// When no Try outcome validates, answer with the full library instead of
    /// returning the null outcome.
    bool fallback_all_funs = false;
    /// Worker threads for the Try fan-out; 0 means one per group. With 1 the
    /// groups complete in index order, which pins mock fault ordinals.
    std::size_t try_parallelism = 0;
};

struct GroupTrace {
    std::size_t index = 0;
    std::vector<std::size_t> members;
    std::optional<std::size_t> anchor;
    std::string raw;
    ParseOutcome outcome = ParseOutcome::null({});
    ValidationReport report;
    /// Transport failure text; the group then counts as the null outcome.
    std::string error;
};

struct RunTrace {
    std::string instance_id;
    Strategy::Kind strategy = Strategy::Kind::ToolDcTf;
    std::vector<std::string> tool_names;   // library names by position
    std::vector<GroupTrace> groups;        // ToolDcTf only
    std::vector<std::size_t> valid_groups; // indices of groups in V
    std::vector<std::size_t> retry_set;    // ToolDcTf: T_retry positions
    std::vector<std::size_t> context;      // tools shown in the final completion
    bool final_issued = false;
    bool fallback_used = false;
    std::string final_raw;
    ParseOutcome final_outcome = ParseOutcome::null({});
    std::size_t completions = 0;
};

struct TryResult {
    std::size_t group_index = 0;
    std::string raw;
    ParseOutcome outcome = ParseOutcome::null({});
    std::string error;
};

/// Local inference over each group, concurrently. Results come back in the
/// order of `groups` whatever order completions finish in. A transport
/// failure turns that group into the null outcome; if every group fails the
/// call throws PipelineError.
std::vector<TryResult> run_try(const std::string& query, const std::vector<ToolGroup>& groups, const ToolLibrary& lib,
                               CompletionPort& port, const PipelineConfig& cfg = {});

/// Tools named by any call in the valid set, deduplicated, in order of first
/// appearance, as library positions.
std::vector<std::size_t> build_retry_set(const std::vector<GroupOutcome>& valid, const ToolLibrary& lib);

struct RetryResult {
    std::string raw;
    ParseOutcome outcome = ParseOutcome::null({});
};

/// Single completion over the given tools with the composing prompt. Throws
/// PipelineError on an empty tool set or any port failure.
RetryResult run_retry(const std::string& query, const std::vector<std::size_t>& positions, const ToolLibrary& lib,
                      CompletionPort& port, const PipelineConfig& cfg = {});

/// Runs one strategy end to end. Throws PipelineError when the final
/// completion fails, every Try group fails, or GtFuns has no golden tools.
RunTrace run_strategy(const EvalInstance& instance, const Strategy& strategy, CompletionPort& port,
                      const Retriever& retriever, const PipelineConfig& cfg = {});

/// One JSON object per run; used for --trace-out JSONL files.
json trace_to_json(const RunTrace& trace);
RunTrace trace_from_json(const json& j);

}  // namespace tooldc
