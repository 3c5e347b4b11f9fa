#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tooldc/callgrammar.hpp"
#include "tooldc/instance.hpp"
#include "tooldc/json_fwd.hpp"
#include "tooldc/pipeline.hpp"

namespace tooldc {

class DatasetError : public std::runtime_error {
public:
    DatasetError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class PoolExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dataset line: {"id", "category", "question", "functions": [...],
/// "golden": [names], "answers": [{"fn", "params": {name: [values]},
/// "optional": [names]}]}. An empty string among a parameter's acceptable
/// values marks the parameter optional and is dropped from the list.
EvalInstance instance_from_json(const json& j);
json instance_to_json(const EvalInstance& instance);

/// Reads JSONL; blank lines are skipped. Throws DatasetError with the
/// 1-based line number on malformed rows.
std::vector<EvalInstance> read_dataset(std::istream& in);
void write_dataset(std::ostream& out, const std::vector<EvalInstance>& dataset);

/// Strict AST match: a one-to-one pairing of predicted calls and answer
/// specs must exist in which each pair agrees on name, uses only spec keys,
/// supplies every non-optional parameter, and every supplied value equals
/// one acceptable value (3 == 3.0). Null never matches.
bool ast_match(const ParseOutcome& prediction, const std::vector<AnswerSpec>& spec);
bool call_matches(const ToolInvocation& call, const AnswerSpec& spec);

/// Pads the instance library to `target_n` tools with distractors sampled
/// from `pool` (names already in the library are excluded), then shuffles
/// the whole library. Query, golden names and answers are untouched.
/// Deterministic in (instance, pool, target_n, seed).
EvalInstance inject_noise(const EvalInstance& instance, const ToolLibrary& pool, std::size_t target_n,
                          std::uint64_t seed);

/// Stable per-instance seed from a run seed and an instance id.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view id);

/// Union of all dataset tools, first occurrence wins.
ToolLibrary pooled_tools(const std::vector<EvalInstance>& dataset);

struct CategoryStats {
    std::size_t matched = 0;
    std::size_t scored = 0;
    double accuracy() const noexcept { return scored == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(scored); }
};

struct Metrics {
    std::map<std::string, CategoryStats> categories;
    /// Unweighted mean of category accuracies per rollup.
    std::map<std::string, double> rollups;
    /// Unweighted mean of the rollups.
    double overall = 0.0;
    std::size_t instances = 0;
    std::size_t matched = 0;
    std::size_t errors = 0;
};

/// Category -> rollup name. Default: categories starting with "live" roll up
/// into "live", everything else into "non_live".
using RollupFn = std::function<std::string(const std::string& category)>;
std::string default_rollup(const std::string& category);

struct InstanceRecord {
    std::string id;
    std::string category;
    bool matched = false;
    std::string error;
    std::optional<RunTrace> trace;
};

struct EvalConfig {
    PipelineConfig pipeline;
    std::size_t concurrency = 8;
    RollupFn rollup = default_rollup;
};

struct EvalReport {
    Metrics metrics;
    std::vector<InstanceRecord> records;  // dataset order
};

Metrics aggregate(const std::vector<InstanceRecord>& records, const RollupFn& rollup = default_rollup);

/// Runs and scores every instance. Pipeline failures are recorded as
/// unmatched with the error text; the run carries on.
EvalReport evaluate(const std::vector<EvalInstance>& dataset, const Strategy& strategy, CompletionPort& port,
                    const Retriever& retriever, const EvalConfig& cfg = {});

json metrics_to_json(const Metrics& metrics);
json record_to_json(const InstanceRecord& record, std::optional<std::size_t> trace_line);

}  // namespace tooldc
