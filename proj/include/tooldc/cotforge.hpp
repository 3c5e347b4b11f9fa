#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tooldc/json_fwd.hpp"
#include "tooldc/llmport.hpp"
#include "tooldc/pipeline.hpp"
#include "tooldc/tool.hpp"

namespace tooldc {

inline constexpr std::string_view kThinkOpen = "<think>";
inline constexpr std::string_view kThinkClose = "</think>";
inline constexpr std::string_view kToolOpen = "<tool_call>";
inline constexpr std::string_view kToolClose = "</tool_call>";

struct RawSample {
    std::string query;
    ToolLibrary library;
    InvocationList ground_truth;
};

struct CoTSample {
    std::string query;
    std::string tools;      // render_library of the full candidate library
    std::string rationale;  // text between the think tags
    InvocationList final;
    std::string target;     // think + rationale + tool_call block
};

/// Three-part rationale (candidate selection, validation, final review) with
/// the candidate calls and valid tool names filled in.
std::string synthesize_rationale(const std::vector<std::string>& candidate_calls,
                                 const std::vector<std::string>& valid_tools);

/// <think>R</think><tool_call>serialize(y)</tool_call>
std::string assemble_target(std::string_view rationale, const InvocationList& final);

struct ParsedTarget {
    std::string rationale;
    ParseOutcome final = ParseOutcome::null({});
};

/// Inverse of assemble_target; nullopt when the tags are missing or out of order.
std::optional<ParsedTarget> split_target(std::string_view target);

/// Order-sensitive structural equality used as the emission gate: same call
/// sequence, same names, same key sets, values equal with 3 == 3.0.
bool strictly_equal(const InvocationList& a, const InvocationList& b);

enum class CotStatus { Emitted, SkippedEmptyValid, SkippedMismatch, Errored };

struct CotResult {
    CotStatus status = CotStatus::SkippedEmptyValid;
    std::optional<CoTSample> sample;
    std::vector<std::size_t> valid_positions;
    std::string error;
    std::size_t completions = 0;
};

/// Enumerate every tool alone with the Try prompt, keep the tools whose
/// outcome validates, ask once more over those with the composing prompt,
/// and emit a sample only if that answer equals the ground truth.
CotResult build_cot_detailed(const RawSample& sample, CompletionPort& port, const PipelineConfig& cfg = {});
std::optional<CoTSample> build_cot(const RawSample& sample, CompletionPort& port, const PipelineConfig& cfg = {});

struct CotCounts {
    std::size_t emitted = 0;
    std::size_t skipped_empty_valid = 0;
    std::size_t skipped_mismatch = 0;
    std::size_t errored = 0;

    friend bool operator==(const CotCounts&, const CotCounts&) = default;
};

class SinkError : public std::runtime_error {
public:
    SinkError(std::size_t written, const std::string& message)
        : std::runtime_error(message), written_(written) {}
    /// Records fully written before the failure.
    std::size_t written() const noexcept { return written_; }

private:
    std::size_t written_;
};

struct CotConfig {
    PipelineConfig pipeline;
    std::size_t concurrency = 1;
};

/// Training record: {"query", "tools", "target"}.
json cot_record(const CoTSample& sample);

/// Builds samples (up to cfg.concurrency at a time) and writes emitted
/// records to `sink` as JSONL in input order. Throws SinkError when the
/// stream goes bad.
CotCounts build_dataset(const std::vector<RawSample>& raw, CompletionPort& port, std::ostream& sink,
                        const CotConfig& cfg = {});

/// xlam-style raw corpus: a JSON array or JSONL of {"query", "tools",
/// "answers"} where tools/answers may be JSON-encoded strings. Tool params
/// use {"type": "str, optional", "description", "default"}; a parameter is
/// required unless it has a default or an ", optional" type suffix.
/// Throws DatasetError (line/entry number) on malformed records.
std::vector<RawSample> read_raw_corpus(std::istream& in);
RawSample raw_sample_from_json(const json& j);

}  // namespace tooldc
