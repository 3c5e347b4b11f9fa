#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tooldc/tool.hpp"

namespace tooldc {

struct Bm25Params {
    double k1 = 1.5;
    double b = 0.75;
};

struct RankedEntry {
    std::size_t position;
    double score;
};

/// Descending by score; ties go to the lower library position.
struct RankedTools {
    std::vector<RankedEntry> entries;
};

class RetrievalError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Lowercases ASCII letters and splits on every byte that is not [A-Za-z0-9].
/// Underscores split too, so `get_weather` yields {"get", "weather"}.
std::vector<std::string> tokenize(std::string_view text);

/// Text a tool is indexed under: name, description, then each parameter's
/// name and description, space-separated.
std::string tool_document(const ToolDefinition& tool);

/// Okapi BM25 over the tool documents of `lib`, with
///   idf(t) = ln((N - df + 0.5) / (df + 0.5) + 1)
/// Each query token contributes once per occurrence. Throws RetrievalError
/// for an empty library or out-of-range parameters.
RankedTools bm25_rank(std::string_view query, const ToolLibrary& lib, const Bm25Params& params = {});

/// Same scoring over pre-tokenized documents; exposed for testing the
/// ranking on raw corpora.
RankedTools bm25_rank_tokens(const std::vector<std::string>& query_terms,
                             const std::vector<std::vector<std::string>>& documents, const Bm25Params& params = {});

/// First min(k, size) positions. Throws RetrievalError when k == 0.
std::vector<std::size_t> top_k(const RankedTools& ranked, std::size_t k);

/// Retriever port: anything that ranks a library for a query.
using Retriever = std::function<RankedTools(std::string_view query, const ToolLibrary& lib)>;

Retriever bm25_retriever(Bm25Params params = {});

}  // namespace tooldc
