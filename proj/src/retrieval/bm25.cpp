#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "tooldc/bm25_kernels.hpp"
#include "tooldc/retrieval.hpp"

namespace tooldc {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> terms;
    std::string current;
    for (const char c : text) {
        const bool lower = c >= 'a' && c <= 'z';
        const bool upper = c >= 'A' && c <= 'Z';
        const bool digit = c >= '0' && c <= '9';
        if (lower || digit) {
            current += c;
        } else if (upper) {
            current += static_cast<char>(c - 'A' + 'a');
        } else if (!current.empty()) {
            terms.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) terms.push_back(std::move(current));
    return terms;
}

std::string tool_document(const ToolDefinition& tool) {
    std::string doc = tool.name;
    doc += ' ';
    doc += tool.description;
    for (const auto& p : tool.params) {
        doc += ' ';
        doc += p.name;
        doc += ' ';
        doc += p.description;
    }
    return doc;
}

RankedTools bm25_rank_tokens(const std::vector<std::string>& query_terms,
                             const std::vector<std::vector<std::string>>& documents, const Bm25Params& params) {
    if (documents.empty()) throw RetrievalError("bm25_rank: empty library");
    if (!(params.k1 > 0.0)) throw RetrievalError("bm25_rank: k1 must be positive");
    if (!(params.b >= 0.0 && params.b <= 1.0)) throw RetrievalError("bm25_rank: b must lie in [0, 1]");

    const std::size_t n = documents.size();
    std::vector<std::unordered_map<std::string_view, double>> term_freq(n);
    std::unordered_map<std::string_view, std::size_t> doc_freq;
    double total_len = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
        total_len += static_cast<double>(documents[d].size());
        for (const auto& term : documents[d]) {
            if (term_freq[d][term]++ == 0.0) ++doc_freq[term];
        }
    }
    const double avgdl = total_len / static_cast<double>(n);

    std::vector<double> norm(n);
    for (std::size_t d = 0; d < n; ++d) {
        const double ratio = avgdl > 0.0 ? static_cast<double>(documents[d].size()) / avgdl : 0.0;
        norm[d] = params.k1 * (1.0 - params.b + params.b * ratio);
    }

    std::vector<double> scores(n, 0.0);
    std::vector<double> tf(n);
    for (const auto& term : query_terms) {
        auto df_it = doc_freq.find(term);
        if (df_it == doc_freq.end()) continue;
        const double df = static_cast<double>(df_it->second);
        const double idf = std::log((static_cast<double>(n) - df + 0.5) / (df + 0.5) + 1.0);
        for (std::size_t d = 0; d < n; ++d) {
            auto it = term_freq[d].find(term);
            tf[d] = it == term_freq[d].end() ? 0.0 : it->second;
        }
        kernels::bm25_accumulate(tf, norm, idf, params.k1, scores);
    }

    RankedTools ranked;
    ranked.entries.reserve(n);
    for (std::size_t d = 0; d < n; ++d) ranked.entries.push_back({d, scores[d]});
    std::stable_sort(ranked.entries.begin(), ranked.entries.end(),
                     [](const RankedEntry& a, const RankedEntry& b) { return a.score > b.score; });
    return ranked;
}

RankedTools bm25_rank(std::string_view query, const ToolLibrary& lib, const Bm25Params& params) {
    std::vector<std::vector<std::string>> documents;
    documents.reserve(lib.size());
    for (const auto& tool : lib.tools()) documents.push_back(tokenize(tool_document(tool)));
    return bm25_rank_tokens(tokenize(query), documents, params);
}

std::vector<std::size_t> top_k(const RankedTools& ranked, std::size_t k) {
    if (k == 0) throw RetrievalError("top_k: k must be at least 1");
    const auto count = std::min(k, ranked.entries.size());
    std::vector<std::size_t> positions;
    positions.reserve(count);
    for (std::size_t i = 0; i < count; ++i) positions.push_back(ranked.entries[i].position);
    return positions;
}

Retriever bm25_retriever(Bm25Params params) {
    return [params](std::string_view query, const ToolLibrary& lib) { return bm25_rank(query, lib, params); };
}

}  // namespace tooldc
