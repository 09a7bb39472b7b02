#pragma once

#include "ragbench/corpus/store.hpp"
#include "ragbench/net/http.hpp"
#include "ragbench/retrieval/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ragbench::rerank {

struct RerankRequest {
    std::string query;
    std::vector<std::pair<std::string, std::string>> passages; // (passage_id, prompt text)
};

struct RerankerEndpoint {
    net::HttpEndpoint http;
    std::size_t max_batch = 32;    // passages per wire request
    std::size_t max_in_flight = 4; // concurrent batches
};

// Scores every passage against the query, positionally aligned with the
// input. Batching (and batch concurrency) is internal: results are identical
// for any max_batch >= 1. Wire format: POST /rerank {query, passages:
// [{id, text}]} -> {scores: [real]}. Count mismatches and non-finite scores
// raise MalformedResponse rather than being patched up.
std::vector<double> score_pairs(const RerankerEndpoint& endpoint, const RerankRequest& request);

// Rescoring pass over a candidate list: fetches prompt texts from the store,
// scores them against the query text, reorders by service score (ties by
// ascending passage_id), keeps the top `keep`, producer = reranked.
retrieval::RankedList rerank(const RerankerEndpoint& endpoint, const std::string& query,
                             const retrieval::RankedList& ranked,
                             const corpus::CorpusStore& store, std::size_t keep);

} // namespace ragbench::rerank
