#include "ragbench/rerank/client.hpp"

#include "ragbench/core/error.hpp"
#include "ragbench/core/parallel.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <unordered_set>

namespace ragbench::rerank {

std::vector<double> score_pairs(const RerankerEndpoint& endpoint, const RerankRequest& request) {
    if (request.passages.empty()) {
        throw Error::data("EmptyRequest", "rerank request needs at least one passage");
    }
    if (endpoint.max_batch < 1) {
        throw Error::config("InvalidBatchSize", "max batch size must be >= 1");
    }
    {
        std::unordered_set<std::string> ids;
        for (const auto& [id, text] : request.passages) {
            if (!ids.insert(id).second) {
                throw Error::data("DuplicatePassage", "rerank request repeats '" + id + "'");
            }
        }
    }

    const auto batch_count =
        (request.passages.size() + endpoint.max_batch - 1) / endpoint.max_batch;
    const auto workers = std::max<std::size_t>(1, endpoint.max_in_flight);

    auto batches = parallel::map_indexed(batch_count, workers, [&](std::size_t b) {
        const auto begin = b * endpoint.max_batch;
        const auto end = std::min(request.passages.size(), begin + endpoint.max_batch);

        nlohmann::json passages = nlohmann::json::array();
        for (std::size_t i = begin; i < end; ++i) {
            passages.push_back({{"id", request.passages[i].first},
                                {"text", request.passages[i].second}});
        }
        const nlohmann::json body = {{"query", request.query}, {"passages", std::move(passages)}};

        const auto response = net::post_json(endpoint.http, "/rerank", body, "rerank service");
        if (response.status != 200) {
            throw Error::service("RequestRejected", "rerank service returned status " +
                                                        std::to_string(response.status));
        }
        auto parsed = nlohmann::json::parse(response.body, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("scores") ||
            !parsed["scores"].is_array()) {
            throw Error::service("MalformedResponse", "rerank response lacks a scores array");
        }
        std::vector<double> scores;
        scores.reserve(end - begin);
        for (const auto& value : parsed["scores"]) {
            if (!value.is_number()) {
                throw Error::service("MalformedResponse", "rerank score is not a number");
            }
            const auto score = value.get<double>();
            if (!std::isfinite(score)) {
                throw Error::service("MalformedResponse", "rerank score is not finite");
            }
            scores.push_back(score);
        }
        if (scores.size() != end - begin) {
            throw Error::service("MalformedResponse",
                                 "rerank service sent " + std::to_string(scores.size()) +
                                     " scores for " + std::to_string(end - begin) + " passages");
        }
        return scores;
    });

    std::vector<double> out;
    out.reserve(request.passages.size());
    for (auto& batch : batches) {
        out.insert(out.end(), batch.begin(), batch.end());
    }
    return out;
}

retrieval::RankedList rerank(const RerankerEndpoint& endpoint, const std::string& query,
                             const retrieval::RankedList& ranked,
                             const corpus::CorpusStore& store, std::size_t keep) {
    if (ranked.entries.empty()) {
        throw Error::data("EmptyRanking", "nothing to rerank for query '" + ranked.query_id + "'");
    }
    if (keep < 1) {
        throw Error::config("InvalidK", "keep must be >= 1");
    }

    RerankRequest request;
    request.query = query;
    request.passages.reserve(ranked.entries.size());
    for (const auto& [id, score] : ranked.entries) {
        request.passages.emplace_back(id, store.get(id).prompt_text());
    }
    const auto scores = score_pairs(endpoint, request);

    retrieval::RankedList out;
    out.query_id = ranked.query_id;
    out.producer = retrieval::Producer::Reranked;
    out.entries.reserve(ranked.entries.size());
    for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
        out.entries.emplace_back(ranked.entries[i].first, scores[i]);
    }
    retrieval::finalize_ranking(out);
    if (out.entries.size() > keep) out.entries.resize(keep);
    return out;
}

} // namespace ragbench::rerank
