#include "ragbench/retrieval/oracle.hpp"

#include "ragbench/core/error.hpp"
#include "ragbench/evaluation/normalize.hpp"

#include <algorithm>

namespace ragbench::retrieval {

RankedList oracle_context(const std::string& query_id,
                          const std::vector<std::string>& references,
                          const RelevanceJudgment& judgment, const corpus::CorpusStore& store,
                          std::size_t k) {
    if (k < 1) {
        throw Error::config("InvalidK", "k must be >= 1");
    }
    if (judgment.empty()) {
        throw Error::data("NoOracleAvailable",
                          "query '" + query_id + "' has no relevance judgment");
    }

    RankedList out;
    out.query_id = query_id;
    out.producer = Producer::Oracle;

    if (!judgment.relevant_passage_ids.empty()) {
        for (const auto& id : judgment.relevant_passage_ids) {
            if (out.entries.size() >= k) break;
            if (store.contains(id)) out.entries.emplace_back(id, 1.0);
        }
        finalize_ranking(out);
        return out;
    }

    std::vector<std::string> normalized_refs;
    normalized_refs.reserve(references.size());
    for (const auto& ref : references) {
        auto norm = evaluation::normalize(ref);
        if (!norm.empty()) normalized_refs.push_back(std::move(norm));
    }

    // chunk_index is dense from 0, so probing ids in order walks each
    // document's passages without a corpus-wide scan.
    std::vector<std::pair<std::string, double>> containing;
    std::vector<std::pair<std::string, double>> fillers;
    for (const auto& doc_id : judgment.relevant_doc_ids) {
        for (std::uint32_t chunk = 0;; ++chunk) {
            const auto passage_id = corpus::make_passage_id(doc_id, chunk);
            if (!store.contains(passage_id)) break;
            const auto passage = store.get(passage_id);
            const auto haystack = evaluation::normalize(passage.prompt_text());
            const bool hit = std::any_of(
                normalized_refs.begin(), normalized_refs.end(),
                [&](const std::string& ref) { return haystack.find(ref) != std::string::npos; });
            if (hit) {
                containing.emplace_back(passage_id, 1.0);
            } else {
                fillers.emplace_back(passage_id, 0.5);
            }
        }
    }

    for (auto& entry : containing) {
        if (out.entries.size() >= k) break;
        out.entries.push_back(std::move(entry));
    }
    for (auto& entry : fillers) {
        if (out.entries.size() >= k) break;
        out.entries.push_back(std::move(entry));
    }
    finalize_ranking(out);
    return out;
}

double recall_at_k(const RankedList& ranked, const RelevanceJudgment& judgment, std::size_t k) {
    if (k < 1) {
        throw Error::config("InvalidK", "k must be >= 1");
    }
    std::set<std::string> judged_docs = judgment.relevant_doc_ids;
    for (const auto& passage_id : judgment.relevant_passage_ids) {
        judged_docs.insert(corpus::doc_id_of(passage_id));
    }
    if (judged_docs.empty()) {
        throw Error::data("EmptyJudgment",
                          "query '" + ranked.query_id + "' has no relevance judgment");
    }

    std::set<std::string> covered;
    const auto limit = std::min(k, ranked.entries.size());
    for (std::size_t i = 0; i < limit; ++i) {
        auto doc = corpus::doc_id_of(ranked.entries[i].first);
        if (judged_docs.count(doc)) covered.insert(std::move(doc));
    }
    return static_cast<double>(covered.size()) / static_cast<double>(judged_docs.size());
}

} // namespace ragbench::retrieval
