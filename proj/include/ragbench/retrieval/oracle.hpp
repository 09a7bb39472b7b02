#pragma once

#include "ragbench/corpus/store.hpp"
#include "ragbench/retrieval/types.hpp"

#include <string>
#include <vector>

namespace ragbench::retrieval {

// Builds the judged-context ranking for one query. Named relevant passages
// win outright (score 1.0). With document-level judgments only, passages of
// relevant documents whose prompt text contains a reference answer (under
// Match normalization) score 1.0 and lead; remaining slots up to k are filled
// with the documents' passages in chunk order at score 0.5.
//
// Throws Error::data("NoOracleAvailable") when the judgment names nothing.
RankedList oracle_context(const std::string& query_id,
                          const std::vector<std::string>& references,
                          const RelevanceJudgment& judgment, const corpus::CorpusStore& store,
                          std::size_t k);

// Fraction of judged-relevant documents with at least one passage in the
// top-k. Documents are judged relevant when listed in relevant_doc_ids or
// when they own a passage in relevant_passage_ids.
double recall_at_k(const RankedList& ranked, const RelevanceJudgment& judgment, std::size_t k);

} // namespace ragbench::retrieval
