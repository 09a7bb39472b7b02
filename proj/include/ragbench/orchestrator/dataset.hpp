#pragma once

#include "ragbench/retrieval/types.hpp"

#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace ragbench::orchestrator {

struct QAExample {
    std::string example_id;
    std::string question;
    std::vector<std::string> references; // at least one
    std::set<std::string> relevant_doc_ids;
    std::set<std::string> relevant_passage_ids;
    std::string language = "en";

    bool has_judgment() const {
        return !relevant_doc_ids.empty() || !relevant_passage_ids.empty();
    }

    retrieval::RelevanceJudgment judgment() const {
        return {example_id, relevant_doc_ids, relevant_passage_ids};
    }
};

// Dataset file: one {id, question, references, relevant_doc_ids?,
// relevant_passage_ids?, lang?} record per line. Schema violations raise
// SchemaError naming the line; repeated ids raise DuplicateExampleId.
std::vector<QAExample> load_dataset(const std::filesystem::path& path);

void write_dataset(const std::filesystem::path& path, const std::vector<QAExample>& examples);

} // namespace ragbench::orchestrator
