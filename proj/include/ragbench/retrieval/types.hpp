#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ragbench::retrieval {

enum class Producer { Bm25, Sparse, Dense, Reranked, Oracle, Random };

std::string to_string(Producer producer);
Producer producer_from_string(const std::string& name);

struct RankedList {
    std::string query_id;
    std::vector<std::pair<std::string, double>> entries; // (passage_id, score)
    Producer producer = Producer::Bm25;
};

// Sorts entries by score descending, ties by ascending passage_id, and
// rejects duplicate passage ids.
void finalize_ranking(RankedList& list);

// Checks the RankedList ordering invariant; used after deserialization.
void validate_ranking(const RankedList& list);

struct RelevanceJudgment {
    std::string query_id;
    std::set<std::string> relevant_doc_ids;
    std::set<std::string> relevant_passage_ids;

    bool empty() const { return relevant_doc_ids.empty() && relevant_passage_ids.empty(); }
};

// One ranked-run record: {query_id, entries: [[passage_id, score], ...],
// producer}. Both directions validate the ordering invariant.
nlohmann::json ranked_run_to_json(const RankedList& run);
RankedList ranked_run_from_json(const nlohmann::json& record, const std::string& where = "");

// Ranked runs file: one record per line.
void write_ranked_runs(const std::filesystem::path& path, const std::vector<RankedList>& runs);
std::vector<RankedList> read_ranked_runs(const std::filesystem::path& path);

} // namespace ragbench::retrieval
