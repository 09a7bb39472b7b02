#include "ragbench/retrieval/types.hpp"

#include "ragbench/core/error.hpp"
#include "ragbench/core/jsonl.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace ragbench::retrieval {

std::string to_string(Producer producer) {
    switch (producer) {
        case Producer::Bm25: return "bm25";
        case Producer::Sparse: return "sparse";
        case Producer::Dense: return "dense";
        case Producer::Reranked: return "reranked";
        case Producer::Oracle: return "oracle";
        case Producer::Random: return "random";
    }
    throw Error::data("UnknownProducer", "unreachable producer value");
}

Producer producer_from_string(const std::string& name) {
    if (name == "bm25") return Producer::Bm25;
    if (name == "sparse") return Producer::Sparse;
    if (name == "dense") return Producer::Dense;
    if (name == "reranked") return Producer::Reranked;
    if (name == "oracle") return Producer::Oracle;
    if (name == "random") return Producer::Random;
    throw Error::data("UnknownProducer", "no ranking producer named '" + name + "'");
}

void finalize_ranking(RankedList& list) {
    std::stable_sort(list.entries.begin(), list.entries.end(),
                     [](const auto& a, const auto& b) {
                         if (a.second != b.second) return a.second > b.second;
                         return a.first < b.first;
                     });
    validate_ranking(list);
}

void validate_ranking(const RankedList& list) {
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        const auto& [id, score] = list.entries[i];
        if (!std::isfinite(score)) {
            throw Error::data("InvalidRun", "non-finite score for '" + id + "' in query '" +
                                                list.query_id + "'");
        }
        if (!seen.insert(id).second) {
            throw Error::data("InvalidRun", "duplicate passage '" + id + "' in query '" +
                                                list.query_id + "'");
        }
        if (i > 0) {
            const auto& [prev_id, prev_score] = list.entries[i - 1];
            const bool ordered =
                prev_score > score || (prev_score == score && prev_id < id);
            if (!ordered) {
                throw Error::data("InvalidRun", "entries out of order in query '" +
                                                    list.query_id + "'");
            }
        }
    }
}

nlohmann::json ranked_run_to_json(const RankedList& run) {
    validate_ranking(run);
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [id, score] : run.entries) {
        entries.push_back(nlohmann::json::array({id, score}));
    }
    return {{"query_id", run.query_id},
            {"entries", std::move(entries)},
            {"producer", to_string(run.producer)}};
}

RankedList ranked_run_from_json(const nlohmann::json& record, const std::string& where) {
    const std::string at = where.empty() ? "" : where + ": ";
    if (!record.is_object() || !record.contains("query_id") || !record.contains("entries") ||
        !record.contains("producer")) {
        throw Error::data("SchemaError", at + "ranked run needs query_id, entries, producer");
    }
    RankedList run;
    run.query_id = record["query_id"].get<std::string>();
    run.producer = producer_from_string(record["producer"].get<std::string>());
    for (const auto& entry : record["entries"]) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
            !entry[1].is_number()) {
            throw Error::data("SchemaError", at + "entry must be [passage_id, score]");
        }
        run.entries.emplace_back(entry[0].get<std::string>(), entry[1].get<double>());
    }
    validate_ranking(run);
    return run;
}

void write_ranked_runs(const std::filesystem::path& path, const std::vector<RankedList>& runs) {
    std::vector<nlohmann::json> records;
    records.reserve(runs.size());
    for (const auto& run : runs) records.push_back(ranked_run_to_json(run));
    jsonl::write_all(path, records);
}

std::vector<RankedList> read_ranked_runs(const std::filesystem::path& path) {
    std::vector<RankedList> runs;
    jsonl::for_each(path, [&](std::size_t line_no, const nlohmann::json& record) {
        runs.push_back(
            ranked_run_from_json(record, path.string() + ":" + std::to_string(line_no)));
    });
    return runs;
}

} // namespace ragbench::retrieval
